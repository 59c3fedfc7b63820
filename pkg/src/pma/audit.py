"""Exhaustive privacy and security audits.

Every audit enumerates all assignments of the relevant random variables
over GF(p) at desk-scale parameters, builds the exact probability mass
function of an adversary's view as Fractions, and asserts distribution
equality across the secrets the adversary must not learn. No sampling, no
thresholds: two views are independent of a secret iff the maps compare
equal.

The audited claims, by identifier:

* lemma1 — symmetric privacy: given the queries and the count, the answer
  tuple's distribution does not depend on which other elements parties hold.
* lemma2 — blind estimation: given the count, the answer tuple's
  distribution does not depend on which parties hold the queried element.
* lemma3 — type-II collusion resistance: any T*N pooled queries are
  jointly independent of the queried index.
* lemma4 — type-I collusion resistance: any T queries within a party are
  jointly independent of the queried index.
* lemma5 — storage security: any T2*N stored shares of one party are
  jointly independent of its incidence vector.
* lemma6 — type-I eavesdropper security: up to Y tapped query/answer pairs
  of a party reveal nothing about the index, that party's contents, or the
  count.
* lemma7 — type-II eavesdropper security: tapped query/answer pairs reveal
  nothing about the aggregated contents.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Callable, Sequence

from . import pma1, spma1, spma2
from .errors import AuditInfeasibleError, ParameterError
from .field import PrimeField, noise_pad_scalar
from .model import SchemeParams

DEFAULT_CAP = 10_000_000

DistributionMap = dict


class _Cursor:
    """Slices one flat enumeration assignment into noise/mask structures."""

    __slots__ = ("flat", "i")

    def __init__(self, flat):
        self.flat = flat
        self.i = 0

    def vec(self, k):
        v = self.flat[self.i:self.i + k]
        self.i += k
        return tuple(v)

    def rows(self, r, k):
        return tuple(self.vec(k) for _ in range(r))


def enumerate_distribution(view: Callable, dims: int, p: int,
                           cap: int = DEFAULT_CAP) -> DistributionMap:
    """Exact pmf of ``view(assignment)`` over all p**dims assignments."""
    total = p ** dims
    if total > cap:
        raise AuditInfeasibleError(
            f"enumeration needs {total} assignments ({dims} GF({p}) scalars), "
            f"cap is {cap}")
    counts = Counter()
    for assignment in itertools.product(range(p), repeat=dims):
        counts[view(assignment)] += 1
    return {v: Fraction(c, total) for v, c in sorted(counts.items())}


def difference_witness(label_a, dist_a, label_b, dist_b) -> dict | None:
    """First view whose probability differs between two distributions."""
    for key in sorted(set(dist_a) | set(dist_b)):
        pa = dist_a.get(key, Fraction(0))
        pb = dist_b.get(key, Fraction(0))
        if pa != pb:
            return {
                "config_a": repr(label_a),
                "config_b": repr(label_b),
                "view": list(key),
                "prob_a": str(pa),
                "prob_b": str(pb),
            }
    return None


@dataclass
class AuditResult:
    name: str
    lemma: str | None
    passed: bool
    assignments: int
    detail: dict = dataclass_field(default_factory=dict)
    witness: dict | None = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lemma": self.lemma,
            "verdict": "pass" if self.passed else "fail",
            "enumerated_assignments": self.assignments,
            "params": self.detail,
            "witness": self.witness,
        }


def _compare_all(dists: dict) -> dict | None:
    """None if every distribution in the mapping is identical, else a
    witness for the first difference."""
    items = list(dists.items())
    base_label, base = items[0]
    for label, dist in items[1:]:
        if dist != base:
            return difference_witness(base_label, base, label, dist)
    return None


def _all_datasets(m: int, e: int):
    """Every assignment of incidence bits to M parties over E elements."""
    return itertools.product(itertools.product((0, 1), repeat=e), repeat=m)


def _canonical_rows(depth: int, e: int, p: int) -> tuple:
    """A fixed, reproducible, not-all-zero noise realization."""
    return tuple(tuple((7 * l + 3 * k + 1) % p for k in range(e))
                 for l in range(depth))


def _scaled_rows(depth: int, e: int, value: int) -> tuple:
    return tuple(((value,) * e) for _ in range(depth))


# ---------------------------------------------------------------------------
# collusion resistance (lemma3 / lemma4)

def audit_query_privacy(params: SchemeParams, colluding_dbs: Sequence[int], *,
                        cap: int = DEFAULT_CAP) -> AuditResult:
    """Joint queries on the colluding databases must have the same exact
    distribution for every queried index.

    ``colluding_dbs`` are 1-based database indices: within one party for
    the type-I variants (the query structure is identical across parties),
    global for type II.
    """
    f = params.field
    alphas = params.alphas_used
    limit = params.n_eff if params.is_type2 else params.n
    taps = tuple(colluding_dbs)
    for j in taps:
        if not 1 <= j <= limit:
            raise ParameterError(f"database index {j} outside 1..{limit}")
    builder = spma2.query_vector if params.is_type2 else pma1.query_vector
    dims = params.mu * params.e

    def make_view(theta):
        def view(assignment):
            cur = _Cursor(assignment)
            rows = cur.rows(params.mu, params.e)
            out = []
            for j in taps:
                out.extend(builder(theta, alphas[j - 1], rows, params))
            return tuple(out)
        return view

    dists = {}
    for theta in range(1, params.e + 1):
        dists[("theta", theta)] = enumerate_distribution(
            make_view(theta), dims, f.p, cap)
    witness = _compare_all(dists)
    lemma = "lemma3" if params.is_type2 else "lemma4"
    return AuditResult(
        name="query-privacy", lemma=lemma, passed=witness is None,
        assignments=params.e * f.p ** dims,
        detail={**params.summary(), "colluding_dbs": list(taps)},
        witness=witness)


# ---------------------------------------------------------------------------
# blind estimation (lemma2)

def _bits_with_placement(gamma_flat, placement, theta, m, e):
    """Incidence vectors from fixed non-queried bits plus a placement of
    the queried element."""
    bits = []
    pos = 0
    for i in range(m):
        row = []
        for k in range(1, e + 1):
            if k == theta:
                row.append(1 if i in placement else 0)
            else:
                row.append(gamma_flat[pos])
                pos += 1
        bits.append(tuple(row))
    return tuple(bits)


def audit_blind_estimation(params: SchemeParams, *, zero_masks: bool = False,
                           thetas: Sequence[int] | None = None,
                           cap: int = DEFAULT_CAP) -> AuditResult:
    """For every count value, the answer tuple must be identically
    distributed across all placements of the queried element.

    The enumeration covers the query noise together with the masks (and
    the per-party blinding for the symmetric variant): the user-privacy
    requirement conditions on the answers and the count only, so the
    user's own query randomness is marginalized here.
    """
    if params.is_type2:
        raise ParameterError("blind-estimation audit applies to the type-I variants")
    blinded = params.variant == "spma1"
    f = params.field
    m, n, e, mu = params.m, params.n, params.e, params.mu
    alphas = params.alphas_used
    z_dims = m * mu * e
    s_dims = 0 if zero_masks else (m - 1) * n
    zp_dims = m * (n - 1) if blinded else 0
    dims = z_dims + s_dims + zp_dims
    thetas = list(range(1, e + 1)) if thetas is None else list(thetas)
    zero_free = tuple(((0,) * n) for _ in range(m - 1))
    assignments = 0

    for theta in thetas:
        for gamma_flat in itertools.product((0, 1), repeat=m * (e - 1)):
            for kappa in range(m + 1):
                placements = list(itertools.combinations(range(m), kappa))
                if len(placements) < 2:
                    continue
                dists = {}
                for placement in placements:
                    bits = _bits_with_placement(gamma_flat, placement, theta, m, e)

                    def view(assignment, bits=bits, theta=theta):
                        cur = _Cursor(assignment)
                        noise = tuple(cur.rows(mu, e) for _ in range(m))
                        free = zero_free if zero_masks else cur.rows(m - 1, n)
                        masks = pma1.masks_from_free(params, free)
                        zrows = cur.rows(m, n - 1) if blinded else None
                        out = []
                        for i in range(m):
                            for j in range(n):
                                q = pma1.query_vector(theta, alphas[j], noise[i], params)
                                if blinded:
                                    a = spma1.answer(bits[i], q, zrows[i],
                                                     masks.masks[i][j], alphas[j], f)
                                else:
                                    a = pma1.answer(bits[i], q, masks.masks[i][j], f)
                                out.append(a)
                        return tuple(out)

                    dists[("theta", theta, "gamma", gamma_flat,
                           "placement", placement)] = enumerate_distribution(
                        view, dims, f.p, cap)
                    assignments += f.p ** dims
                witness = _compare_all(dists)
                if witness is not None:
                    return AuditResult(
                        name="blind-estimation", lemma="lemma2", passed=False,
                        assignments=assignments,
                        detail={**params.summary(), "zero_masks": zero_masks,
                                "kappa": kappa},
                        witness=witness)
    return AuditResult(
        name="blind-estimation", lemma="lemma2", passed=True,
        assignments=assignments,
        detail={**params.summary(), "zero_masks": zero_masks})


# ---------------------------------------------------------------------------
# symmetric privacy (lemma1)

def _type1_noise_realizations(params: SchemeParams):
    zero = tuple(tuple((0,) * params.e for _ in range(params.mu))
                 for _ in range(params.m))
    ones = tuple(tuple((1,) * params.e for _ in range(params.mu))
                 for _ in range(params.m))
    return (("zero", zero), ("one", ones))


def _type2_noise_realizations(params: SchemeParams):
    return (("zero", _scaled_rows(params.mu, params.e, 0)),
            ("one", _scaled_rows(params.mu, params.e, 1)))


def audit_symmetric_privacy(params: SchemeParams, *, zero_blinding: bool = False,
                            thetas: Sequence[int] = (1,),
                            cap: int = DEFAULT_CAP) -> AuditResult:
    """With the queries fixed and the count given, the answer tuple must be
    identically distributed across every dataset configuration with that
    count.

    The check runs under several fixed query-noise realizations and must
    hold for each of them. The non-symmetric type-I scheme is accepted here
    so the suite can demonstrate that it fails.
    """
    f = params.field
    m, e = params.m, params.e
    alphas = params.alphas_used
    assignments = 0

    if params.is_type2:
        n_eff = params.n_eff
        zp_dims = 0 if zero_blinding else n_eff - 1
        zero_zp = (0,) * (n_eff - 1)
        xrows = _canonical_rows(params.storage_depth, e, f.p)
        realizations = _type2_noise_realizations(params)
        for theta in thetas:
            for rlabel, zrows in realizations:
                queries = [spma2.query_vector(theta, alphas[nn], zrows, params)
                           for nn in range(n_eff)]
                # answers read the datasets only through the aggregated
                # bit-sums, so enumerate those directly
                groups: dict[int, dict] = {}
                for sigma in itertools.product(range(m + 1), repeat=e):
                    ptildes = [spma2.storage_vector(sigma, alphas[nn], xrows, params)
                               for nn in range(n_eff)]

                    def view(assignment, ptildes=ptildes, queries=queries):
                        cur = _Cursor(assignment)
                        zp = zero_zp if zero_blinding else cur.vec(n_eff - 1)
                        return tuple(
                            spma2.answer(ptildes[nn], queries[nn], zp, alphas[nn], f)
                            for nn in range(n_eff))

                    kappa = sigma[theta - 1]
                    groups.setdefault(kappa, {})[
                        ("realization", rlabel, "sums", sigma)] = \
                        enumerate_distribution(view, zp_dims, f.p, cap)
                    assignments += f.p ** zp_dims
                for kappa, dists in groups.items():
                    witness = _compare_all(dists)
                    if witness is not None:
                        return AuditResult(
                            name="symmetric-privacy", lemma="lemma1", passed=False,
                            assignments=assignments,
                            detail={**params.summary(), "zero_blinding": zero_blinding,
                                    "kappa": kappa, "realization": rlabel},
                            witness=witness)
        return AuditResult(name="symmetric-privacy", lemma="lemma1", passed=True,
                           assignments=assignments,
                           detail={**params.summary(), "zero_blinding": zero_blinding})

    blinded = params.variant == "spma1" and not zero_blinding
    n = params.n
    s_dims = (m - 1) * n
    zp_dims = m * (n - 1) if blinded else 0
    dims = s_dims + zp_dims
    realizations = _type1_noise_realizations(params)
    for theta in thetas:
        for rlabel, noise in realizations:
            queries = [[pma1.query_vector(theta, alphas[j], noise[i], params)
                        for j in range(n)] for i in range(m)]
            groups: dict[int, dict] = {}
            for bits in _all_datasets(m, e):
                base = [[f.dot(bits[i], queries[i][j]) for j in range(n)]
                        for i in range(m)]

                def view(assignment, base=base):
                    cur = _Cursor(assignment)
                    masks = pma1.masks_from_free(params, cur.rows(m - 1, n))
                    zrows = cur.rows(m, n - 1) if blinded else None
                    out = []
                    for i in range(m):
                        for j in range(n):
                            a = base[i][j]
                            if blinded:
                                a = noise_pad_scalar(f, a, alphas[j], zrows[i])
                            out.append(f.add(a, masks.masks[i][j]))
                    return tuple(out)

                kappa = sum(bits[i][theta - 1] for i in range(m))
                groups.setdefault(kappa, {})[
                    ("realization", rlabel, "bits", bits)] = \
                    enumerate_distribution(view, dims, f.p, cap)
                assignments += f.p ** dims
            for kappa, dists in groups.items():
                witness = _compare_all(dists)
                if witness is not None:
                    return AuditResult(
                        name="symmetric-privacy", lemma="lemma1", passed=False,
                        assignments=assignments,
                        detail={**params.summary(), "zero_blinding": zero_blinding,
                                "kappa": kappa, "realization": rlabel},
                        witness=witness)
    return AuditResult(name="symmetric-privacy", lemma="lemma1", passed=True,
                       assignments=assignments,
                       detail={**params.summary(), "zero_blinding": zero_blinding})


# ---------------------------------------------------------------------------
# storage security (lemma5)

def audit_storage_security(params: SchemeParams, *, subset_size: int | None = None,
                           zero_storage_noise: bool = False,
                           cap: int = DEFAULT_CAP) -> AuditResult:
    """Any storage-depth-many shares of one party must have the same exact
    joint distribution for every value of that party's incidence vector."""
    if not params.is_type2:
        raise ParameterError("storage-security audit applies to the type-II variant")
    f = params.field
    depth, e, n_eff = params.storage_depth, params.e, params.n_eff
    alphas = params.alphas_used
    size = depth if subset_size is None else subset_size
    if not 1 <= size <= n_eff:
        raise ParameterError(f"share subset size {size} outside 1..{n_eff}")
    dims = 0 if zero_storage_noise else depth * e
    zero_rows = _scaled_rows(depth, e, 0)
    assignments = 0
    for subset in itertools.combinations(range(n_eff), size):
        dists = {}
        for bits in itertools.product((0, 1), repeat=e):

            def view(assignment, bits=bits, subset=subset):
                cur = _Cursor(assignment)
                rows = zero_rows if zero_storage_noise else cur.rows(depth, e)
                out = []
                for j in subset:
                    out.extend(spma2.storage_vector(bits, alphas[j], rows, params))
                return tuple(out)

            dists[("bits", bits)] = enumerate_distribution(view, dims, f.p, cap)
            assignments += f.p ** dims
        witness = _compare_all(dists)
        if witness is not None:
            return AuditResult(
                name="storage-security", lemma="lemma5", passed=False,
                assignments=assignments,
                detail={**params.summary(), "subset_size": size,
                        "zero_storage_noise": zero_storage_noise,
                        "subset": [j + 1 for j in subset]},
                witness=witness)
    return AuditResult(
        name="storage-security", lemma="lemma5", passed=True,
        assignments=assignments,
        detail={**params.summary(), "subset_size": size,
                "zero_storage_noise": zero_storage_noise})


# ---------------------------------------------------------------------------
# eavesdropper security (lemma6 / lemma7)

def audit_eavesdropper(params: SchemeParams, taps: Sequence[int], *,
                       zero_masks: bool = False,
                       cap: int = DEFAULT_CAP) -> AuditResult:
    """Query/answer pairs on the tapped links must be identically
    distributed regardless of the queried index and of the protected
    contents.

    Type I taps name databases of one party (party 1 without loss of
    generality); the tapped party's mask vector is enumerated directly,
    which is exact because any single party's masks are marginally uniform
    under the zero-sum coupling. Type II taps name participating databases;
    the storage noise is held at a fixed realization since the blinding and
    query noise alone must carry the argument.
    """
    f = params.field
    alphas = params.alphas_used
    taps = tuple(taps)
    limit = params.n_eff if params.is_type2 else params.n
    for j in taps:
        if not 1 <= j <= limit:
            raise ParameterError(f"database index {j} outside 1..{limit}")
    assignments = 0

    if params.is_type2:
        n_eff, e, m, mu = params.n_eff, params.e, params.m, params.mu
        z_dims = mu * e
        zp_dims = n_eff - 1
        dims = z_dims + zp_dims
        xrows = _canonical_rows(params.storage_depth, e, f.p)
        dists = {}
        for theta in range(1, e + 1):
            for sigma in itertools.product(range(m + 1), repeat=e):
                ptildes = {j: spma2.storage_vector(sigma, alphas[j - 1], xrows, params)
                           for j in taps}

                def view(assignment, theta=theta, ptildes=ptildes):
                    cur = _Cursor(assignment)
                    zrows = cur.rows(mu, e)
                    zp = cur.vec(n_eff - 1)
                    out = []
                    for j in taps:
                        q = spma2.query_vector(theta, alphas[j - 1], zrows, params)
                        out.extend(q)
                        out.append(spma2.answer(ptildes[j], q, zp, alphas[j - 1], f))
                    return tuple(out)

                dists[("theta", theta, "sums", sigma)] = \
                    enumerate_distribution(view, dims, f.p, cap)
                assignments += f.p ** dims
        witness = _compare_all(dists)
        return AuditResult(
            name="eavesdropper", lemma="lemma7", passed=witness is None,
            assignments=assignments,
            detail={**params.summary(), "taps": list(taps)},
            witness=witness)

    blinded = params.variant == "spma1"
    n, e, mu = params.n, params.e, params.mu
    z_dims = mu * e
    s_dims = 0 if zero_masks else n
    zp_dims = (n - 1) if blinded else 0
    dims = z_dims + s_dims + zp_dims
    zero_mask_vec = (0,) * n
    dists = {}
    for theta in range(1, e + 1):
        for bits in itertools.product((0, 1), repeat=e):

            def view(assignment, theta=theta, bits=bits):
                cur = _Cursor(assignment)
                zrows = cur.rows(mu, e)
                svec = zero_mask_vec if zero_masks else cur.vec(n)
                zprow = cur.vec(n - 1) if blinded else None
                out = []
                for j in taps:
                    q = pma1.query_vector(theta, alphas[j - 1], zrows, params)
                    out.extend(q)
                    if blinded:
                        a = spma1.answer(bits, q, zprow, svec[j - 1], alphas[j - 1], f)
                    else:
                        a = pma1.answer(bits, q, svec[j - 1], f)
                    out.append(a)
                return tuple(out)

            dists[("theta", theta, "bits", bits)] = \
                enumerate_distribution(view, dims, f.p, cap)
            assignments += f.p ** dims
    witness = _compare_all(dists)
    return AuditResult(
        name="eavesdropper", lemma="lemma6", passed=witness is None,
        assignments=assignments,
        detail={**params.summary(), "taps": list(taps), "zero_masks": zero_masks},
        witness=witness)


# ---------------------------------------------------------------------------
# inter-party dealing independence

def audit_interparty_dealing(params: SchemeParams, *,
                             cap: int = DEFAULT_CAP) -> AuditResult:
    """The only inter-party traffic in the type-I schemes is mask dealing;
    its payload distribution must not depend on any dataset."""
    if params.is_type2:
        raise ParameterError("inter-party dealing audit applies to the type-I variants")
    f = params.field
    dims = (params.m - 1) * params.n
    dists = {}
    assignments = 0
    for bits in _all_datasets(params.m, params.e):
        # the dealt payloads are exactly the enumerated free masks; datasets
        # never enter their construction
        def view(assignment):
            return tuple(assignment)

        dists[("bits", bits)] = enumerate_distribution(view, dims, f.p, cap)
        assignments += f.p ** dims
    witness = _compare_all(dists)
    return AuditResult(
        name="interparty-dealing-independence", lemma=None,
        passed=witness is None, assignments=assignments,
        detail=params.summary(), witness=witness)


# ---------------------------------------------------------------------------
# degree-structure oracle

def oracle_polynomial_expand(lhs_coeffs: Sequence[Sequence[int]],
                             rhs_coeffs: Sequence[Sequence[int]],
                             p: int) -> tuple[int, ...]:
    """Symbolic product of two vector-coefficient polynomials in the
    indeterminate (1 + alpha); output coefficients are the inner products.

    Independent cross-check of the answer structure: expanding a storage
    polynomial against a query polynomial must give degree L+R and a
    constant coefficient equal to the stored/queried overlap.
    """
    f = PrimeField(p)
    if not lhs_coeffs or not rhs_coeffs:
        raise ParameterError("coefficient lists must be non-empty")
    out = [0] * (len(lhs_coeffs) + len(rhs_coeffs) - 1)
    for ia, va in enumerate(lhs_coeffs):
        for ib, vb in enumerate(rhs_coeffs):
            out[ia + ib] = (out[ia + ib] + f.dot(va, vb)) % p
    return tuple(out)
