"""Problem setup: universe, party datasets, incidence vectors, validated
scheme parameters, and a deterministic randomness source.

Conventions used throughout the package: universe elements and the queried
index are 1-based (element k sits at position k-1 of an incidence tuple);
parties and databases are numbered from 1 in link names but stored 0-based
in internal lists.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ParameterError
from .field import PrimeField, default_alphas, is_prime, validate_alphas

VARIANTS = ("pma1", "spma1", "spma2")
# the type-II scheme serves both the symmetric and the non-symmetric problem
VARIANT_ALIASES = {"pma2": "spma2"}

_MASK64 = (1 << 64) - 1
_DYADIC = 1 << 53


class RandomSource:
    """Counter-mode SHA-256 generator.

    Reproducible by construction and exactly uniform per draw thanks to
    rejection sampling; protocol security is verified by enumeration, so
    reproducibility matters more than entropy here.
    """

    __slots__ = ("_key", "_counter")

    def __init__(self, seed: int) -> None:
        if not isinstance(seed, int):
            raise ParameterError(f"seed must be an int, got {seed!r}")
        self._key = (seed & _MASK64).to_bytes(8, "big")
        self._counter = 0

    @property
    def position(self) -> int:
        return self._counter

    def draw(self, modulus: int) -> int:
        if not isinstance(modulus, int) or modulus < 1:
            raise ParameterError(f"modulus must be a positive int, got {modulus!r}")
        if modulus == 1:
            return 0
        # reject the tail so every residue keeps probability exactly 1/modulus
        bound = (1 << 64) - ((1 << 64) % modulus)
        while True:
            block = hashlib.sha256(self._key + self._counter.to_bytes(16, "big")).digest()
            self._counter += 1
            v = int.from_bytes(block[:8], "big")
            if v < bound:
                return v % modulus

    def draw_vector(self, modulus: int, k: int) -> tuple[int, ...]:
        return tuple(self.draw(modulus) for _ in range(k))


@dataclass(frozen=True)
class SchemeParams:
    """Validated protocol parameters.

    m parties with n databases each over a universe of e elements, in
    GF(p). t is the collusion budget (databases within a party for type I,
    whole parties for type II), y the eavesdropping budget (an int for
    type I, one value per party for type II), t2 the count of communicating
    parties in the type-II extension.
    """

    variant: str
    m: int
    n: int
    t: int
    y: int | tuple[int, ...]
    e: int
    p: int
    t2: int = 1
    alphas: tuple[int, ...] = ()

    @cached_property
    def field(self) -> PrimeField:
        return PrimeField(self.p)

    @property
    def is_type2(self) -> bool:
        return self.variant == "spma2"

    @property
    def y_values(self) -> tuple[int, ...]:
        return self.y if isinstance(self.y, tuple) else (self.y,)

    @property
    def mu(self) -> int:
        """Query noise depth."""
        if self.is_type2:
            return max(self.t * self.n, max(self.y_values))
        return max(self.t, self.y if isinstance(self.y, int) else max(self.y_values))

    @property
    def storage_depth(self) -> int:
        """Noise depth of the type-II storage encoding."""
        return self.t2 * self.n

    @property
    def n_eff(self) -> int:
        """Databases that actually participate in the type-II scheme."""
        if not self.is_type2:
            raise ParameterError("n_eff is defined for the type-II variant only")
        return self.storage_depth + self.mu + 1

    @property
    def n_alphas(self) -> int:
        return self.n_eff if self.is_type2 else self.n

    @property
    def alphas_used(self) -> tuple[int, ...]:
        return self.alphas[: self.n_alphas]

    def summary(self) -> dict:
        out = {
            "variant": self.variant,
            "m": self.m,
            "n": self.n,
            "t": self.t,
            "y": list(self.y_values) if self.is_type2 else self.y,
            "e": self.e,
            "p": self.p,
            "alphas": list(self.alphas_used),
        }
        if self.is_type2:
            out["t2"] = self.t2
            out["n_eff"] = self.n_eff
            out["idle_databases"] = self.m * self.n - self.n_eff
        return out


def auto_p(m: int, n: int) -> int:
    """Smallest prime exceeding max(M, MN+1): always enough room for the
    count range and for MN evaluation points avoiding p-1."""
    q = max(m, m * n + 1) + 1
    while not is_prime(q):
        q += 1
    return q


def auto_n(variant: str, m: int, t: int, y, t2: int = 1) -> int:
    variant = VARIANT_ALIASES.get(variant, variant)
    if variant != "spma2":
        y_int = y if isinstance(y, int) else max(y)
        return max(t, y_int) + 1
    y_max = max(y) if not isinstance(y, int) else y
    for n in range(1, 1025):
        if m * n >= t2 * n + max(t * n, y_max) + 1:
            return n
    raise ParameterError(
        f"no database count satisfies M*N >= T2*N + max(T*N, Y) + 1 for "
        f"M={m}, T={t}, Y={y}, T2={t2}")


def validate_params(params: SchemeParams) -> SchemeParams:
    """Check every side condition; errors name the violated inequality."""
    if params.variant not in VARIANTS:
        raise ParameterError(
            f"unknown variant {params.variant!r}; expected one of {VARIANTS} "
            f"(or alias 'pma2')")
    for name in ("m", "n", "t", "e", "p", "t2"):
        v = getattr(params, name)
        if not isinstance(v, int):
            raise ParameterError(f"{name} must be an int, got {v!r}")
    if params.m < 2:
        raise ParameterError(f"party count M must be at least 2, got {params.m}")
    if params.n < 1:
        raise ParameterError(f"database count N must be at least 1, got {params.n}")
    if params.e < 1:
        raise ParameterError(f"universe size E must be at least 1, got {params.e}")
    if params.t < 0:
        raise ParameterError(f"collusion budget T must be non-negative, got {params.t}")
    if params.t2 < 1:
        raise ParameterError(f"communicating-party count T2 must be >= 1, got {params.t2}")
    field = params.field  # validates primality
    if params.p <= params.m:
        raise ParameterError(
            f"counts range over 0..M, so p > M is required: p={params.p}, M={params.m}")
    if params.is_type2:
        y = params.y
        if not (isinstance(y, tuple) and len(y) == params.m
                and all(isinstance(v, int) and v >= 0 for v in y)):
            raise ParameterError(
                f"type-II eavesdropping budgets must be {params.m} non-negative "
                f"ints, got {y!r}")
        n_eff = params.n_eff
        if params.m * params.n < n_eff:
            raise ParameterError(
                f"type-II side condition M*N >= T2*N + max(T*N, Y_1..Y_M) + 1 "
                f"violated: {params.m * params.n} < {n_eff}")
    else:
        if not (isinstance(params.y, int) and params.y >= 0):
            raise ParameterError(
                f"type-I eavesdropping budget Y must be a non-negative int, "
                f"got {params.y!r}")
        required = max(params.t, params.y) + 1
        if params.n < required:
            raise ParameterError(
                f"type-I side condition N >= max(T, Y) + 1 violated: "
                f"N={params.n} < {required}")
        if params.n > required:
            warnings.warn(
                "N exceeds max(T, Y) + 1; the extra databases only add download cost",
                UserWarning, stacklevel=2)
    if len(params.alphas) < params.n_alphas:
        raise ParameterError(
            f"need {params.n_alphas} evaluation points, got {len(params.alphas)}")
    validate_alphas(field, params.alphas)
    if params.mu == 0:
        warnings.warn(
            "query noise depth is 0: queries are sent in the clear "
            "(no collusion or eavesdropping budget)",
            UserWarning, stacklevel=2)
    return params


def make_params(variant: str, m: int, e: int, *, t: int = 0, y=0,
                n: int | None = None, p: int | None = None, t2: int = 1,
                alphas: Sequence[int] | None = None) -> SchemeParams:
    """Build and validate parameters, filling N, p and the evaluation
    points with their defaults when omitted."""
    variant = VARIANT_ALIASES.get(variant, variant)
    if variant not in VARIANTS:
        raise ParameterError(
            f"unknown variant {variant!r}; expected one of {VARIANTS} (or alias 'pma2')")
    if variant == "spma2":
        if isinstance(y, int):
            y = (y,) * m
        else:
            y = tuple(int(v) for v in y)
    elif not isinstance(y, int):
        vals = tuple(int(v) for v in y)
        if len(set(vals)) != 1:
            raise ParameterError(
                f"type-I variants take a single eavesdropping budget, got {y!r}")
        y = vals[0]
    if n is None:
        n = auto_n(variant, m, t, y, t2)
    if p is None:
        p = auto_p(m, n)
    draft = SchemeParams(variant=variant, m=m, n=n, t=t, y=y, e=e, p=p, t2=t2,
                         alphas=(0,))
    # n_alphas needs a constructed object; swap in the real points next
    count = draft.n_alphas
    if alphas is None:
        alphas = default_alphas(p, count)
    params = SchemeParams(variant=variant, m=m, n=n, t=t, y=y, e=e, p=p, t2=t2,
                          alphas=tuple(alphas))
    return validate_params(params)


@dataclass(frozen=True)
class PartyDataset:
    """The element indices one party holds. Empty sets are legal."""

    members: frozenset[int]

    @classmethod
    def of(cls, members: Iterable[int]) -> "PartyDataset":
        return cls(frozenset(members))


def incidence(dataset: PartyDataset, e: int) -> tuple[int, ...]:
    """0/1 vector with a one at each held index."""
    for k in dataset.members:
        if not (isinstance(k, int) and 1 <= k <= e):
            raise ParameterError(f"dataset member {k!r} outside universe 1..{e}")
    return tuple(1 if k in dataset.members else 0 for k in range(1, e + 1))


def members_of(bits: Sequence[int]) -> PartyDataset:
    """Inverse of :func:`incidence`."""
    return PartyDataset(frozenset(k + 1 for k, b in enumerate(bits) if b))


def unit_vector(theta: int, e: int) -> tuple[int, ...]:
    if not (isinstance(theta, int) and 1 <= theta <= e):
        raise ParameterError(f"queried index {theta!r} outside 1..{e}")
    return tuple(1 if k == theta else 0 for k in range(1, e + 1))


def true_count(theta: int, datasets: Sequence[PartyDataset], e: int) -> int:
    """Brute-force count of parties holding element theta; the oracle every
    decoder is checked against."""
    if not (isinstance(theta, int) and 1 <= theta <= e):
        raise ParameterError(f"queried index {theta!r} outside 1..{e}")
    return sum(1 for d in datasets if theta in d.members)


def generate_datasets(params: SchemeParams, probs,
                      rng: RandomSource) -> list[PartyDataset]:
    """Independent membership draws: element k joins each party with
    probability probs[k-1]; a scalar applies to every element."""
    if isinstance(probs, (int, float)):
        plist = [float(probs)] * params.e
    else:
        plist = [float(x) for x in probs]
        if len(plist) != params.e:
            raise ParameterError(
                f"need {params.e} membership probabilities, got {len(plist)}")
    for pk in plist:
        if not 0.0 <= pk <= 1.0:
            raise ParameterError(f"membership probability {pk} outside [0, 1]")
    datasets = []
    for _ in range(params.m):
        members = {k for k in range(1, params.e + 1)
                   if rng.draw(_DYADIC) / _DYADIC < plist[k - 1]}
        datasets.append(PartyDataset(frozenset(members)))
    return datasets


def load_datasets(source) -> tuple[tuple[str, ...], list[PartyDataset]]:
    """Read ``{"universe": [...], "parties": [[...], ...]}``.

    Accepts a parsed dict or a file path. Elements map to indices 1..E via
    the sorted order of the universe; validation errors name the offending
    element.
    """
    if isinstance(source, dict):
        obj = source
    else:
        obj = json.loads(Path(source).read_text())
    if not isinstance(obj, dict) or "universe" not in obj or "parties" not in obj:
        raise ParameterError('dataset input must be {"universe": [...], "parties": [[...]]}')
    universe = obj["universe"]
    if not isinstance(universe, list) or not universe \
            or not all(isinstance(x, str) for x in universe):
        raise ParameterError("universe must be a non-empty list of strings")
    if len(set(universe)) != len(universe):
        dupes = sorted({x for x in universe if universe.count(x) > 1})
        raise ParameterError(f"universe contains duplicate elements: {dupes}")
    order = tuple(sorted(universe))
    index = {name: k + 1 for k, name in enumerate(order)}
    parties = obj["parties"]
    if not isinstance(parties, list) or not all(isinstance(pp, list) for pp in parties):
        raise ParameterError("parties must be a list of element lists")
    datasets = []
    for pp in parties:
        members = set()
        for el in pp:
            if el not in index:
                raise ParameterError(f"unknown element {el!r} (not in universe)")
            members.add(index[el])
        datasets.append(PartyDataset(frozenset(members)))
    return order, datasets
