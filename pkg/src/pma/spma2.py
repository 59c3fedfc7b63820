"""Count protocol with type-II collusion and symmetric privacy.

Here whole parties may collude (all their databases pool queries), so
incidence vectors cannot be replicated. Instead each party secret-shares
its vector to the participating databases with noise depth T2*N — any
T2*N stored shares are jointly uniform — and every database aggregates
the shares it received into one vector. Queries carry noise of depth
max(T*N, Y_1..Y_M); answers add globally agreed blinding scalars so the
interference coefficients stay uniform at the user. One inversion of the
full evaluation matrix recovers the count from the constant coefficient.

Only n_eff = T2*N + max(T*N, Y_1..Y_M) + 1 databases participate; when
M*N exceeds that, the surplus databases receive no storage, queries or
noise. The non-symmetric type-II problem runs this same scheme.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import IntegrityError, ParameterError
from .field import build_upsilon, noise_pad_scalar, noise_pad_vector, solve_linear
from .model import PartyDataset, RandomSource, SchemeParams, incidence, unit_vector
from .transcript import (ANSWER, NOISE_SHARE, QUERY, ROUND_ANSWER, ROUND_QUERY,
                         ROUND_SETUP, STORAGE_SHARE, Transcript)


@dataclass(frozen=True)
class StorageShare:
    """One party's encoding: noise[l] are the storage noise vectors,
    shares[n] is what database n+1 stores before aggregation."""

    noise: tuple
    shares: tuple


@dataclass(frozen=True)
class QuerySet:
    """queries[n] goes to database n+1; the noise vectors are shared across
    all participating databases."""

    theta: int
    noise: tuple
    queries: tuple


@dataclass(frozen=True)
class GlobalNoise:
    """The n_eff - 1 blinding scalars all parties agree on."""

    zprime: tuple


@dataclass(frozen=True)
class ProtocolRun:
    params: SchemeParams
    theta: int
    count: int
    storage: tuple
    aggregated: tuple
    queries: QuerySet
    blinding: GlobalNoise
    answers: tuple
    transcript: Transcript


def effective_db_count(params: SchemeParams) -> int:
    """Participating databases; the validated side condition guarantees
    this never exceeds M*N."""
    return params.n_eff


def storage_vector(bits: Sequence[int], alpha: int, noise_rows,
                   params: SchemeParams) -> tuple[int, ...]:
    return noise_pad_vector(params.field, bits, alpha, noise_rows)


def draw_storage_noise(params: SchemeParams, rng: RandomSource) -> tuple:
    return tuple(rng.draw_vector(params.p, params.e)
                 for _ in range(params.storage_depth))


def encode_from_noise(bits: Sequence[int], params: SchemeParams,
                      noise_rows) -> StorageShare:
    if len(noise_rows) != params.storage_depth:
        raise ParameterError(
            f"storage encoding needs {params.storage_depth} noise vectors, "
            f"got {len(noise_rows)}")
    alphas = params.alphas_used
    shares = tuple(storage_vector(bits, alphas[n], noise_rows, params)
                   for n in range(params.n_eff))
    return StorageShare(noise=tuple(tuple(r) for r in noise_rows), shares=shares)


def encode_storage(bits: Sequence[int], params: SchemeParams,
                   rng: RandomSource) -> StorageShare:
    return encode_from_noise(bits, params, draw_storage_noise(params, rng))


def aggregate(shares: Sequence[Sequence[int]], params: SchemeParams) -> tuple[int, ...]:
    """Componentwise sum of the M shares one database received."""
    if len(shares) != params.m:
        raise IntegrityError(
            f"database aggregation needs one share per party: got {len(shares)}, "
            f"expected {params.m}")
    f = params.field
    total = [0] * params.e
    for vec in shares:
        if len(vec) != params.e:
            raise ParameterError(f"share length {len(vec)} != E={params.e}")
        for k, v in enumerate(vec):
            total[k] = (total[k] + f.check(v)) % f.p
    return tuple(total)


def query_vector(theta: int, alpha: int, noise_rows, params: SchemeParams) -> tuple[int, ...]:
    return noise_pad_vector(params.field, unit_vector(theta, params.e), alpha, noise_rows)


def draw_query_noise(params: SchemeParams, rng: RandomSource) -> tuple:
    return tuple(rng.draw_vector(params.p, params.e) for _ in range(params.mu))


def zero_query_noise(params: SchemeParams) -> tuple:
    return tuple((0,) * params.e for _ in range(params.mu))


def queries_from_noise(theta: int, params: SchemeParams, noise) -> QuerySet:
    alphas = params.alphas_used
    queries = tuple(query_vector(theta, alphas[n], noise, params)
                    for n in range(params.n_eff))
    return QuerySet(theta=theta, noise=tuple(tuple(r) for r in noise), queries=queries)


def gen_queries(theta: int, params: SchemeParams, rng: RandomSource) -> QuerySet:
    return queries_from_noise(theta, params, draw_query_noise(params, rng))


def draw_global_noise(params: SchemeParams, rng: RandomSource) -> GlobalNoise:
    return GlobalNoise(zprime=rng.draw_vector(params.p, params.n_eff - 1))


def zero_global_noise(params: SchemeParams) -> GlobalNoise:
    return GlobalNoise(zprime=(0,) * (params.n_eff - 1))


def answer(ptilde: Sequence[int], query: Sequence[int], zprime: Sequence[int],
           alpha: int, field) -> int:
    """One database's reply: aggregated-storage inner product plus the
    power-weighted global blinding scalars.

    The result is the evaluation at (1 + alpha) of a polynomial of degree
    at most n_eff - 1 whose constant coefficient is the count.
    """
    return noise_pad_scalar(field, field.dot(ptilde, query), alpha, zprime)


def decode(answers: Sequence[int], params: SchemeParams) -> int:
    f = params.field
    n_eff = params.n_eff
    if len(answers) != n_eff:
        raise ParameterError(f"expected {n_eff} answers, got {len(answers)}")
    ups = build_upsilon(f, params.alphas_used, n_eff)
    x = solve_linear(f, ups, [f.check(a) for a in answers])
    count = x[0]
    if count > params.m:
        raise IntegrityError(
            f"decoded count {count} outside 0..{params.m}; transcript corrupted")
    return count


def run(params: SchemeParams, datasets: Sequence[PartyDataset], theta: int,
        rng: RandomSource, transcript: Transcript | None = None, *,
        force_zero_blinding: bool = False) -> ProtocolRun:
    if params.variant != "spma2":
        raise ParameterError(f"expected spma2 parameters, got {params.variant!r}")
    if len(datasets) != params.m:
        raise ParameterError(f"expected {params.m} datasets, got {len(datasets)}")
    tr = Transcript() if transcript is None else transcript
    f = params.field
    n_eff = params.n_eff
    alphas = params.alphas_used

    storage = tuple(
        encode_storage(incidence(d, params.e), params, rng) for d in datasets)
    for i, enc in enumerate(storage):
        for n in range(n_eff):
            tr.emit(ROUND_SETUP, f"p{i + 1}", f"d{n + 1}", f"p{i + 1}:d{n + 1}",
                    STORAGE_SHARE, enc.shares[n])
    aggregated = tuple(
        aggregate([storage[i].shares[n] for i in range(params.m)], params)
        for n in range(n_eff))

    queries = gen_queries(theta, params, rng)
    blinding = zero_global_noise(params) if force_zero_blinding \
        else draw_global_noise(params, rng)
    if n_eff > 1:
        tr.emit(ROUND_SETUP, "srand", "parties", "srand:parties", NOISE_SHARE,
                blinding.zprime)
    for n in range(n_eff):
        tr.emit(ROUND_QUERY, "user", f"d{n + 1}", f"user:d{n + 1}", QUERY,
                queries.queries[n])
    answers = []
    for n in range(n_eff):
        a = answer(aggregated[n], queries.queries[n], blinding.zprime, alphas[n], f)
        tr.emit(ROUND_ANSWER, f"d{n + 1}", "user", f"user:d{n + 1}", ANSWER, (a,))
        answers.append(a)
    count = decode(answers, params)
    return ProtocolRun(params=params, theta=theta, count=count, storage=storage,
                       aggregated=aggregated, queries=queries, blinding=blinding,
                       answers=tuple(answers), transcript=tr)
