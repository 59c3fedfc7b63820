"""Count protocol with type-I collusion and user privacy only.

Each party replicates its incidence vector across its N databases. The
user pads the target unit vector with noise weighted by powers of
(1 + alpha_j), so any max(T, Y) databases of a party see jointly uniform
queries. Each database answers with the inner product of its vector and
its query plus one symbol of a zero-sum masking vector; summing the
answers per database index cancels the masks and leaves evaluations of a
polynomial whose constant coefficient is the membership count, recovered
by one small linear solve.

Masking model: parties 1..M-1 sample their mask vectors and send them to
party M, which completes the zero sum. That traffic is recorded in the
transcript for cost accounting but is not part of any adversary view.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import IntegrityError, ParameterError
from .field import build_upsilon, noise_pad_vector, solve_linear
from .model import PartyDataset, RandomSource, SchemeParams, incidence, unit_vector
from .transcript import (ANSWER, MASK_SHARE, QUERY, ROUND_ANSWER, ROUND_QUERY,
                         ROUND_SETUP, Transcript)


@dataclass(frozen=True)
class QuerySet:
    """Per-database query vectors plus the noise that produced them.

    noise[i][l] is the l-th noise vector of party i+1, shared by all of
    that party's databases; queries[i][j] goes to database j+1.
    """

    theta: int
    noise: tuple
    queries: tuple


@dataclass(frozen=True)
class MaskSet:
    """masks[i] is party i+1's length-N mask; the vectors sum to zero
    componentwise."""

    masks: tuple


@dataclass(frozen=True)
class ProtocolRun:
    params: SchemeParams
    theta: int
    count: int
    queries: QuerySet
    masks: MaskSet
    answers: tuple
    transcript: Transcript


def query_vector(theta: int, alpha: int, noise_rows, params: SchemeParams) -> tuple[int, ...]:
    return noise_pad_vector(params.field, unit_vector(theta, params.e), alpha, noise_rows)


def draw_query_noise(params: SchemeParams, rng: RandomSource) -> tuple:
    """mu independent uniform vectors per party."""
    return tuple(
        tuple(rng.draw_vector(params.p, params.e) for _ in range(params.mu))
        for _ in range(params.m))


def zero_query_noise(params: SchemeParams) -> tuple:
    zero = (0,) * params.e
    return tuple(tuple(zero for _ in range(params.mu)) for _ in range(params.m))


def queries_from_noise(theta: int, params: SchemeParams, noise) -> QuerySet:
    alphas = params.alphas_used
    queries = tuple(
        tuple(query_vector(theta, alphas[j], noise[i], params) for j in range(params.n))
        for i in range(params.m))
    return QuerySet(theta=theta, noise=noise, queries=queries)


def gen_queries(theta: int, params: SchemeParams, rng: RandomSource) -> QuerySet:
    return queries_from_noise(theta, params, draw_query_noise(params, rng))


def draw_free_masks(params: SchemeParams, rng: RandomSource) -> tuple:
    """Masks of parties 1..M-1; party M completes the zero sum."""
    return tuple(rng.draw_vector(params.p, params.n) for _ in range(params.m - 1))


def masks_from_free(params: SchemeParams, free: Sequence[Sequence[int]]) -> MaskSet:
    f = params.field
    if len(free) != params.m - 1:
        raise ParameterError(
            f"expected {params.m - 1} free mask vectors, got {len(free)}")
    total = [0] * params.n
    for s in free:
        if len(s) != params.n:
            raise ParameterError(f"mask vector length {len(s)} != N={params.n}")
        for j in range(params.n):
            total[j] = (total[j] + f.check(s[j])) % f.p
    closing = tuple(f.neg(v) for v in total)
    return MaskSet(masks=tuple(tuple(s) for s in free) + (closing,))


def gen_masks(params: SchemeParams, rng: RandomSource) -> MaskSet:
    return masks_from_free(params, draw_free_masks(params, rng))


def answer(bits: Sequence[int], query: Sequence[int], mask_symbol: int, field) -> int:
    """One database's reply: inner product plus its mask symbol."""
    return field.add(field.dot(bits, query), mask_symbol)


def decode(answers, params: SchemeParams) -> int:
    """Sum the answers per database index, invert the evaluation matrix and
    read the constant coefficient as the count.

    Per-party answers are never examined individually; only the aligned
    sums enter the solve.
    """
    f = params.field
    if len(answers) != params.m or any(len(row) != params.n for row in answers):
        raise ParameterError(
            f"answer table must be {params.m} x {params.n}")
    b = [0] * params.n
    for row in answers:
        for j, a in enumerate(row):
            b[j] = (b[j] + f.check(a)) % f.p
    ups = build_upsilon(f, params.alphas_used, params.n)
    x = solve_linear(f, ups, b)
    count = x[0]
    if count > params.m:
        raise IntegrityError(
            f"decoded count {count} outside 0..{params.m}; transcript corrupted")
    return count


def _db_name(i: int, j: int) -> str:
    return f"p{i + 1}.d{j + 1}"


def _db_link(i: int, j: int) -> str:
    return f"user:p{i + 1}.d{j + 1}"


def emit_mask_events(params: SchemeParams, masks: MaskSet, tr: Transcript) -> None:
    dealer = f"p{params.m}"
    for i in range(params.m - 1):
        tr.emit(ROUND_SETUP, f"p{i + 1}", dealer, f"p{i + 1}:{dealer}",
                MASK_SHARE, masks.masks[i])


def emit_query_events(params: SchemeParams, queries: QuerySet, tr: Transcript) -> None:
    for i in range(params.m):
        for j in range(params.n):
            tr.emit(ROUND_QUERY, "user", _db_name(i, j), _db_link(i, j),
                    QUERY, queries.queries[i][j])


def run(params: SchemeParams, datasets: Sequence[PartyDataset], theta: int,
        rng: RandomSource, transcript: Transcript | None = None) -> ProtocolRun:
    if params.variant != "pma1":
        raise ParameterError(f"expected pma1 parameters, got {params.variant!r}")
    if len(datasets) != params.m:
        raise ParameterError(f"expected {params.m} datasets, got {len(datasets)}")
    tr = Transcript() if transcript is None else transcript
    bits = [incidence(d, params.e) for d in datasets]
    queries = gen_queries(theta, params, rng)
    masks = gen_masks(params, rng)
    emit_mask_events(params, masks, tr)
    emit_query_events(params, queries, tr)
    f = params.field
    table = []
    for i in range(params.m):
        row = []
        for j in range(params.n):
            a = answer(bits[i], queries.queries[i][j], masks.masks[i][j], f)
            tr.emit(ROUND_ANSWER, _db_name(i, j), "user", _db_link(i, j), ANSWER, (a,))
            row.append(a)
        table.append(tuple(row))
    count = decode(table, params)
    return ProtocolRun(params=params, theta=theta, count=count, queries=queries,
                       masks=masks, answers=tuple(table), transcript=tr)
