"""Symmetric variant of the type-I count protocol.

Queries, masks and decoding are identical to the non-symmetric scheme.
Additionally, the N databases of each party share N-1 blinding scalars,
added to every answer with the same power-of-(1+alpha) weights as the
query noise. The blinding lands on the interference coefficients of the
decoded polynomial and makes them uniform, so the user learns nothing
beyond the count — at zero extra download.

The blinding scalars are derived from the parties' pre-shared randomness;
the accounting bills their provisioning once, at N-1 symbols, via a
payload-free transcript event (no per-party values cross a tappable link).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import pma1
from .errors import ParameterError
from .field import noise_pad_scalar
from .model import PartyDataset, RandomSource, SchemeParams, incidence
from .transcript import ANSWER, NOISE_SHARE, ROUND_ANSWER, ROUND_SETUP, Transcript

decode = pma1.decode  # identical contract; blinding only touches interference


@dataclass(frozen=True)
class PartyNoise:
    """zprime[i] holds the N-1 blinding scalars shared by party i+1's
    databases; independent across parties and of everything else."""

    zprime: tuple


@dataclass(frozen=True)
class ProtocolRun:
    params: SchemeParams
    theta: int
    count: int
    queries: pma1.QuerySet
    masks: pma1.MaskSet
    blinding: PartyNoise
    answers: tuple
    transcript: Transcript


def draw_party_noise(params: SchemeParams, rng: RandomSource) -> PartyNoise:
    return PartyNoise(zprime=tuple(
        rng.draw_vector(params.p, params.n - 1) for _ in range(params.m)))


def zero_party_noise(params: SchemeParams) -> PartyNoise:
    return PartyNoise(zprime=tuple((0,) * (params.n - 1) for _ in range(params.m)))


def answer(bits: Sequence[int], query: Sequence[int], zrow: Sequence[int],
           mask_symbol: int, alpha: int, field) -> int:
    """Inner product, plus the power-weighted blinding scalars, plus the
    mask. With zrow all zero this reduces exactly to the unblinded answer."""
    padded = noise_pad_scalar(field, field.dot(bits, query), alpha, zrow)
    return field.add(padded, mask_symbol)


def run(params: SchemeParams, datasets: Sequence[PartyDataset], theta: int,
        rng: RandomSource, transcript: Transcript | None = None, *,
        force_zero_blinding: bool = False) -> ProtocolRun:
    if params.variant != "spma1":
        raise ParameterError(f"expected spma1 parameters, got {params.variant!r}")
    if len(datasets) != params.m:
        raise ParameterError(f"expected {params.m} datasets, got {len(datasets)}")
    tr = Transcript() if transcript is None else transcript
    bits = [incidence(d, params.e) for d in datasets]
    queries = pma1.gen_queries(theta, params, rng)
    masks = pma1.gen_masks(params, rng)
    # zero blinding draws nothing, keeping the stream aligned with pma1
    blinding = zero_party_noise(params) if force_zero_blinding \
        else draw_party_noise(params, rng)
    pma1.emit_mask_events(params, masks, tr)
    if params.n > 1:
        tr.emit(ROUND_SETUP, "srand", "parties", "srand:parties", NOISE_SHARE,
                values=(), symbols=params.n - 1)
    pma1.emit_query_events(params, queries, tr)
    f = params.field
    alphas = params.alphas_used
    table = []
    for i in range(params.m):
        row = []
        for j in range(params.n):
            a = answer(bits[i], queries.queries[i][j], blinding.zprime[i],
                       masks.masks[i][j], alphas[j], f)
            tr.emit(ROUND_ANSWER, f"p{i + 1}.d{j + 1}", "user",
                    f"user:p{i + 1}.d{j + 1}", ANSWER, (a,))
            row.append(a)
        table.append(tuple(row))
    count = decode(table, params)
    return ProtocolRun(params=params, theta=theta, count=count, queries=queries,
                       masks=masks, blinding=blinding, answers=tuple(table),
                       transcript=tr)
