"""Arithmetic in GF(p) plus the exact linear algebra the decoders rely on.

Field elements are plain ints in ``[0, p)``; the modulus is carried by a
:class:`PrimeField` context object, not by each element. Everything here is
exact integer arithmetic, no floats anywhere.
"""

from __future__ import annotations

from typing import Sequence

from .errors import IntegrityError, ParameterError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class PrimeField:
    """Context for GF(p) arithmetic over validated int elements."""

    __slots__ = ("p",)

    def __init__(self, p: int) -> None:
        if not isinstance(p, int) or not is_prime(p):
            raise ParameterError(f"field modulus must be a prime, got {p!r}")
        self.p = p

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def check(self, a: int) -> int:
        if not isinstance(a, int) or not 0 <= a < self.p:
            raise ParameterError(f"{a!r} is not an element of GF({self.p})")
        return a

    def element(self, v: int) -> int:
        """Reduce an arbitrary int into the field."""
        return v % self.p

    def add(self, a: int, b: int) -> int:
        return (self.check(a) + self.check(b)) % self.p

    def sub(self, a: int, b: int) -> int:
        return (self.check(a) - self.check(b)) % self.p

    def mul(self, a: int, b: int) -> int:
        return (self.check(a) * self.check(b)) % self.p

    def neg(self, a: int) -> int:
        return -self.check(a) % self.p

    def inv(self, a: int) -> int:
        self.check(a)
        if a == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.p})")
        return pow(a, self.p - 2, self.p)

    def pow(self, a: int, e: int) -> int:
        self.check(a)
        if e < 0:
            raise ParameterError("exponent must be non-negative")
        return pow(a, e, self.p)

    def dot(self, u: Sequence[int], v: Sequence[int]) -> int:
        if len(u) != len(v):
            raise ParameterError(f"vector length mismatch: {len(u)} vs {len(v)}")
        acc = 0
        for a, b in zip(u, v):
            acc += self.check(a) * self.check(b)
        return acc % self.p

    def rand(self, rng) -> int:
        return rng.draw(self.p)


def default_alphas(p: int, count: int) -> tuple[int, ...]:
    """Deterministic evaluation points: 1, 2, ... and finally 0, skipping p-1.

    p-1 is excluded so that 1 + alpha never vanishes; the query-privacy and
    storage-security arguments both need diag(1 + alpha) invertible.
    """
    if count > p - 1:
        raise ParameterError(
            f"GF({p}) offers only {p - 1} usable evaluation points, need {count}")
    pool = list(range(1, p - 1)) + [0]
    return tuple(pool[:count])


def validate_alphas(field: PrimeField, alphas: Sequence[int]) -> tuple[int, ...]:
    seen = set()
    for a in alphas:
        field.check(a)
        if a == field.p - 1:
            raise ParameterError(
                f"evaluation point {a} equals p-1, so 1+alpha would vanish")
        if a in seen:
            raise ParameterError(f"evaluation point {a} repeated")
        seen.add(a)
    return tuple(alphas)


def build_upsilon(field: PrimeField, alphas: Sequence[int],
                  n: int) -> tuple[tuple[int, ...], ...]:
    """n x n matrix with rows [1, (1+a_j), (1+a_j)^2, ...].

    This is the Vandermonde-style system every decoder inverts; the
    evaluation-point invariants (distinct, never p-1) keep it nonsingular.
    """
    if n < 1 or n > len(alphas):
        raise ParameterError(
            f"matrix size {n} needs {n} evaluation points, have {len(alphas)}")
    validate_alphas(field, alphas[:n])
    rows = []
    for a in alphas[:n]:
        x = field.element(1 + a)
        rows.append(tuple(field.pow(x, exp) for exp in range(n)))
    return tuple(rows)


def mat_vec(field: PrimeField, m, v) -> tuple[int, ...]:
    return tuple(field.dot(row, v) for row in m)


def solve_linear(field: PrimeField, m, rhs) -> list[int]:
    """Solve m x = rhs by Gaussian elimination over GF(p).

    A singular system is unreachable for matrices built from valid
    evaluation points; hitting one means the inputs are corrupted.
    """
    n = len(m)
    if any(len(row) != n for row in m):
        raise ParameterError("matrix must be square")
    if len(rhs) != n:
        raise ParameterError(f"right-hand side has length {len(rhs)}, expected {n}")
    p = field.p
    aug = [[field.check(x) for x in row] + [field.check(b)]
           for row, b in zip(m, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise IntegrityError(
                "singular linear system; evaluation points must be distinct")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = field.inv(aug[col][col])
        aug[col] = [(x * inv) % p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [(a - factor * b) % p for a, b in zip(aug[r], aug[col])]
    return [row[n] for row in aug]


def determinant(field: PrimeField, m) -> int:
    n = len(m)
    work = [[field.check(x) for x in row] for row in m]
    p = field.p
    det = 1
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            return 0
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            det = -det % p
        det = (det * work[col][col]) % p
        inv = field.inv(work[col][col])
        for r in range(col + 1, n):
            if work[r][col]:
                factor = (work[r][col] * inv) % p
                work[r] = [(a - factor * b) % p for a, b in zip(work[r], work[col])]
    return det % p


def noise_pad_vector(field: PrimeField, base: Sequence[int], alpha: int,
                     noise_rows: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """base + sum_l (1+alpha)^l * noise[l-1], componentwise.

    The shared coding primitive: queries pad the unit vector, storage
    shares pad the incidence vector.
    """
    x = field.element(1 + field.check(alpha))
    out = [field.check(v) for v in base]
    for depth, row in enumerate(noise_rows, start=1):
        if len(row) != len(out):
            raise ParameterError("noise row length does not match the base vector")
        c = field.pow(x, depth)
        for k, z in enumerate(row):
            out[k] = (out[k] + c * field.check(z)) % field.p
    return tuple(out)


def noise_pad_scalar(field: PrimeField, base: int, alpha: int,
                     noise: Sequence[int]) -> int:
    """base + sum_l (1+alpha)^l * noise[l-1]."""
    x = field.element(1 + field.check(alpha))
    acc = field.check(base)
    for depth, z in enumerate(noise, start=1):
        acc = (acc + field.pow(x, depth) * field.check(z)) % field.p
    return acc
