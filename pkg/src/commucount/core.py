"""Integer-arithmetic building blocks: gcd/totients, primitive lattice
directions, entrywise product distributions, and the handful of zeta-derived
constants the asymptotic diagnostics compare against.

Everything except the zeta constants is exact integer arithmetic.  The zeta
values are evaluated once per precision by direct summation plus an
Euler-Maclaurin tail whose first omitted term bounds the error; at the default
40 digits the tail bound is below 1e-43, comfortably past the 1e-6 tolerances
used by the acceptance checks.
"""

from __future__ import annotations

import math
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, NamedTuple

import numpy as np


def gcd(a: int, b: int) -> int:
    """Nonnegative greatest common divisor; gcd(0, 0) == 0."""
    return math.gcd(a, b)


def is_prime(p: int) -> bool:
    """Deterministic trial division (6k +/- 1 wheel). Exact for any int."""
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0 or p % 3 == 0:
        return False
    d = 5
    while d * d <= p:
        if p % d == 0 or p % (d + 2) == 0:
            return False
        d += 6
    return True


def totient(u: int) -> int:
    """Euler's totient of u >= 1 by trial-division factoring."""
    if u < 1:
        raise ValueError(f"totient needs u >= 1, got {u}")
    result = u
    m = u
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1 if p == 2 else 2
    if m > 1:
        result -= result // m
    return result


def totient_sieve(limit: int) -> np.ndarray:
    """phi(0..limit) as an int64 array (phi[0] = 0)."""
    if limit < 0:
        raise ValueError("limit must be nonnegative")
    phi = np.arange(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if phi[p] == p:  # p is prime: no smaller factor has touched it
            phi[p::p] -= phi[p::p] // p
    return phi


def divisor_tau(n: int) -> int:
    """Number of positive divisors of n >= 1."""
    if n < 1:
        raise ValueError(f"divisor_tau needs n >= 1, got {n}")
    count = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            count += 1 if d * d == n else 2
        d += 1
    return count


class PrimitiveDirection(NamedTuple):
    """A canonical primitive lattice direction (u, v): gcd(u, v) = 1 and
    either u > 0 or (u, v) = (0, 1).  m = max(|u|, |v|) is carried along
    because every downstream weight depends only on it."""

    u: int
    v: int
    m: int

    @classmethod
    def from_uv(cls, u: int, v: int) -> "PrimitiveDirection":
        if math.gcd(u, v) != 1:
            raise ValueError(f"({u}, {v}) is not primitive")
        if not (u > 0 or (u, v) == (0, 1)):
            raise ValueError(f"({u}, {v}) is not in canonical form")
        return cls(u, v, max(abs(u), abs(v)))


def primitive_directions(n: int) -> list[PrimitiveDirection]:
    """All canonical primitive directions with max(|u|, |v|) <= n, in a
    fixed deterministic order (ascending by m, then a fixed pattern).

    Every nonzero point of the (2n+1) x (2n+1) grid is a nonzero integer
    multiple of exactly one of these.
    """
    if n < 1:
        raise ValueError(f"primitive_directions needs n >= 1, got {n}")
    dirs = [
        PrimitiveDirection(1, 0, 1),
        PrimitiveDirection(0, 1, 1),
        PrimitiveDirection(1, 1, 1),
        PrimitiveDirection(1, -1, 1),
    ]
    for m in range(2, n + 1):
        for j in range(1, m):
            if math.gcd(j, m) == 1:
                dirs.append(PrimitiveDirection(m, j, m))
                dirs.append(PrimitiveDirection(m, -j, m))
                dirs.append(PrimitiveDirection(j, m, m))
                dirs.append(PrimitiveDirection(j, -m, m))
    return dirs


def canonical_direction(x: int, y: int) -> PrimitiveDirection:
    """The unique canonical primitive direction that (x, y) != (0, 0) is a
    nonzero multiple of."""
    if x == 0 and y == 0:
        raise ValueError("(0, 0) has no direction")
    g = math.gcd(x, y)
    u, v = x // g, y // g
    if u < 0 or (u == 0 and v < 0):
        u, v = -u, -v
    return PrimitiveDirection(u, v, max(abs(u), abs(v)))


def product_distribution(n: int) -> dict[int, int]:
    """Multiplicity map of a*b over all (a, b) in [-n, n]^2.

    Symmetric (counts[m] == counts[-m]), total mass (2n+1)^2, and the zero
    class has 4n+1 members.  Quadratic work: the full signed grid reduces to
    the positive quadrant, counted with numpy unique (chunked so n up to the
    10^4 scale stays within memory).
    """
    if n < 0:
        raise ValueError(f"product_distribution needs n >= 0, got {n}")
    counts: dict[int, int] = {0: 4 * n + 1} if n > 0 else {0: 1}
    if n == 0:
        return counts
    pos = np.arange(1, n + 1, dtype=np.int64)
    chunk = max(1, 4_000_000 // n)
    merged: dict[int, int] = {}
    for lo in range(0, n, chunk):
        block = np.multiply.outer(pos[lo : lo + chunk], pos).ravel()
        values, reps = np.unique(block, return_counts=True)
        if not merged:
            merged = dict(zip(values.tolist(), reps.tolist()))
        else:
            for value, rep in zip(values.tolist(), reps.tolist()):
                merged[value] = merged.get(value, 0) + rep
    for value, rep in merged.items():
        counts[value] = 2 * rep  # (+,+) and (-,-)
        counts[-value] = 2 * rep  # (+,-) and (-,+)
    return counts


# --- zeta constants ---------------------------------------------------------

# B_2 .. B_16, enough for error << 1e-40 at M = 256.
_BERNOULLI = [
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
]


@lru_cache(maxsize=None)
def zeta_value(s: int, digits: int = 40) -> Decimal:
    """zeta(s) for integer s >= 2 to `digits` significant digits.

    Direct sum to M = 256 plus the Euler-Maclaurin correction
        M^(1-s)/(s-1) + M^(-s)/2 + sum_j B_2j/(2j)! * (s)_(2j-1) * M^(1-s-2j),
    truncated after B_16; the first omitted term (< 1e-43 for s >= 2)
    bounds the truncation error.
    """
    if s < 2:
        raise ValueError("zeta_value needs s >= 2")
    M = 256
    with localcontext() as ctx:
        ctx.prec = digits + 15
        total = sum(Decimal(1) / Decimal(k) ** s for k in range(1, M))
        total += Decimal(M) ** (1 - s) / (s - 1)
        total += Decimal(M) ** (-s) / 2
        rising = s  # (s)_1
        fact = 2  # (2j)!
        for j, b in enumerate(_BERNOULLI, start=1):
            coeff = Decimal(b.numerator) / Decimal(b.denominator)
            total += coeff / fact * rising * Decimal(M) ** (1 - s - 2 * j)
            rising *= (s + 2 * j - 1) * (s + 2 * j)
            fact *= (2 * j + 1) * (2 * j + 2)
    with localcontext() as ctx:
        ctx.prec = digits
        return +total


def main_term_constant_2x2(digits: int = 40) -> Decimal:
    """The constant in the leading (2N)^5 term of the 2x2 commuting count:
    10*zeta(2) / (3*zeta(3)) = 4.5614425920673529..."""
    with localcontext() as ctx:
        ctx.prec = digits
        return 10 * zeta_value(2, digits + 10) / (3 * zeta_value(3, digits + 10))


def dependent_pair_constant(digits: int = 40) -> Decimal:
    """16/zeta(2) = 9.7268336..., the N^2 log N coefficient in the count of
    linearly dependent vector pairs (the h = 0 autocorrelation value)."""
    with localcontext() as ctx:
        ctx.prec = digits
        return 16 / zeta_value(2, digits + 10)


def totient_cubes_tail(digits: int = 40) -> Decimal:
    """sum_{u >= 2} phi(u)/u^3 = zeta(2)/zeta(3) - 1 = 0.368432..."""
    with localcontext() as ctx:
        ctx.prec = digits
        return zeta_value(2, digits + 10) / zeta_value(3, digits + 10) - 1


def exact_ratio(numerator: int, denominator: int) -> Fraction:
    """Lowest-terms rational with a positive denominator (Fraction already
    guarantees both; exposed for intent)."""
    return Fraction(numerator, denominator)


def pairwise_fraction_sum(values: Iterable[Fraction]) -> Fraction:
    """Sum of exact rationals by balanced pairwise merging.

    Equivalent to sum(), but keeps intermediate denominators near the subtree
    lcm instead of the running-prefix lcm, which is dramatically faster for
    long harmonic-like sums.
    """
    stack: list[Fraction] = []
    counts: list[int] = []
    for v in values:
        stack.append(v)
        counts.append(1)
        while len(counts) > 1 and counts[-1] == counts[-2]:
            v2 = stack.pop()
            counts.pop()
            stack[-1] = stack[-1] + v2
            counts[-1] *= 2
    total = Fraction(0)
    while stack:
        total += stack.pop()
    return total
