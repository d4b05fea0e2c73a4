"""Brute-force reference enumerations.

Everything in this module is ground truth by construction: enumerate every
tuple in the stated domain and test the defining condition.  numpy only
vectorizes the loops — no counting shortcut, no shared code with the fast
counters in count2/divisor/padic (those are validated *against* this module).

Work budgets are mandatory and honest: each operation declares how many states
its enumeration visits and refuses (BudgetExceeded) rather than silently
grinding.  The 3x3 counter splits each inner linear system
meet-in-the-middle, which changes the constant, not the semantics: every
candidate B is still explicitly generated and every match explicitly counted.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from multiprocessing import get_context

import numpy as np

from .core import is_prime
from .errors import BudgetExceeded, NotPrime, UnsupportedDimension

DEFAULT_MAX_STATES = 10**10


@dataclass(frozen=True)
class WorkBudget:
    """Cap on the number of enumeration states an oracle call may visit."""

    max_states: int = DEFAULT_MAX_STATES

    def require(self, states: int, what: str) -> None:
        if states > self.max_states:
            raise BudgetExceeded(states, self.max_states, what)


@dataclass(frozen=True)
class ValuationClassCounts:
    """Solution counts bucketed by the minimum p-adic valuation h across the
    six coordinates (capped at n).  Brute enumerations fill `classes` for all
    h in 0..n; the closed-form variant fills h < ceil(n/2) and reports the
    remaining mass as one `residual` bucket."""

    p: int
    n: int
    classes: dict[int, int]
    residual: int | None = None

    def total(self) -> int:
        return sum(self.classes.values()) + (self.residual or 0)


def resolve_threads(threads: int | None = None) -> int:
    """Worker-process count: explicit argument wins, then COMMUCOUNT_THREADS,
    then the machine's CPU count."""
    if threads is not None:
        if threads < 1:
            raise ValueError("thread count must be >= 1")
        return threads
    env = os.environ.get("COMMUCOUNT_THREADS")
    if env:
        try:
            value = int(env)
        except ValueError as exc:
            raise ValueError(f"COMMUCOUNT_THREADS={env!r} is not an integer") from exc
        if value < 1:
            raise ValueError("COMMUCOUNT_THREADS must be >= 1")
        return value
    return os.cpu_count() or 1


def grid_tuples(n: int, k: int) -> np.ndarray:
    """All (2n+1)^k tuples over [-n, n], one per row, lexicographic."""
    side = 2 * n + 1
    return (np.indices((side,) * k).reshape(k, -1).T - n).astype(np.int64)


# --- 2x2 ---------------------------------------------------------------------


def _brute_2x2(n: int, budget: WorkBudget) -> int:
    side = 2 * n + 1
    budget.require(side**8, "2x2 commuting-pair enumeration")
    T = grid_tuples(n, 4)
    a1, a2, a3, a4 = (T[:, i] for i in range(4))
    b1, b2, b3, b4 = (T[:, i][None, :] for i in range(4))
    total = 0
    chunk = max(1, 4_000_000 // len(T))
    for lo in range(0, len(T), chunk):
        s = slice(lo, lo + chunk)
        ca1, ca2, ca3, ca4 = (c[s][:, None] for c in (a1, a2, a3, a4))
        # The four entries of AB - BA, tested literally.
        e11 = ca2 * b3 - ca3 * b2
        e12 = ca1 * b2 + ca2 * b4 - b1 * ca2 - b2 * ca4
        e21 = ca3 * b1 + ca4 * b3 - b3 * ca1 - b4 * ca3
        e22 = ca3 * b2 - ca2 * b3
        commutes = (e11 == 0) & (e12 == 0) & (e21 == 0) & (e22 == 0)
        total += int(commutes.sum())
    return total


# --- 3x3 ---------------------------------------------------------------------

# (i, j) targets of the 8 independent commutator entries; the (3,3) entry is
# dropped because the commutator is traceless, so it vanishes automatically.
_EQS = [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2)]


def _coef_tensor() -> np.ndarray:
    """coef[e, col, a] = coefficient of a_flat[a] in the col-th B-variable's
    coefficient within commutator entry e (row-major flattening)."""
    coef = np.zeros((8, 9, 9), dtype=np.int64)

    def idx(r: int, c: int) -> int:
        return 3 * (r - 1) + (c - 1)

    for e, (i, j) in enumerate(_EQS):
        for k in (1, 2, 3):
            coef[e, idx(k, j), idx(i, k)] += 1  # A[i,k] * B[k,j]
            coef[e, idx(i, k), idx(k, j)] -= 1  # -B[i,k] * A[k,j]
    return coef


class MeetInMiddle3:
    """Per-A solver for 3x3: the 8 commutator entries are linear in B, so
    split B's nine entries 5|4, tabulate both halves, and join on the packed
    8-dimensional value vector.  Exact: every B in the box is generated."""

    def __init__(self, n: int):
        if n < 0:
            raise ValueError("n must be >= 0")
        self.n = n
        self.side = 2 * n + 1
        self.h1 = grid_tuples(n, 5)
        self.h2 = grid_tuples(n, 4)
        self.coefm = _coef_tensor().reshape(72, 9)
        # Each half contributes at most 6n^2 in absolute value per equation.
        off = 6 * n * n
        base = 2 * off + 1
        if base**8 >= 2**63:
            raise ValueError(f"n={n} overflows the int64 key packing")
        self.off = off
        self.pows = base ** np.arange(8, dtype=np.int64)

    def _packed_halves(self, a_flat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        L = (self.coefm @ a_flat).reshape(8, 9)
        k1 = self.h1 @ L[:, :5].T
        k2 = -(self.h2 @ L[:, 5:].T)
        return (k1 + self.off) @ self.pows, (k2 + self.off) @ self.pows

    def count_for_a(self, a_flat: np.ndarray) -> int:
        p1, p2 = self._packed_halves(a_flat)
        p2 = np.sort(p2)
        lo = np.searchsorted(p2, p1, "left")
        hi = np.searchsorted(p2, p1, "right")
        return int((hi - lo).sum())

    def partners_for_a(self, a_flat: np.ndarray) -> np.ndarray:
        """All B (flattened rows) in the box commuting with A."""
        p1, p2 = self._packed_halves(a_flat)
        order = np.argsort(p2, kind="stable")
        s2 = p2[order]
        lo = np.searchsorted(s2, p1, "left")
        hi = np.searchsorted(s2, p1, "right")
        cnt = hi - lo
        total = int(cnt.sum())
        if total == 0:
            return np.empty((0, 9), dtype=np.int64)
        nz = np.flatnonzero(cnt)
        reps = cnt[nz]
        h1_idx = np.repeat(nz, reps)
        group_start = np.concatenate(([0], np.cumsum(reps)[:-1]))
        offsets = np.arange(total) - np.repeat(group_start, reps)
        h2_idx = order[np.repeat(lo[nz], reps) + offsets]
        return np.concatenate([self.h1[h1_idx], self.h2[h2_idx]], axis=1)

    def a_batch(self, lo: int, hi: int) -> np.ndarray:
        """Rows lo..hi-1 of the lexicographic A enumeration, decoded."""
        ids = np.arange(lo, hi, dtype=np.int64)
        pows = self.side ** np.arange(8, -1, -1, dtype=np.int64)
        return (ids[:, None] // pows) % self.side - self.n


def states_3x3(n: int) -> int:
    """Budget accounting for the 3x3 oracle: every A, times both halves of
    the B tabulation."""
    side = 2 * n + 1
    return side**9 * (side**5 + side**4)


def _count3_range(n: int, lo: int, hi: int) -> int:
    mim = MeetInMiddle3(n)
    total = 0
    for block in range(lo, hi, 65536):
        for a_flat in mim.a_batch(block, min(block + 65536, hi)):
            total += mim.count_for_a(a_flat)
    return total


def _brute_3x3(n: int, budget: WorkBudget, threads: int | None) -> int:
    budget.require(states_3x3(n), "3x3 commuting-pair enumeration")
    n_a = (2 * n + 1) ** 9
    workers = min(resolve_threads(threads), n_a)
    if workers <= 1:
        return _count3_range(n, 0, n_a)
    bounds = np.linspace(0, n_a, workers + 1, dtype=np.int64)
    args = [(n, int(bounds[i]), int(bounds[i + 1])) for i in range(workers)]
    with get_context("fork").Pool(workers) as pool:
        return sum(pool.starmap(_count3_range, args))


def brute_commuting_count(
    d: int, n: int, budget: WorkBudget | None = None, threads: int | None = None
) -> int:
    """Number of ordered pairs (A, B) of d x d integer matrices with entries
    in [-n, n] and AB == BA, by exhaustive enumeration."""
    if n < 0:
        raise ValueError("n must be >= 0")
    budget = budget or WorkBudget()
    if d == 2:
        return _brute_2x2(n, budget)
    if d == 3:
        return _brute_3x3(n, budget, threads)
    raise UnsupportedDimension(f"no oracle for d={d}; supported: 2, 3")


# --- p-adic ------------------------------------------------------------------


def _valuation_table(p: int, n: int, q: int) -> np.ndarray:
    """min(v_p(x), n) for x in [0, q); the zero residue gets n."""
    v = np.zeros(q, dtype=np.int8)
    pk = p
    for _ in range(n):
        v[::pk] += 1
        pk *= p
    return v


def _padic_enumerate(
    p: int,
    n: int,
    budget: WorkBudget,
    classify: bool = False,
    degenerate_only: bool = False,
):
    if not is_prime(p):
        raise NotPrime(f"p={p} is not prime")
    if n < 1:
        raise ValueError("n must be >= 1")
    q = p**n
    budget.require(q**6, "residue-tuple enumeration")
    dtype = np.int64 if q > 46340 else np.int32
    T = np.indices((q, q, q)).reshape(3, -1).T.astype(dtype)
    x2, x3, x4 = T[:, 0], T[:, 1], T[:, 2]
    if classify:
        vt = _valuation_table(p, n, q)
        vmin = np.minimum(np.minimum(vt[x2], vt[x3]), vt[x4])
        hist = np.zeros(n + 1, dtype=np.int64)
    total = 0
    chunk = max(1, 2**23 // len(T))
    y2, y3, y4 = x2[None, :], x3[None, :], x4[None, :]
    for lo in range(0, len(T), chunk):
        s = slice(lo, lo + chunk)
        c2, c3, c4 = x2[s][:, None], x3[s][:, None], x4[s][:, None]
        ok = (c2 * y3 - c3 * y2) % q == 0
        ok &= (c2 * y4 - c4 * y2) % q == 0
        ok &= (c3 * y4 - c4 * y3) % q == 0
        if degenerate_only:
            ok &= c2 * y3 % q == 0
            ok &= c3 * y2 % q == 0
        total += int(ok.sum())
        if classify:
            cls = np.minimum(vmin[s][:, None], vmin[None, :])
            hist += np.bincount(cls[ok], minlength=n + 1)
    if classify:
        return total, {h: int(hist[h]) for h in range(n + 1)}
    return total


def brute_padic_solutions(p: int, n: int, budget: WorkBudget | None = None) -> int:
    """Number of (x2, x3, x4, y2, y3, y4) in (Z/p^n)^6 with all three cross
    products x_i*y_j - x_j*y_i = 0 (i < j) mod p^n, by full enumeration."""
    return _padic_enumerate(p, n, budget or WorkBudget())


def brute_degenerate_padic(p: int, n: int, budget: WorkBudget | None = None) -> int:
    """Same enumeration, restricted to solutions whose first cross pattern is
    doubly null: x2*y3 = x3*y2 = 0 mod p^n."""
    return _padic_enumerate(p, n, budget or WorkBudget(), degenerate_only=True)


def brute_valuation_classes(
    p: int, n: int, budget: WorkBudget | None = None
) -> ValuationClassCounts:
    """Solution counts bucketed by h = min over the six coordinates of
    min(v_p, n); buckets 0..n, summing to brute_padic_solutions(p, n)."""
    _, classes = _padic_enumerate(p, n, budget or WorkBudget(), classify=True)
    return ValuationClassCounts(p=p, n=n, classes=classes)


# --- autocorrelation table ---------------------------------------------------


def brute_r_table(n: int, budget: WorkBudget | None = None) -> dict[int, int]:
    """r(h) = #{(x1, x2, x3, x4) in [-n, n]^4 : x1*x2 - x3*x4 = h} for every
    h, by honest quadruple loop."""
    if n < 1:
        raise ValueError("n must be >= 1")
    budget = budget or WorkBudget()
    budget.require((2 * n + 1) ** 4, "quadruple-product enumeration")
    axis = range(-n, n + 1)
    table: dict[int, int] = {}
    for x1 in axis:
        for x2 in axis:
            left = x1 * x2
            for x3 in axis:
                for x4 in axis:
                    h = left - x3 * x4
                    table[h] = table.get(h, 0) + 1
    return table
