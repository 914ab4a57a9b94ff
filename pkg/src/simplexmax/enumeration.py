"""Exact enumeration and counting of lattice solutions to Gram systems.

A Gram system asks for integer vectors ``y_1..y_n`` in Z^d whose inner
products ``y_i . y_j`` match a target matrix.  Entries may be left
unconstrained (``None``), which is how the doubled systems behind the weight
second moments are expressed.  The diagonal is always constrained, so every
vector ranges over a lattice sphere.

Spheres are built coordinate by coordinate with interval pruning (the
remaining squared norm bounds the next coordinate) and memoized as arrays.
Later vectors are drawn from their sphere and filtered against the inner
products already fixed.
"""
from __future__ import annotations

import math
import os
import threading
import warnings
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import BudgetExceeded, InvalidInput

DEFAULT_BUDGET = 10**8
COORD_DTYPE = np.int16


def default_budget() -> int:
    env = os.environ.get("SIMPLEXMAX_BUDGET")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise InvalidInput(f"SIMPLEXMAX_BUDGET must be an integer, got {env!r}") from None
        if value <= 0:
            raise InvalidInput("SIMPLEXMAX_BUDGET must be positive")
        return value
    return DEFAULT_BUDGET


class _Budget:
    def __init__(self, limit: int | None):
        self.limit = default_budget() if limit is None else limit
        self.used = 0
        self._lock = threading.Lock()

    def spend(self, n: int):
        with self._lock:
            self.used += n
            over = self.used > self.limit
        if over:
            raise BudgetExceeded(self.limit)


# ---------------------------------------------------------------- spheres


def sphere_size_estimate(d: int, n: int) -> float:
    """Volume heuristic for r_d(n), used only for cost guards."""
    if n == 0:
        return 1.0
    return d * math.pi ** (d / 2) / math.gamma(d / 2 + 1) * n ** ((d - 2) / 2) / 2 + 2 * d


@lru_cache(maxsize=512)
def _sphere_array(d: int, n: int) -> np.ndarray:
    if d == 0:
        return np.zeros((1 if n == 0 else 0, 0), dtype=COORD_DTYPE)
    s = math.isqrt(n)
    blocks = []
    for a in range(-s, s + 1):
        sub = _sphere_array(d - 1, n - a * a)
        if len(sub):
            head = np.full((len(sub), 1), a, dtype=COORD_DTYPE)
            blocks.append(np.hstack([head, sub]))
    if not blocks:
        return np.zeros((0, d), dtype=COORD_DTYPE)
    out = np.vstack(blocks)
    out.setflags(write=False)
    return out


def sphere_array(d: int, n: int, budget: int | None = None) -> np.ndarray:
    """All ``y`` in Z^d with ``|y|^2 = n`` as a read-only array, lexicographic order."""
    if d < 1:
        raise InvalidInput("dimension must be at least 1")
    if n < 0:
        raise InvalidInput("squared radius must be nonnegative")
    limit = default_budget() if budget is None else budget
    if sphere_size_estimate(d, n) > 4 * limit:
        raise BudgetExceeded(limit, f"sphere r_{d}({n})")
    pts = _sphere_array(d, n)
    if len(pts) > limit:
        raise BudgetExceeded(limit, f"sphere r_{d}({n})")
    return pts


def sphere_points(d: int, n: int, budget: int | None = None) -> Iterator[tuple[int, ...]]:
    """Yield the lattice points on ``|y|^2 = n`` in lexicographic order."""
    for row in sphere_array(d, n, budget):
        yield tuple(int(a) for a in row)


def sphere_count(d: int, n: int, budget: int | None = None) -> int:
    return len(sphere_array(d, n, budget))


def representation_numbers(d: int, n_max: int, box: int | None = None) -> np.ndarray:
    """``r_d(n)`` for ``0 <= n <= n_max`` by repeated convolution.

    With ``box`` set, only points with every ``|x_i| <= box`` are counted.
    Values are exact int64 (object arrays if they could overflow).
    """
    s = math.isqrt(n_max) if box is None else min(box, math.isqrt(n_max))
    one = np.zeros(n_max + 1, dtype=object)
    for a in range(-s, s + 1):
        one[a * a] += 1
    out = np.zeros(n_max + 1, dtype=object)
    out[0] = 1
    for _ in range(d):
        nxt = np.zeros(n_max + 1, dtype=object)
        for sq in np.nonzero(one)[0]:
            nxt[sq:] += one[sq] * out[: n_max + 1 - sq]
        out = nxt
    return out


# ---------------------------------------------------------------- systems


@dataclass(frozen=True)
class GramSystem:
    """Vectors ``y_0..y_{n-1}`` in Z^d with prescribed inner products.

    ``target[i][j]`` is the required value of ``y_i . y_j`` or ``None`` when
    unconstrained.  ``pinned`` fixes some of the vectors in advance.
    """

    dim: int
    target: tuple[tuple[int | None, ...], ...]
    pinned: Mapping[int, tuple[int, ...]] = field(default_factory=dict)

    def __post_init__(self):
        t = tuple(tuple(None if a is None else int(a) for a in row) for row in self.target)
        n = len(t)
        if any(len(row) != n for row in t):
            raise InvalidInput("target must be square")
        for i in range(n):
            if t[i][i] is None or t[i][i] < 0:
                raise InvalidInput("diagonal entries must be nonnegative integers")
            for j in range(n):
                if t[i][j] != t[j][i]:
                    raise InvalidInput("target must be symmetric")
        pins = {int(i): tuple(int(a) for a in v) for i, v in dict(self.pinned).items()}
        for i, v in pins.items():
            if not 0 <= i < n or len(v) != self.dim:
                raise InvalidInput(f"bad pinned vector at index {i}")
        object.__setattr__(self, "target", t)
        object.__setattr__(self, "pinned", pins)

    @property
    def size(self) -> int:
        return len(self.target)

    @classmethod
    def from_gram(cls, t, lam_sq: int, dim: int) -> "GramSystem":
        t = _as_int_matrix(t)
        return cls(dim, tuple(tuple(lam_sq * a for a in row) for row in t))

    def with_pins(self, pins: Mapping[int, Sequence[int]]) -> "GramSystem":
        merged = dict(self.pinned)
        merged.update({i: tuple(v) for i, v in pins.items()})
        return GramSystem(self.dim, self.target, merged)

    def pins_consistent(self) -> bool:
        items = sorted(self.pinned.items())
        for a, (i, u) in enumerate(items):
            for j, v in items[a:]:
                want = self.target[i][j]
                if want is not None and sum(p * q for p, q in zip(u, v)) != want:
                    return False
        return True


def _as_int_matrix(t) -> list[list[int]]:
    arr = np.asarray(t)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidInput("Gram matrix must be square")
    out = [[int(a) for a in row] for row in arr.tolist()]
    if any(float(a) != b for a, b in zip(arr.ravel().tolist(), sum(out, []))):
        raise InvalidInput("Gram matrix entries must be integers")
    return out


def doubled_system(t, lam_sq: int, dim: int) -> GramSystem:
    """The system counted by ``sum W(y_k, y_k')^2``.

    Vector order: ``y_k, y_k', y_1..y_{k-1}, y_1'..y_{k-1}'``.  Inner products
    between primed and unprimed prefix vectors, and ``y_k . y_k'``, are free.
    """
    t = _as_int_matrix(t)
    k = len(t)
    n = 2 * k
    tgt: list[list[int | None]] = [[None] * n for _ in range(n)]
    last = (0, 1)
    first = list(range(2, k + 1))
    second = list(range(k + 1, 2 * k))
    for a in last:
        tgt[a][a] = lam_sq * t[k - 1][k - 1]
    for group in (first, second):
        for i, gi in enumerate(group):
            for j, gj in enumerate(group):
                tgt[gi][gj] = lam_sq * t[i][j]
            for a in last:
                tgt[gi][a] = tgt[a][gi] = lam_sq * t[i][k - 1]
    return GramSystem(dim, tuple(map(tuple, tgt)))


def one_sided_system(t, lam_sq: int, dim: int) -> GramSystem:
    """Two prefixes sharing one final vector: ``y_k, y_1..y_{k-1}, y_1'..y_{k-1}'``."""
    t = _as_int_matrix(t)
    k = len(t)
    n = 2 * k - 1
    tgt: list[list[int | None]] = [[None] * n for _ in range(n)]
    tgt[0][0] = lam_sq * t[k - 1][k - 1]
    for group in (list(range(1, k)), list(range(k, 2 * k - 1))):
        for i, gi in enumerate(group):
            for j, gj in enumerate(group):
                tgt[gi][gj] = lam_sq * t[i][j]
            tgt[gi][0] = tgt[0][gi] = lam_sq * t[i][k - 1]
    return GramSystem(dim, tuple(map(tuple, tgt)))


def weight_system(t, lam_sq: int, dim: int) -> GramSystem:
    """``y_k, y_k', y_1..y_{k-1}``: pinning the first two counts ``W(y_k, y_k')``."""
    t = _as_int_matrix(t)
    k = len(t)
    n = k + 1
    tgt: list[list[int | None]] = [[None] * n for _ in range(n)]
    for a in (0, 1):
        tgt[a][a] = lam_sq * t[k - 1][k - 1]
    for i in range(k - 1):
        for j in range(k - 1):
            tgt[2 + i][2 + j] = lam_sq * t[i][j]
        for a in (0, 1):
            tgt[2 + i][a] = tgt[a][2 + i] = lam_sq * t[i][k - 1]
    return GramSystem(dim, tuple(map(tuple, tgt)))


def _candidates(system: GramSystem, i: int, assigned: dict[int, np.ndarray], budget: _Budget) -> np.ndarray:
    pts = sphere_array(system.dim, system.target[i][i], budget.limit)
    budget.spend(len(pts))
    cons = [(v, system.target[i][j]) for j, v in assigned.items() if system.target[i][j] is not None]
    if not cons:
        return pts
    mask = np.ones(len(pts), dtype=bool)
    for v, want in cons:
        mask &= (pts @ v.astype(np.int64)) == want
        if not mask.any():
            break
    return pts[mask]


def _free_order(system: GramSystem) -> list[int]:
    return [i for i in range(system.size) if i not in system.pinned]


def enumerate_solutions(system: GramSystem, budget: int | None = None) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Yield every solution tuple ``(y_0, ..., y_{n-1})`` of the system.

    Free vectors are assigned in index order, each ranging lexicographically,
    so the stream order is reproducible.  An inconsistent set of pins gives
    an empty stream.
    """
    if not system.pins_consistent():
        return
    bud = _Budget(budget)
    free = _free_order(system)
    assigned = {i: np.array(v, dtype=np.int64) for i, v in system.pinned.items()}

    def rec(level: int):
        if level == len(free):
            yield tuple(tuple(int(a) for a in assigned[i]) for i in range(system.size))
            return
        i = free[level]
        for row in _candidates(system, i, assigned, bud):
            assigned[i] = row.astype(np.int64)
            yield from rec(level + 1)
        assigned.pop(i, None)

    yield from rec(0)


enumerate_completions = enumerate_solutions


def _pair_count(system: GramSystem, i: int, j: int, cands: np.ndarray, assigned: dict, budget: _Budget, block: int = 2048) -> int:
    """Number of (row of ``cands``, y_j) pairs meeting the ``i, j`` constraint, by blocked products."""
    last = _candidates(system, j, assigned, budget)
    want = system.target[i][j]
    if want is None or len(cands) == 0 or len(last) == 0:
        return len(cands) * len(last)
    budget.spend(len(cands) * len(last))
    # dot products are bounded by the squared radii, far below 2^53
    lt = last.astype(np.float64).T
    block = max(1, min(block, (1 << 24) // len(last)))  # cap the product at 128 MiB
    total = 0
    for s in range(0, len(cands), block):
        total += int(np.count_nonzero(cands[s : s + block].astype(np.float64) @ lt == want))
    return total


def count_solutions(system: GramSystem, budget: int | None = None, threads: int = 1) -> int:
    """Exact number of solutions.

    The last two free vectors are counted together with a blocked matrix
    product; earlier vectors are enumerated depth-first.  With ``threads > 1``
    the candidates for the first free vector are split into contiguous
    chunks, and chunk totals are merged in order.
    """
    if not system.pins_consistent():
        return 0
    free = _free_order(system)
    if not free:
        return 1
    bud = _Budget(budget)
    base = {i: np.array(v, dtype=np.int64) for i, v in system.pinned.items()}
    roots = _candidates(system, free[0], base, bud)
    if len(free) == 1:
        return len(roots)

    def rec(level: int, assigned: dict[int, np.ndarray]) -> int:
        i = free[level]
        cands = _candidates(system, i, assigned, bud)
        if level == len(free) - 2:
            return _pair_count(system, i, free[level + 1], cands, assigned, bud)
        total = 0
        for row in cands:
            assigned[i] = row.astype(np.int64)
            total += rec(level + 1, assigned)
        assigned.pop(i, None)
        return total

    def work(rows: np.ndarray) -> int:
        if len(free) == 2:
            return _pair_count(system, free[0], free[1], rows, base, bud)
        return sum(rec(1, {**base, free[0]: row.astype(np.int64)}) for row in rows)

    if threads <= 1 or len(roots) < 2:
        return work(roots)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return sum(pool.map(work, np.array_split(roots, threads)))


def count_simplex_copies(t, lam_sq: int, dim: int, budget: int | None = None, threads: int = 1) -> int:
    """``N_{lambda Delta}``: tuples with ``y_i . y_j = lam_sq * t_ij``."""
    return count_solutions(GramSystem.from_gram(t, lam_sq, dim), budget, threads)


def solution_array(t, lam_sq: int, dim: int, budget: int | None = None) -> np.ndarray:
    """All copies of ``lam_sq * T`` as an ``(N, k, d)`` int64 array."""
    system = GramSystem.from_gram(t, lam_sq, dim)
    k = system.size
    bud = _Budget(budget)
    out: list[np.ndarray] = []

    def rec(prefix: list[np.ndarray]):
        i = len(prefix)
        cands = _candidates(system, i, dict(enumerate(prefix)), bud)
        if i == k - 1:
            if len(cands):
                stacked = np.empty((len(cands), k, dim), dtype=np.int64)
                for j, v in enumerate(prefix):
                    stacked[:, j, :] = v
                stacked[:, i, :] = cands
                out.append(stacked)
            return
        for row in cands:
            rec(prefix + [row.astype(np.int64)])

    rec([])
    if not out:
        return np.zeros((0, k, dim), dtype=np.int64)
    return np.concatenate(out)


# ---------------------------------------------------------------- weights


def _incidence(t, lam_sq: int, dim: int, budget: int | None) -> np.ndarray:
    """``M[a, b] = 1`` iff prefix solution ``a`` extends by sphere point ``b``."""
    tm = _as_int_matrix(t)
    k = len(tm)
    last = sphere_array(dim, lam_sq * tm[k - 1][k - 1], budget).astype(np.int64)
    if k == 1:
        return np.ones((1, len(last)), dtype=np.float32)
    prefix = solution_array([row[: k - 1] for row in tm[: k - 1]], lam_sq, dim, budget)
    limit = default_budget() if budget is None else budget
    if len(prefix) * len(last) > limit:
        raise BudgetExceeded(limit, "weight incidence matrix")
    mask = np.ones((len(prefix), len(last)), dtype=bool)
    for i in range(k - 1):
        mask &= (prefix[:, i, :] @ last.T) == lam_sq * tm[i][k - 1]
    return mask.astype(np.float32)


def weight(t, lam_sq: int, dim: int, yk, yk_prime, budget: int | None = None) -> int:
    """``W(y_k, y_k')``: number of prefixes completing both final vectors."""
    system = weight_system(t, lam_sq, dim).with_pins({0: tuple(yk), 1: tuple(yk_prime)})
    return count_solutions(system, budget)


def _sum_sq_gram(m: np.ndarray, block: int = 2048) -> int:
    """``||M M^T||_F^2`` exactly, for a 0/1 matrix with modest row sums."""
    if m.shape[0] > m.shape[1]:
        m = m.T
    m = np.ascontiguousarray(m)
    if m.shape[1] >= 2**24:
        raise InvalidInput("incidence matrix too wide for exact float32 products")
    total = 0
    for start in range(0, m.shape[0], block):
        g = m[start : start + block] @ m.T
        gi = np.rint(g).astype(np.int64)
        total += int((gi * gi).sum())
    return total


def weight_second_moment(t, lam_sq: int, dim: int, budget: int | None = None) -> int:
    """``sum_{y_k, y_k'} W(y_k, y_k')^2``, the solution count of the doubled system."""
    return _sum_sq_gram(_incidence(t, lam_sq, dim, budget))


def one_sided_second_moment(t, lam_sq: int, dim: int, budget: int | None = None) -> int:
    """``sum_{y_k} (#prefixes completed by y_k)^2``, the one-sided doubled count."""
    col = _incidence(t, lam_sq, dim, budget).sum(axis=0)
    c = np.rint(col).astype(np.int64)
    return int((c.astype(object) ** 2).sum())


# ------------------------------------------------- single linear constraint


def _dp_step(dp: np.ndarray, a: int, n: int, bound: int) -> np.ndarray:
    s = math.isqrt(n)
    new = np.zeros_like(dp)
    width = 2 * bound + 1
    for b in range(-s, s + 1):
        sq, sh = b * b, a * b
        if abs(sh) > bound:
            continue
        if sh >= 0:
            new[sq:, sh:] += dp[: n + 1 - sq, : width - sh]
        else:
            new[sq:, :sh] += dp[: n + 1 - sq, -sh:]
    return new


def orbit_size(x: Sequence[int]) -> int:
    """Size of the orbit of ``x`` under signed coordinate permutations."""
    counts = Counter(abs(a) for a in x)
    size = math.factorial(len(x))
    for c in counts.values():
        size //= math.factorial(c)
    return size * 2 ** sum(1 for a in x if a)


def pinned_pair_counts(d: int, n1: int, n2: int, dot: int) -> Iterator[tuple[tuple[int, ...], int, int]]:
    """For each sorted representative ``x`` of ``|x|^2 = n1`` under signed
    permutations, yield ``(x, orbit size, #{y : |y|^2 = n2, x . y = dot})``.

    The count is invariant along orbits, so summing ``orbit * count`` gives
    totals over the whole sphere.  The inner count runs a table indexed by
    (partial squared norm of y, partial dot) over the leading coordinates of
    ``x``; the table is shared between representatives with a common prefix
    and the last two coordinates are resolved by a vectorized lookup.
    """
    if d < 1:
        raise InvalidInput("dimension must be at least 1")
    if d < 3:
        ys = sphere_array(d, n2).astype(np.int64)
        for row in sphere_array(d, n1):
            x = tuple(sorted((abs(int(a)) for a in row), reverse=True))
            if tuple(int(a) for a in row) != x:
                continue
            yield x, orbit_size(x), int(np.count_nonzero(ys @ np.array(x) == dot))
        return
    bound = math.isqrt(n1 * n2) + 1
    if abs(dot) > bound:
        return
    s = math.isqrt(n2)
    bs = np.arange(-s, s + 1)
    b1, b2 = (g.ravel() for g in np.meshgrid(bs, bs, indexing="ij"))
    keep = b1 * b1 + b2 * b2 <= n2
    b1, b2 = b1[keep], b2[keep]
    rows = n2 - (b1 * b1 + b2 * b2)
    dp0 = np.zeros((n2 + 1, 2 * bound + 1), dtype=np.int64)
    dp0[0, bound] = 1

    def rec(prefix: tuple[int, ...], dp: np.ndarray, rem: int, cap: int):
        left = d - len(prefix)
        if left == 2:
            for a in range(min(cap, math.isqrt(rem)), -1, -1):
                if 2 * a * a < rem:
                    break
                c2 = rem - a * a
                c = math.isqrt(c2)
                if c * c != c2 or c > a:
                    continue
                cols = bound + dot - a * b1 - c * b2
                ok = (cols >= 0) & (cols <= 2 * bound)
                w = int(dp[rows[ok], cols[ok]].sum())
                x = prefix + (a, c)
                yield x, orbit_size(x), w
            return
        for a in range(min(cap, math.isqrt(rem)), -1, -1):
            if a * a * left < rem:
                break
            yield from rec(prefix + (a,), _dp_step(dp, a, n2, bound), rem - a * a, a)

    yield from rec((), dp0, n1, math.isqrt(n1))


def orthogonal_count_sum(d: int, n: int) -> int:
    """``sum_{|x|^2=n} #{y : |y|^2 = n, y . x = 0}`` without listing the sphere."""
    return sum(orb * w for _, orb, w in pinned_pair_counts(d, n, n, 0))


# ---------------------------------------------------------------- reports


@dataclass
class BandRow:
    lam_sq: int
    count: int | None
    ratio: float | None
    note: str = ""


def scaling_band_report(t, dim: int, lam_sqs: Sequence[int], budget: int | None = None) -> dict:
    """Ratios ``N_{lambda Delta} / det(lam_sq T)^((d-k-1)/2)`` over a list of scales."""
    from .geometry import exact_det

    tm = _as_int_matrix(t)
    k = len(tm)
    if dim < 2 * k + 3:
        warnings.warn(f"d={dim} is below 2k+3={2 * k + 3}; the counting band is not expected to hold", stacklevel=2)
    det_t = exact_det(tm)
    rows = []
    for lam_sq in lam_sqs:
        if lam_sq == 0:
            rows.append(BandRow(lam_sq, None, None, "lambda^2 = 0: ratio undefined"))
            continue
        count = count_simplex_copies(tm, lam_sq, dim, budget)
        det = det_t * lam_sq**k
        ratio = count / det ** ((dim - k - 1) / 2) if det > 0 else None
        rows.append(BandRow(lam_sq, count, ratio, "" if det > 0 else "singular Gram matrix"))
    ratios = [r.ratio for r in rows if r.ratio is not None]
    positive = [r for r in ratios if r > 0]
    band = max(positive) / min(positive) if positive else None
    return {
        "rows": rows,
        "max_ratio": max(ratios) if ratios else None,
        "min_ratio": min(ratios) if ratios else None,
        "band_factor": band,
    }
