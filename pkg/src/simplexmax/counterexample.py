"""A radial test family showing unboundedness below the critical exponent, evaluated shell by shell.

The first input is a point mass at the origin.  The others are radial
power-log profiles ``|x|^(-d/p) (log|x|)^(-1/p - tau)`` (zero for ``|x| < 2``),
or the constant 1 when ``p = inf``.  Choosing the scale ``lambda = |x|``
forces the first vertex onto ``x``, so the average at ``x`` is governed by
the number ``W(x)`` of ways to complete ``x`` to a full copy.  Blocks sum
``W`` over dyadic shells ``2^j <= |x| < 2^(j+1)``.
"""
from __future__ import annotations

import math
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .enumeration import (
    GramSystem,
    _as_int_matrix,
    count_solutions,
    default_budget,
    orbit_size,
    pinned_pair_counts,
    representation_numbers,
    sphere_array,
    sphere_size_estimate,
)
from .errors import BudgetExceeded, InvalidInput
from .operators import GridFunction


def _as_exponent(p) -> Fraction | float:
    if isinstance(p, str):
        if p.lower() in ("inf", "infinity", "oo"):
            return math.inf
        return Fraction(p)
    if isinstance(p, float) and math.isinf(p):
        return math.inf
    return Fraction(p)


def _recip(p) -> Fraction:
    return Fraction(0) if p == math.inf else 1 / Fraction(p)


@dataclass
class CounterexampleFamily:
    d: int
    k: int
    t: list[list[int]]
    p: list
    tau: Fraction | None = None
    radius: int = 16

    def __post_init__(self):
        self.t = _as_int_matrix(self.t)
        if len(self.t) != self.k:
            raise InvalidInput(f"Gram matrix has order {len(self.t)}, expected k={self.k}")
        if len(self.p) != self.k:
            raise InvalidInput(f"{len(self.p)} exponents for k={self.k}")
        self.p = [_as_exponent(x) for x in self.p]
        if any(x != math.inf and x < 1 for x in self.p):
            raise InvalidInput("exponents must be at least 1")
        if self.p[0] == math.inf:
            raise InvalidInput("the point-mass exponent p_1 must be finite")
        if self.tau is None:
            # midpoint of the admissible range (0, 1/(k p_1)]
            self.tau = 1 / (2 * self.k * Fraction(self.p[0]))
        self.tau = Fraction(self.tau)
        if self.tau <= 0:
            raise InvalidInput("tau must be positive")
        if self.d < self.k + 1:
            raise InvalidInput("need d >= k + 1")
        if self.d < 2 * self.k + 3:
            warnings.warn(f"d={self.d} is below 2k+3={2 * self.k + 3}", stacklevel=2)

    @property
    def critical(self) -> Fraction:
        return Fraction(self.d, self.d - 2)

    @property
    def in_regime(self) -> bool:
        return Fraction(self.p[0]) <= self.critical

    def r(self) -> Fraction | float:
        s = sum(_recip(x) for x in self.p)
        return math.inf if s == 0 else 1 / s

    def profile(self, i: int, n: np.ndarray) -> np.ndarray:
        """Value of ``f_i`` at points with squared norm ``n``; index 0 is the point mass."""
        n = np.asarray(n, dtype=np.float64)
        if i == 0:
            return (n == 0).astype(np.float64)
        p = self.p[i]
        if p == math.inf:
            return np.ones_like(n)
        out = np.zeros_like(n)
        big = n >= 4
        rad = np.sqrt(n[big])
        out[big] = rad ** (-self.d / float(p)) * np.log(rad) ** (-1 / float(p) - float(self.tau))
        return out

    def grid_functions(self, radius: int | None = None, max_points: int = 5_000_000) -> list[GridFunction]:
        """The family tabulated on ``[-R, R]^d``; refuses boxes beyond ``max_points``."""
        rad = self.radius if radius is None else radius
        if (2 * rad + 1) ** self.d > max_points:
            raise BudgetExceeded(max_points, f"tabulating [-{rad},{rad}]^{self.d}")
        out = [GridFunction.delta(self.d)]
        for i in range(1, self.k):
            out.append(GridFunction.from_callable([-rad] * self.d, [rad] * self.d, lambda pts, i=i: self.profile(i, (pts * pts).sum(axis=1))))
        return out

    def metadata(self) -> dict:
        r = self.r()
        return {
            "d": self.d,
            "k": self.k,
            "T": self.t,
            "p": [_fmt_exp(x) for x in self.p],
            "r": _fmt_exp(r),
            "tau": str(self.tau),
            "annulus_1_to_2": "set to 0",
            "seedless": True,
        }


def _fmt_exp(x) -> str:
    return "inf" if x == math.inf else str(x)


def family_norms(fam: CounterexampleFamily, radius: int | None = None) -> tuple[float, ...]:
    """``(||f_1||_{p_1}, .., ||f_k||_{p_k})`` on the box ``[-R, R]^d``, summed by squared radius."""
    rad = fam.radius if radius is None else radius
    counts = None
    out = [1.0]
    for i in range(1, fam.k):
        p = fam.p[i]
        if p == math.inf:
            out.append(1.0)
            continue
        if counts is None:
            counts = _box_representation_numbers(fam.d, rad)
        n = np.arange(len(counts))
        vals = fam.profile(i, n)
        out.append(float(np.sum(counts * vals ** float(p)) ** (1 / float(p))))
    return tuple(out)


def _box_representation_numbers(d: int, rad: int) -> np.ndarray:
    n_max = d * rad * rad
    one = np.zeros(n_max + 1, dtype=np.int64)
    for a in range(-rad, rad + 1):
        one[a * a] += 1
    out = np.zeros(n_max + 1, dtype=np.int64)
    out[0] = 1
    sq = np.nonzero(one)[0]
    for _ in range(d):
        nxt = np.zeros_like(out)
        for s in sq:
            nxt[s:] += one[s] * out[: n_max + 1 - s]
        out = nxt
    return out.astype(np.float64)


# ---------------------------------------------------------------- shell sums


def _sorted_reps(d: int, n: int):
    for row in sphere_array(d, n):
        x = tuple(int(a) for a in row)
        if all(x[i] >= x[i + 1] for i in range(d - 1)) and x[-1] >= 0:
            yield x


def completion_total(d: int, t, lam_sq: int, budget: int | None = None) -> int:
    """``sum_x W(x)`` over ``|x|^2 = lam_sq t_11``: all copies counted through their first vertex."""
    tm = _as_int_matrix(t)
    k = len(tm)
    n1 = lam_sq * tm[0][0]
    if k == 1:
        return int(representation_numbers(d, n1)[n1])
    if k == 2:
        return sum(o * w for _, o, w in pinned_pair_counts(d, n1, lam_sq * tm[1][1], lam_sq * tm[0][1]))
    system = GramSystem.from_gram(tm, lam_sq, d)
    return sum(orbit_size(x) * count_solutions(system.with_pins({0: x}), budget) for x in _sorted_reps(d, n1))


def shell_cost_estimate(d: int, t, j: int) -> float:
    """Rough node count for a shell: table cells times sorted representatives."""
    tm = _as_int_matrix(t)
    lo, hi = 4**j, 4 ** (j + 1)
    cost = 0.0
    for n in range(lo, hi):
        if n % tm[0][0]:
            continue
        reps = sphere_size_estimate(d, n) / (2**d * math.factorial(d)) + 1
        cost += reps * (n + 1) if len(tm) == 2 else reps * sphere_size_estimate(d, n) ** (len(tm) - 1)
    return cost


@dataclass
class ShellSum:
    j: int
    total: int
    per_lambda: dict[int, int]

    @property
    def positive_lambdas(self) -> int:
        return sum(1 for v in self.per_lambda.values() if v > 0)


def shell_weight_sum(d: int, k: int, t, j: int, budget: int | None = None, threads: int = 1) -> ShellSum:
    """Exact ``sum W(x)`` over ``4^j <= |x|^2 < 4^(j+1)``, with per-scale subtotals.

    The scale attached to ``x`` is ``lam_sq = |x|^2 / t_11``, so only points
    whose squared norm is a multiple of ``t_11`` contribute.
    """
    tm = _as_int_matrix(t)
    if len(tm) != k:
        raise InvalidInput(f"Gram matrix has order {len(tm)}, expected k={k}")
    if d < k + 1:
        raise InvalidInput("need d >= k + 1")
    if d < 2 * k + 3:
        warnings.warn(f"d={d} is below 2k+3={2 * k + 3}", stacklevel=2)
    limit = default_budget() if budget is None else budget
    if shell_cost_estimate(d, tm, j) > limit:
        raise BudgetExceeded(limit, f"shell j={j}")
    lams = [n // tm[0][0] for n in range(4**j, 4 ** (j + 1)) if n % tm[0][0] == 0]

    def one(lam_sq: int) -> int:
        return completion_total(d, tm, lam_sq, budget)

    if threads > 1 and len(lams) > 1:
        # largest scales first for balance; results are keyed, so order is irrelevant
        with ThreadPoolExecutor(max_workers=threads) as pool:
            vals = dict(zip(lams[::-1], pool.map(one, lams[::-1])))
    else:
        vals = {lam: one(lam) for lam in lams}
    per = {lam: vals[lam] for lam in lams}
    return ShellSum(j, sum(per.values()), per)


# ---------------------------------------------------------------- reports


@dataclass
class BlockReport:
    j: int
    shell_sum: int
    block: float
    normalized: float
    partial_sum: float
    positive_lambdas: int
    lambda_density: float
    elapsed_ms: float = field(default=0.0, compare=False)

    def to_json(self) -> dict:
        doc = asdict(self)
        doc["shell_sum"] = str(self.shell_sum)
        doc.pop("elapsed_ms")
        return doc


@dataclass
class DivergenceReport:
    blocks: list[BlockReport]
    verdict: str
    reasons: list[str]
    metadata: dict

    def to_json(self) -> dict:
        return {"metadata": self.metadata, "verdict": self.verdict, "reasons": self.reasons, "blocks": [b.to_json() for b in self.blocks]}

    def timings(self) -> dict:
        return {str(b.j): b.elapsed_ms for b in self.blocks}


def divergence_report(fam: CounterexampleFamily, r=None, j_max: int = 3, j_min: int = 1, budget: int | None = None, threads: int = 1) -> DivergenceReport:
    """Dyadic blocks ``B_j = 2^(-jd) sum_shell W`` and the partial sums ``sum 2^(jd) B_j^r``.

    The verdict is ``divergence-consistent`` only inside the regime
    ``p_1 <= d/(d-2)`` with ``1/r = sum 1/p_i``, when every normalized block
    ``B_j 2^(jd/r) j^(1/r)`` is positive, none falls below half the first,
    and the partial sums strictly increase.  Otherwise it is ``inconclusive``.
    """
    r = fam.r() if r is None else _as_exponent(r)
    if r == math.inf:
        raise InvalidInput("r must be finite")
    rf = float(r)
    d = fam.d
    blocks: list[BlockReport] = []
    partial = 0.0
    for j in range(max(j_min, 1), j_max + 1):
        t0 = time.perf_counter()
        shell = shell_weight_sum(d, fam.k, fam.t, j, budget, threads)
        block = Fraction(shell.total, 2 ** (j * d))
        normalized = float(block) * 2 ** (j * d / rf) * j ** (1 / rf)
        partial += 2 ** (j * d) * float(block) ** rf
        blocks.append(
            BlockReport(
                j,
                shell.total,
                float(block),
                normalized,
                partial,
                shell.positive_lambdas,
                shell.positive_lambdas / (3 * 4**j),
                (time.perf_counter() - t0) * 1000,
            )
        )
    reasons: list[str] = []
    if not fam.in_regime:
        reasons.append(f"p_1 = {_fmt_exp(fam.p[0])} exceeds d/(d-2) = {fam.critical}")
    if abs(float(1 / Fraction(r) if r != math.inf else 0) - float(sum(_recip(x) for x in fam.p))) > 1e-12:
        reasons.append("1/r differs from sum 1/p_i")
    if not blocks:
        reasons.append("no blocks computed")
    else:
        norms = [b.normalized for b in blocks]
        if min(norms) <= 0:
            reasons.append("a normalized block is not positive")
        if any(v < 0.5 * norms[0] for v in norms):
            reasons.append("normalized blocks decay below half the first")
        sums = [b.partial_sum for b in blocks]
        if any(b <= a for a, b in zip(sums, sums[1:])):
            reasons.append("partial sums are not strictly increasing")
    verdict = "inconclusive" if reasons else "divergence-consistent"
    meta = fam.metadata() | {"r_used": _fmt_exp(r), "j_min": max(j_min, 1), "j_max": j_max}
    return DivergenceReport(blocks, verdict, reasons, meta)


def radial_profile_check(fam: CounterexampleFamily, i: int, n_max: int = 10_000) -> bool:
    """``f_i`` is non-increasing in ``|x|`` on ``|x| >= 2`` (checked on ``4 <= |x|^2 <= n_max``)."""
    vals = fam.profile(i, np.arange(4, n_max + 1))
    return bool(np.all(np.diff(vals) <= 0))


__all__ = [
    "CounterexampleFamily",
    "ShellSum",
    "BlockReport",
    "DivergenceReport",
    "family_norms",
    "completion_total",
    "shell_weight_sum",
    "shell_cost_estimate",
    "divergence_report",
    "radial_profile_check",
]
