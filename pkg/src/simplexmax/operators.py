"""Discrete multilinear averages over lattice copies of a simplex and their maximal function.

For a Gram matrix ``T`` and a scale ``lam_sq`` the average at ``x`` is the
mean of ``prod_j f_j(x + y_j)`` over all tuples ``(y_1..y_k)`` with
``y_i . y_j = lam_sq * t_ij``.  Normalization uses the exact number of such
tuples, so the Cauchy-Schwarz and Hoelder comparisons below hold with
constant one.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

from .enumeration import _as_int_matrix, count_simplex_copies, solution_array
from .errors import EmptyAverage, InvalidInput


class GridFunction:
    """A finitely supported function on Z^d stored densely on a box.

    ``corner`` is the lowest lattice point of the box and ``values`` has one
    axis per coordinate.  Points outside the box evaluate to zero.
    """

    def __init__(self, corner: Sequence[int], values: np.ndarray):
        values = np.array(values, dtype=np.float64)
        corner = np.asarray(corner, dtype=np.int64).ravel()
        if values.ndim != len(corner):
            raise InvalidInput(f"corner has {len(corner)} coordinates but values have {values.ndim} axes")
        if not np.all(np.isfinite(values)):
            raise InvalidInput("grid function values must be finite")
        values.setflags(write=False)
        self.corner = corner
        self.values = values

    @property
    def dim(self) -> int:
        return len(self.corner)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.values.shape

    @property
    def upper(self) -> np.ndarray:
        """Highest lattice point of the box (inclusive)."""
        return self.corner + np.array(self.shape) - 1

    def __repr__(self) -> str:
        return f"GridFunction(corner={self.corner.tolist()}, shape={self.shape})"

    @classmethod
    def from_callable(cls, lo: Sequence[int], hi: Sequence[int], func) -> "GridFunction":
        """Tabulate ``func`` (taking an ``(n, d)`` point array) on the box ``[lo, hi]``."""
        pts = box_points(lo, hi)
        shape = tuple(int(b - a + 1) for a, b in zip(lo, hi))
        vals = np.asarray(func(pts), dtype=np.float64).reshape(shape)
        return cls(lo, vals)

    @classmethod
    def constant(cls, c: float, lo: Sequence[int], hi: Sequence[int]) -> "GridFunction":
        shape = tuple(int(b - a + 1) for a, b in zip(lo, hi))
        return cls(lo, np.full(shape, float(c)))

    @classmethod
    def delta(cls, d: int, at: Sequence[int] | None = None) -> "GridFunction":
        at = [0] * d if at is None else list(at)
        return cls(at, np.ones((1,) * d))

    def __call__(self, points) -> np.ndarray:
        """Values at an array of lattice points with trailing axis ``d``."""
        idx = np.asarray(points, dtype=np.int64) - self.corner
        # negative offsets wrap to huge unsigned values, so one test checks both ends
        inside = (idx.view(np.uint64) < np.array(self.shape, dtype=np.uint64)).all(axis=-1)
        strides = np.array(self.values.strides, dtype=np.int64) // self.values.itemsize
        flat = np.where(inside, idx @ strides, 0)
        return np.where(inside, self.values.ravel()[flat], 0.0)

    def map(self, func) -> "GridFunction":
        """Apply ``func`` to the stored values; ``func(0)`` must be 0 to keep the support."""
        return GridFunction(self.corner, func(self.values))

    def __pow__(self, p: float) -> "GridFunction":
        return self.map(lambda v: np.abs(v) ** p)

    def nonzero_points(self) -> np.ndarray:
        return np.argwhere(self.values != 0) + self.corner

    def support_box(self) -> tuple[np.ndarray, np.ndarray] | None:
        nz = self.nonzero_points()
        if len(nz) == 0:
            return None
        return nz.min(axis=0), nz.max(axis=0)

    def sup_norm(self) -> float:
        return float(np.abs(self.values).max()) if self.values.size else 0.0

    def equals(self, other: "GridFunction") -> bool:
        return np.array_equal(self.corner, other.corner) and np.array_equal(self.values, other.values)


Function = Union[GridFunction, float, int]


def box_points(lo: Sequence[int], hi: Sequence[int]) -> np.ndarray:
    """All lattice points of ``[lo, hi]`` in lexicographic order as an ``(n, d)`` array."""
    axes = [np.arange(int(a), int(b) + 1) for a, b in zip(lo, hi)]
    grids = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=-1).astype(np.int64)


# ---------------------------------------------------------------- file format


def write_grid_function(f: GridFunction, path: str | Path, include_zeros: bool = True) -> None:
    """Write ``d n_rows`` then one ``x_1 .. x_d value`` line per point, lexicographic."""
    pts = box_points(f.corner, f.upper)
    vals = f.values.ravel()
    if not include_zeros:
        keep = vals != 0
        pts, vals = pts[keep], vals[keep]
    lines = [f"{f.dim} {len(pts)}"]
    lines += [" ".join(map(str, p.tolist())) + " " + repr(float(v)) for p, v in zip(pts, vals)]
    Path(path).write_text("\n".join(lines) + "\n")


def read_grid_function(path: str | Path) -> GridFunction:
    """Read the text format written by :func:`write_grid_function`.

    The box is the bounding box of the listed points; unlisted points are 0.
    """
    rows = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not rows:
        raise InvalidInput(f"{path}: empty grid function file")
    try:
        d, n = int(rows[0][0]), int(rows[0][1])
    except (ValueError, IndexError):
        raise InvalidInput(f"{path}: header must be 'd n_rows'") from None
    body = rows[1:]
    if len(body) != n:
        raise InvalidInput(f"{path}: header promises {n} rows, found {len(body)}")
    if d < 1:
        raise InvalidInput(f"{path}: dimension must be positive")
    if n == 0:
        return GridFunction([0] * d, np.zeros((1,) * d))
    pts = np.empty((n, d), dtype=np.int64)
    vals = np.empty(n)
    for i, row in enumerate(body):
        if len(row) != d + 1:
            raise InvalidInput(f"{path}: line {i + 2} has {len(row)} fields, expected {d + 1}")
        try:
            pts[i] = [int(a) for a in row[:d]]
            vals[i] = float(row[d])
        except ValueError:
            raise InvalidInput(f"{path}: line {i + 2} is not 'x_1 .. x_d value'") from None
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    grid = np.zeros(tuple(hi - lo + 1))
    grid[tuple((pts - lo).T)] = vals
    return GridFunction(lo, grid)


# ---------------------------------------------------------------- averages


@lru_cache(maxsize=64)
def _solutions_cached(t_key: tuple, lam_sq: int, dim: int) -> np.ndarray:
    sols = solution_array([list(r) for r in t_key], lam_sq, dim)
    sols.setflags(write=False)
    return sols


def copies(t, lam_sq: int, dim: int) -> np.ndarray:
    """Cached ``(N, k, d)`` array of the lattice copies of ``lam_sq * T``."""
    tm = _as_int_matrix(t)
    return _solutions_cached(tuple(map(tuple, tm)), int(lam_sq), int(dim))


def _dim_of(fs: Sequence[Function]) -> int | None:
    dims = {f.dim for f in fs if isinstance(f, GridFunction)}
    if len(dims) > 1:
        raise InvalidInput(f"functions have mismatched dimensions {sorted(dims)}")
    return dims.pop() if dims else None


def _evaluate(fs: Sequence[Function], sols: np.ndarray, points: np.ndarray, chunk: int = 1 << 22) -> np.ndarray:
    n = len(sols)
    out = np.empty(len(points))
    step = max(1, chunk // max(n, 1))
    for s in range(0, len(points), step):
        pts = points[s : s + step]
        prod = np.ones((len(pts), n))
        for j, f in enumerate(fs):
            if isinstance(f, GridFunction):
                prod *= f(pts[:, None, :] + sols[None, :, j, :])
            else:
                prod *= float(f)
        out[s : s + step] = prod.mean(axis=1)
    return out


def average_on_points(fs: Sequence[Function], t, lam_sq: int, points, dim: int | None = None, threads: int = 1) -> np.ndarray:
    """The normalized average at each row of ``points``."""
    tm = _as_int_matrix(t)
    if len(fs) != len(tm):
        raise InvalidInput(f"{len(fs)} functions given for a {len(tm)}-simplex")
    pts = np.atleast_2d(np.asarray(points, dtype=np.int64))
    d = dim or _dim_of(fs) or pts.shape[1]
    if pts.shape[1] != d:
        raise InvalidInput(f"points have dimension {pts.shape[1]}, functions have {d}")
    sols = copies(tm, lam_sq, d)
    if len(sols) == 0:
        raise EmptyAverage(f"no lattice copies at lambda^2={lam_sq}; this scale must be excluded")
    if threads <= 1 or len(pts) < 2 * threads:
        return _evaluate(fs, sols, pts)
    parts = np.array_split(pts, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return np.concatenate(list(pool.map(lambda p: _evaluate(fs, sols, p), parts)))


def multilinear_average(fs: Sequence[Function], t, lam_sq: int, x) -> float:
    """``N^-1 sum prod_j f_j(x + y_j)`` over the lattice copies of ``lam_sq * T``.

    Entries of ``fs`` may be numbers, standing for constant functions.
    """
    x = np.asarray(x, dtype=np.int64).ravel()
    return float(average_on_points(fs, t, lam_sq, x[None, :], dim=len(x))[0])


@dataclass(frozen=True)
class LambdaSet:
    """Sorted distinct scales ``lam_sq`` at which copies exist."""

    values: tuple[int, ...]

    def __post_init__(self):
        vals = tuple(sorted(set(int(v) for v in self.values)))
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_range(cls, t, dim: int, lo: int, hi: int) -> "LambdaSet":
        """All ``lam_sq`` in ``[lo, hi]`` with a positive copy count."""
        lo = max(lo, 1)
        return cls(tuple(v for v in range(lo, hi + 1) if count_simplex_copies(t, v, dim) > 0))

    def __iter__(self):
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def max(self) -> int:
        return self.values[-1]


def default_eval_box(fs: Sequence[Function], t, lam_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Hull of the grid supports dilated by the largest vertex length; the average vanishes outside."""
    tm = _as_int_matrix(t)
    reach = math.isqrt(lam_max * max(tm[i][i] for i in range(len(tm)))) + 1
    boxes = [f.support_box() for f in fs if isinstance(f, GridFunction)]
    boxes = [b for b in boxes if b is not None]
    if not boxes:
        raise InvalidInput("at least one non-zero grid function is needed to pick an evaluation box")
    lo = np.min([b[0] for b in boxes], axis=0) - reach
    hi = np.max([b[1] for b in boxes], axis=0) + reach
    return lo, hi


def maximal(fs: Sequence[Function], t, lamset: LambdaSet | Iterable[int], box=None, threads: int = 1) -> GridFunction:
    """Pointwise ``max_lambda |A_lambda(f)|`` over ``lamset`` on an evaluation box."""
    lams = lamset if isinstance(lamset, LambdaSet) else LambdaSet(tuple(lamset))
    if len(lams) == 0:
        raise InvalidInput("empty lambda set")
    lo, hi = default_eval_box(fs, t, lams.max) if box is None else (np.asarray(box[0]), np.asarray(box[1]))
    pts = box_points(lo, hi)
    best = np.zeros(len(pts))
    for lam_sq in lams:
        best = np.maximum(best, np.abs(average_on_points(fs, t, lam_sq, pts, dim=len(lo), threads=threads)))
    return GridFunction(lo, best.reshape(tuple(int(b - a + 1) for a, b in zip(lo, hi))))


def lp_norm(f: GridFunction | np.ndarray, p: float) -> float:
    """``(sum |f|^p)^(1/p)``, or ``max |f|`` for ``p = inf``."""
    vals = np.abs(f.values if isinstance(f, GridFunction) else np.asarray(f, dtype=np.float64)).ravel()
    if p < 1:
        raise InvalidInput(f"p must be at least 1, got {p}")
    if vals.size == 0:
        return 0.0
    top = vals.max()
    if math.isinf(p):
        return float(top)
    if top == 0:
        return 0.0
    # rescale by the max so large p cannot overflow
    return float(top * np.sum((vals / top) ** p) ** (1.0 / p))


# ---------------------------------------------------------------- surrogates


@dataclass(frozen=True)
class SurrogateCheck:
    """Largest violation of a pointwise inequality and the size it is measured against."""

    max_violation: float
    scale: float
    points: int

    def holds(self, rtol: float = 1e-10) -> bool:
        return self.max_violation <= rtol * max(self.scale, 1e-300)


def _require_nonnegative(fs: Sequence[Function]):
    for f in fs:
        vals = f.values if isinstance(f, GridFunction) else np.array([f])
        if np.any(vals < 0):
            raise InvalidInput("surrogate checks need nonnegative functions")


def _sup(f: Function) -> float:
    return f.sup_norm() if isinstance(f, GridFunction) else abs(float(f))


def _pow(f: Function, p: float) -> Function:
    return f**p if isinstance(f, GridFunction) else abs(float(f)) ** p


def _points(fs, t, lam_sq, box, dim: int | None) -> np.ndarray:
    if box is None:
        if not any(isinstance(f, GridFunction) for f in fs):
            if dim is None:
                raise InvalidInput("dim is required when every input is a constant")
            return np.zeros((1, dim), dtype=np.int64)
        box = default_eval_box(fs, t, lam_sq)
    return box_points(*box)


def _lookups(fs: Sequence[Function], sols: np.ndarray, pts: np.ndarray) -> list[np.ndarray]:
    out = []
    for j, f in enumerate(fs):
        if isinstance(f, GridFunction):
            out.append(f(pts[:, None, :] + sols[None, :, j, :]))
        else:
            out.append(np.full((len(pts), len(sols)), float(f)))
    return out


def surrogate_checks(
    fs: Sequence[Function],
    t,
    lam_sq: int,
    ms: Sequence[int],
    box=None,
    x=None,
    dim: int | None = None,
    chunk: int = 1 << 21,
    averages: dict | None = None,
) -> dict[int, SurrogateCheck]:
    """Hoelder comparisons for several ``m`` from one pass of function lookups.

    For each ``m`` (with ``q = m/(m-1)``) the violation is
    ``A(f) - A(f_1^q, .., f_{k-1}^q, 1)^(1/q) A(1, .., 1, f_k^m)^(1/m)``, or for
    ``m = 2`` the squared form ``A(f)^2 - A(f_1^2, .., 1) A(1, .., f_k^2)``.
    Only the maximum over the evaluation points is kept.  When ``averages``
    is a dict it receives the per-point arrays ``"full"`` (``A(f)``) and
    ``"last_sq"`` (``A(1, .., 1, f_k^2)``).
    """
    if any(int(m) != m or m < 2 for m in ms):
        raise InvalidInput("m must be an integer >= 2")
    _require_nonnegative(fs)
    pts = np.atleast_2d(np.asarray(x, dtype=np.int64)) if x is not None else _points(fs, t, lam_sq, box, dim)
    d = _dim_of(fs) or pts.shape[1]
    sols = copies(t, lam_sq, d)
    if len(sols) == 0:
        raise EmptyAverage(f"no lattice copies at lambda^2={lam_sq}; this scale must be excluded")
    sup = math.prod(_sup(f) for f in fs)
    worst = {m: -math.inf for m in ms}
    step = max(1, chunk // len(sols))
    full, last_sq = [], []
    for s in range(0, len(pts), step):
        vals = _lookups(fs, sols, pts[s : s + step])
        head = np.prod(vals[:-1], axis=0) if len(vals) > 1 else np.ones_like(vals[0])
        a = (head * vals[-1]).mean(axis=1)
        full.append(a)
        last_sq.append((vals[-1] ** 2).mean(axis=1))
        for m in ms:
            q = m / (m - 1)
            b = (np.prod([v**q for v in vals[:-1]], axis=0) if len(vals) > 1 else np.ones_like(vals[0])).mean(axis=1)
            c = (vals[-1] ** m).mean(axis=1)
            viol = a * a - b * c if m == 2 else a - b ** (1 / q) * c ** (1 / m)
            worst[m] = max(worst[m], float(viol.max()))
    if averages is not None:
        averages["full"] = np.concatenate(full)
        averages["last_sq"] = np.concatenate(last_sq)
    return {m: SurrogateCheck(worst[m], sup * sup if m == 2 else sup, len(pts)) for m in ms}


def cs_surrogate_check(fs: Sequence[Function], t, lam_sq: int, box=None, x=None, dim: int | None = None) -> SurrogateCheck:
    """``max_x A(f)^2 - A(f_1^2, .., f_{k-1}^2, 1) A(1, .., 1, f_k^2)``.

    Cauchy-Schwarz on the normalized counting measure makes this at most 0;
    the scale is ``prod_j sup|f_j|^2``.
    """
    return surrogate_checks(fs, t, lam_sq, [2], box, x, dim)[2]


def holder_surrogate_check(fs: Sequence[Function], t, lam_sq: int, m: int, box=None, x=None, dim: int | None = None) -> SurrogateCheck:
    """``max_x A(f) - A(f_1^q, .., f_{k-1}^q, 1)^(1/q) A(1, .., 1, f_k^m)^(1/m)`` with ``q = m/(m-1)``.

    For ``m = 2`` this reports the squared (Cauchy-Schwarz) form.
    """
    return surrogate_checks(fs, t, lam_sq, [m], box, x, dim)[m]


# ---------------------------------------------------------------- experiments


@dataclass
class RatioRow:
    member: str
    output_norm: float
    input_norms: tuple[float, ...]
    ratio: float
    running_max: float


def _reciprocal(p: float) -> float:
    return 0.0 if math.isinf(p) else 1.0 / p


def operator_ratio_experiment(
    family: Sequence[tuple[str, Sequence[GridFunction]]],
    t,
    ps: Sequence[float],
    r: float,
    lamset: LambdaSet | Iterable[int],
    box=None,
    allow_any_exponents: bool = False,
) -> list[RatioRow]:
    """``||A_*(f)||_r / prod ||f_j||_{p_j}`` for each named member of a family."""
    if not allow_any_exponents and abs(_reciprocal(r) - sum(_reciprocal(p) for p in ps)) > 1e-12:
        raise InvalidInput("exponents must satisfy 1/r = sum 1/p_j (pass allow_any_exponents to override)")
    rows: list[RatioRow] = []
    running = 0.0
    for name, fs in family:
        if len(fs) != len(ps):
            raise InvalidInput(f"member {name!r} has {len(fs)} functions for {len(ps)} exponents")
        norms = tuple(lp_norm(f, p) for f, p in zip(fs, ps))
        if any(nv == 0 for nv in norms):
            raise InvalidInput(f"member {name!r} has a zero input norm")
        out = lp_norm(maximal(fs, t, lamset, box), r)
        ratio = out / math.prod(norms)
        running = max(running, ratio)
        rows.append(RatioRow(name, out, norms, ratio, running))
    return rows


def random_nonnegative(rng: np.random.Generator, d: int, radius: int, density: float = 0.5) -> GridFunction:
    """Random nonnegative grid function on ``[-radius, radius]^d`` with sparse support."""
    shape = (2 * radius + 1,) * d
    vals = rng.random(shape) * (rng.random(shape) < density)
    return GridFunction([-radius] * d, vals)


__all__ = [
    "GridFunction",
    "LambdaSet",
    "SurrogateCheck",
    "RatioRow",
    "box_points",
    "read_grid_function",
    "write_grid_function",
    "copies",
    "average_on_points",
    "multilinear_average",
    "maximal",
    "lp_norm",
    "surrogate_checks",
    "cs_surrogate_check",
    "holder_surrogate_check",
    "operator_ratio_experiment",
    "random_nonnegative",
    "default_eval_box",
]
