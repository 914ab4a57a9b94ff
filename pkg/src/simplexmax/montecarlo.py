"""Monte Carlo averages over rotations of a simplex in R^d.

Functions are passed as vectorized callbacks taking an ``(n, d)`` array of
points and returning ``n`` values.  Every routine takes an explicit seed so
runs are reproducible.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateBasis, InvalidInput
from .geometry import distance_to_span, is_dependent, parallelepiped_volume

Callback = Callable[[np.ndarray], np.ndarray]


@dataclass
class RotationSampler:
    """Haar-distributed rotations of R^d from a seeded generator.

    ``split(i)`` gives an independent sampler for a worker, so a partition of
    the sample index space into fixed blocks stays reproducible.
    """

    dim: int
    seed: int = 0
    batch: int = 4096
    rng: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        if self.dim < 2:
            raise InvalidInput("rotations need d >= 2")
        self.rng = np.random.default_rng(self.seed)

    def sample(self, n: int) -> np.ndarray:
        """``n`` rotations as an ``(n, d, d)`` array."""
        out = np.empty((n, self.dim, self.dim))
        for s in range(0, n, self.batch):
            m = min(self.batch, n - s)
            g = self.rng.standard_normal((m, self.dim, self.dim))
            q, r = np.linalg.qr(g)
            # positive diagonal of R makes Q Haar on O(d)
            q *= np.sign(np.diagonal(r, axis1=1, axis2=2))[:, None, :]
            neg = np.linalg.det(q) < 0
            q[neg, :, 0] *= -1
            out[s : s + m] = q
        return out

    def split(self, i: int) -> "RotationSampler":
        return RotationSampler(self.dim, seed=int(np.random.SeedSequence([self.seed, i]).generate_state(1)[0]), batch=self.batch)


def sample_rotation(sampler: RotationSampler) -> np.ndarray:
    return sampler.sample(1)[0]


@dataclass(frozen=True)
class SampledAverage:
    estimate: float
    n: int
    stderr: float

    @classmethod
    def from_values(cls, vals: np.ndarray) -> "SampledAverage":
        n = len(vals)
        if n == 0:
            raise InvalidInput("at least one sample is required")
        sd = float(vals.std(ddof=1)) if n > 1 else 0.0
        return cls(float(vals.mean()), n, sd / math.sqrt(n))


def _vertices(simplex) -> np.ndarray:
    v = getattr(simplex, "vertices", simplex)
    return np.atleast_2d(np.asarray(v, dtype=np.float64))


def rotated_vertices(simplex, rotations: np.ndarray) -> np.ndarray:
    """``U v_j`` for every rotation, shape ``(n, k, d)``."""
    return np.einsum("nij,kj->nki", rotations, _vertices(simplex))


def _products(fs: Sequence[Callback | float], x: np.ndarray, lam: float, uv: np.ndarray) -> np.ndarray:
    vals = np.ones(len(uv))
    for j, f in enumerate(fs):
        if callable(f):
            vals = vals * np.asarray(f(x + lam * uv[:, j, :]), dtype=np.float64)
        else:
            vals = vals * float(f)
    return vals


def mc_multilinear_average(fs: Sequence[Callback | float], simplex, lam: float, x, n: int, seed: int = 0) -> SampledAverage:
    """Estimate the rotation average of ``prod_j f_j(x + lam U v_j)`` from ``n`` Haar samples."""
    if lam <= 0 or n < 1:
        raise InvalidInput("need lam > 0 and n >= 1")
    v = _vertices(simplex)
    if len(fs) != len(v):
        raise InvalidInput(f"{len(fs)} functions for a {len(v)}-simplex")
    x = np.asarray(x, dtype=np.float64)
    uv = rotated_vertices(v, RotationSampler(v.shape[1], seed).sample(n))
    return SampledAverage.from_values(_products(fs, x, lam, uv))


def mc_average_grid(fs: Sequence[Callback | float], simplex, lams: Sequence[float], x, n: int, seed: int = 0) -> list[SampledAverage]:
    """Estimates at every ``lam`` from one shared rotation sample."""
    if len(lams) == 0:
        raise InvalidInput("empty lambda grid")
    v = _vertices(simplex)
    x = np.asarray(x, dtype=np.float64)
    uv = rotated_vertices(v, RotationSampler(v.shape[1], seed).sample(n))
    return [SampledAverage.from_values(_products(fs, x, lam, uv)) for lam in lams]


def mc_maximal(fs: Sequence[Callback | float], simplex, lams: Sequence[float], x, n: int, seed: int = 0) -> float:
    """``max_lam |estimate|`` with common random numbers across the grid."""
    return max(abs(a.estimate) for a in mc_average_grid(fs, simplex, lams, x, n, seed))


@dataclass(frozen=True)
class EmpiricalCheck:
    violation: float
    scale: float


def mc_cs_check(fs: Sequence[Callback], simplex, lam: float, x, n: int, seed: int = 0) -> EmpiricalCheck:
    """``A(f_1, f_2)^2 - A(f_1^2, 1) A(1, f_2^2)`` on a single empirical rotation sample."""
    if len(fs) != 2:
        raise InvalidInput("the empirical Cauchy-Schwarz check is bilinear")
    v = _vertices(simplex)
    x = np.asarray(x, dtype=np.float64)
    uv = rotated_vertices(v, RotationSampler(v.shape[1], seed).sample(n))
    a = np.asarray(fs[0](x + lam * uv[:, 0, :]), dtype=np.float64)
    b = np.asarray(fs[1](x + lam * uv[:, 1, :]), dtype=np.float64)
    if np.any(a < 0) or np.any(b < 0):
        raise InvalidInput("functions must be nonnegative")
    lhs = np.mean(a * b) ** 2
    rhs = np.mean(a * a) * np.mean(b * b)
    return EmpiricalCheck(float(lhs - rhs), float(rhs))


# ---------------------------------------------------------------- spheres


def uniform_sphere(rng: np.random.Generator, n: int, d: int, radius: float = 1.0) -> np.ndarray:
    g = rng.standard_normal((n, d))
    return radius * g / np.linalg.norm(g, axis=1, keepdims=True)


def iterated_sphere_sample(t, n: int, d: int, seed: int = 0) -> np.ndarray:
    """Tuples ``(y_1..y_k)`` with Gram matrix ``t``, one sphere at a time.

    ``y_1`` is uniform on its sphere; each later ``y_i`` has its component in
    ``span(y_1..y_{i-1})`` fixed by the Gram constraints and a uniform
    direction orthogonal to it.  The law equals that of a Haar rotation of
    any fixed realization.
    """
    t = np.asarray(t, dtype=np.float64)
    k = len(t)
    if k > d:
        raise InvalidInput("k must be at most d")
    chol = np.linalg.cholesky(t)  # rows are coordinates of a realization
    rng = np.random.default_rng(seed)
    out = np.empty((n, k, d))
    basis = np.empty((n, k, d))
    for i in range(k):
        g = rng.standard_normal((n, d))
        for j in range(i):
            g -= np.einsum("nd,nd->n", g, basis[:, j, :])[:, None] * basis[:, j, :]
        g /= np.linalg.norm(g, axis=1, keepdims=True)
        basis[:, i, :] = g
        out[:, i, :] = np.einsum("j,njd->nd", chol[i, : i + 1], basis[:, : i + 1, :])
    return out


# ---------------------------------------------------------------- pair weight


def sphere_witness(y2, y2p, t11: float, t12: float, seed: int = 0) -> np.ndarray:
    """A point ``y_1`` with ``|y_1|^2 = t11`` and ``y_1 . y2 = y_1 . y2p = t12``."""
    y2, y2p = np.asarray(y2, dtype=np.float64), np.asarray(y2p, dtype=np.float64)
    b = np.vstack([y2, y2p])
    if is_dependent(b):
        raise DegenerateBasis("y2 and y2' are dependent")
    g = b @ b.T
    coef = np.linalg.solve(g, np.array([t12, t12]))
    base = coef @ b
    rest = t11 - base @ base
    if rest < -1e-12 * max(1.0, t11):
        raise InvalidInput("no admissible witness: the three spheres do not meet")
    rng = np.random.default_rng(seed)
    u = rng.standard_normal(len(y2))
    u -= b.T @ np.linalg.solve(g, b @ u)
    u /= np.linalg.norm(u)
    return base + math.sqrt(max(rest, 0.0)) * u


def pair_weight(y2, y2p, d: int, t=None, y1=None, seed: int = 0) -> float:
    """``vol(y1, y1-y2, y1-y2')^(d-4) * vol(y2, y2')^(3-d)``.

    ``y1`` is a witness on the intersection of the three spheres; when it is
    omitted one is built from the Gram matrix ``t``.
    """
    y2, y2p = np.asarray(y2, dtype=np.float64), np.asarray(y2p, dtype=np.float64)
    base = parallelepiped_volume(np.vstack([y2, y2p]))
    if base == 0.0:
        raise DegenerateBasis("y2 and y2' are dependent")
    if y1 is None:
        if t is None:
            raise InvalidInput("either a witness y1 or the Gram matrix t is needed")
        t = np.asarray(t, dtype=np.float64)
        y1 = sphere_witness(y2, y2p, t[0, 0], t[0, 1], seed)
    y1 = np.asarray(y1, dtype=np.float64)
    top = parallelepiped_volume(np.vstack([y1, y1 - y2, y1 - y2p]))
    return top ** (d - 4) * base ** (3 - d)


def pair_weight_identity_gap(y1, y2, y2p) -> float:
    """``|vol(y1, y1-y2, y1-y2') / vol(y2, y2') - dist(y1, span(y2, y2'))|``."""
    y1, y2, y2p = (np.asarray(a, dtype=np.float64) for a in (y1, y2, y2p))
    ratio = parallelepiped_volume(np.vstack([y1, y1 - y2, y1 - y2p])) / parallelepiped_volume(np.vstack([y2, y2p]))
    return abs(ratio - distance_to_span(y1, np.vstack([y2, y2p])))


# ---------------------------------------------------------------- integrability


@dataclass
class IntegrandScan:
    ns: list[int]
    means: list[float]
    stderrs: list[float]
    stable: bool
    heavy_tail: bool
    max_share: float


def _volumes(z: np.ndarray) -> np.ndarray:
    # z: (n, m, d); volume from the R factor of each tuple
    r = np.linalg.qr(np.swapaxes(z, 1, 2), mode="r")
    return np.abs(np.prod(np.diagonal(r, axis1=1, axis2=2), axis=1))


def volume_moment_scan(m: int, s: float, d: int, n: int, t: float = 1.0, doublings: int = 3, seed: int = 0) -> IntegrandScan:
    """Running means of ``vol(z_1..z_m)^-s`` for i.i.d. uniform ``z_i`` on the sphere ``|z|^2 = t``.

    Means are reported at ``n, 2n, 4n, ..``.  ``stable`` is the Cauchy test
    between the last two prefixes (difference below 5 combined standard
    errors).  ``heavy_tail`` is raised when ``d < m + s``, where the integral
    is infinite, or when a single sample carries over 5% of the total.
    """
    if m < 1 or m > d:
        raise InvalidInput("need 1 <= m <= d")
    rng = np.random.default_rng(seed)
    total = n * 2**doublings
    z = uniform_sphere(rng, total * m, d, math.sqrt(t)).reshape(total, m, d)
    with np.errstate(divide="ignore"):
        vals = _volumes(z) ** (-s)
    ns, means, errs = [], [], []
    for i in range(doublings + 1):
        size = n * 2**i
        block = vals[:size]
        ns.append(size)
        means.append(float(block.mean()))
        errs.append(float(block.std(ddof=1) / math.sqrt(size)) if size > 1 else 0.0)
    diff = abs(means[-1] - means[-2]) if len(means) > 1 else 0.0
    stable = bool(np.isfinite(means[-1]) and diff <= 5 * math.hypot(errs[-1], errs[-2] if len(errs) > 1 else 0.0) + 1e-12 * abs(means[-1]))
    share = float(vals.max() / vals.sum()) if np.isfinite(vals.sum()) and vals.sum() > 0 else 1.0
    heavy = bool(d < m + s or share > 0.05)
    return IntegrandScan(ns, means, errs, stable, heavy, share)


def haar_moment_gap(d: int, n: int, seed: int = 0, v=None) -> tuple[float, float]:
    """Max entrywise gap of the mean and covariance of ``Uv`` from ``0`` and ``|v|^2 I / d``."""
    v = np.ones(d) if v is None else np.asarray(v, dtype=np.float64)
    uv = RotationSampler(d, seed).sample(n) @ v
    mean_gap = float(np.abs(uv.mean(axis=0)).max())
    cov = uv.T @ uv / n
    cov_gap = float(np.abs(cov - (v @ v) / d * np.eye(d)).max())
    return mean_gap, cov_gap


__all__ = [
    "RotationSampler",
    "SampledAverage",
    "EmpiricalCheck",
    "IntegrandScan",
    "sample_rotation",
    "rotated_vertices",
    "mc_multilinear_average",
    "mc_average_grid",
    "mc_maximal",
    "mc_cs_check",
    "uniform_sphere",
    "iterated_sphere_sample",
    "sphere_witness",
    "pair_weight",
    "pair_weight_identity_gap",
    "volume_moment_scan",
    "haar_moment_gap",
]
