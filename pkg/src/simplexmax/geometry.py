"""Gram matrices, parallelepiped volumes and distances for simplices.

Simplices are stored by their non-zero vertices ``v_1..v_k`` (the origin is
implicit).  Integer vertices are handled with exact Python integers so Gram
entries never overflow; real vertices use float64.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateBasis, InvalidInput

# A tuple is treated as dependent when its smallest orthogonalized column
# norm falls below this fraction of the largest one.
DEPENDENCE_RTOL = 1e-12


class DegenerateBasisWarning(UserWarning):
    pass


def _is_integral(a: np.ndarray) -> bool:
    return np.issubdtype(a.dtype, np.integer) or a.dtype == object


@dataclass(frozen=True)
class Simplex:
    """The simplex ``{0, v_1, ..., v_k}`` in R^d or Z^d."""

    vertices: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.vertices)
        if v.ndim == 1:
            v = v.reshape(1, -1)
        if v.ndim != 2 or v.shape[0] == 0:
            raise InvalidInput("vertices must be a non-empty k x d array")
        if v.shape[0] > v.shape[1]:
            raise InvalidInput(f"k={v.shape[0]} vertices cannot be independent in d={v.shape[1]}")
        if not _is_integral(v):
            v = v.astype(np.float64)
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def k(self) -> int:
        return self.vertices.shape[0]

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def lattice(self) -> bool:
        return _is_integral(self.vertices)

    @property
    def nondegenerate(self) -> bool:
        t = gram_of_simplex(self)
        if self.lattice:
            return exact_det(t) > 0
        return parallelepiped_volume(self.vertices) > 0

    @classmethod
    def unit(cls, d: int) -> "Simplex":
        """The 1-simplex ``{0, e_1}`` in Z^d."""
        v = np.zeros((1, d), dtype=np.int64)
        v[0, 0] = 1
        return cls(v)


def gram_of_simplex(s: Simplex | np.ndarray) -> np.ndarray:
    """Inner product matrix ``t_ij = v_i . v_j``.

    Integer input is multiplied out in Python integers and returned as int64
    (``OverflowError`` if an entry does not fit); real input gives float64.
    """
    v = s.vertices if isinstance(s, Simplex) else np.asarray(s)
    if v.ndim == 1:
        v = v.reshape(1, -1)
    if _is_integral(v):
        rows = [[int(a) for a in row] for row in v]
        k = len(rows)
        t = [[sum(a * b for a, b in zip(rows[i], rows[j])) for j in range(k)] for i in range(k)]
        return np.array(t, dtype=np.int64)
    v = v.astype(np.float64)
    return v @ v.T


def exact_det(t) -> int:
    """Determinant of an integer matrix by fraction-free Bareiss elimination."""
    m = [[int(a) for a in row] for row in np.asarray(t).tolist()]
    n = len(m)
    sign, prev = 1, 1
    for i in range(n - 1):
        if m[i][i] == 0:
            swap = next((r for r in range(i + 1, n) if m[r][i] != 0), None)
            if swap is None:
                return 0
            m[i], m[swap] = m[swap], m[i]
            sign = -sign
        for r in range(i + 1, n):
            for c in range(i + 1, n):
                m[r][c] = (m[r][c] * m[i][i] - m[r][i] * m[i][c]) // prev
        prev = m[i][i]
    return sign * m[-1][-1] if n else 1


def _r_diagonal(vectors: np.ndarray) -> np.ndarray:
    a = np.asarray(vectors, dtype=np.float64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.shape[0] == 0:
        return np.zeros(0)
    if a.shape[0] > a.shape[1]:
        # more vectors than dimensions: always dependent
        return np.zeros(a.shape[0])
    r = np.linalg.qr(a.T, mode="r")
    return np.abs(np.diag(r))


def is_dependent(vectors) -> bool:
    diag = _r_diagonal(vectors)
    if diag.size == 0:
        return False
    top = diag.max()
    return top == 0 or diag.min() < DEPENDENCE_RTOL * top


def parallelepiped_volume(vectors) -> float:
    """k-dimensional volume of the parallelepiped spanned by the rows.

    Computed from a QR factorization; dependent tuples give exactly 0.
    """
    diag = _r_diagonal(vectors)
    if diag.size == 0:
        return 1.0
    if is_dependent(vectors):
        return 0.0
    return float(np.prod(diag))


def distance_to_span(y, basis) -> float:
    """Euclidean distance from ``y`` to the linear span of the rows of ``basis``.

    Uses orthogonal projection, so it is valid for any basis.  A
    ``DegenerateBasisWarning`` is issued when the basis is dependent and ``y``
    lies outside its span, since the volume-ratio form is then undefined.
    """
    y = np.asarray(y, dtype=np.float64)
    b = np.asarray(basis, dtype=np.float64)
    if b.ndim == 1:
        b = b.reshape(1, -1)
    if b.shape[0] == 0:
        return float(np.linalg.norm(y))
    coef, *_ = np.linalg.lstsq(b.T, y, rcond=None)
    dist = float(np.linalg.norm(y - b.T @ coef))
    if is_dependent(b) and dist > DEPENDENCE_RTOL * max(1.0, float(np.linalg.norm(y))):
        warnings.warn("basis is dependent; volume-ratio form undefined", DegenerateBasisWarning, stacklevel=2)
    return dist


def volume_ratio_distance(y, basis) -> float:
    """``vol(y, basis) / vol(basis)``; raises ``DegenerateBasis`` if vol(basis) = 0."""
    b = np.atleast_2d(np.asarray(basis, dtype=np.float64))
    base = parallelepiped_volume(b)
    if base == 0.0:
        raise DegenerateBasis("basis spans a lower-dimensional subspace")
    return parallelepiped_volume(np.vstack([np.asarray(y, dtype=np.float64), b])) / base


def chain_distances(ys, zs) -> np.ndarray:
    """Distances ``r_i = dist(y_i, span(z_1..z_m, y_1..y_{i-1}))``."""
    ys = np.atleast_2d(np.asarray(ys, dtype=np.float64))
    zs = np.atleast_2d(np.asarray(zs, dtype=np.float64))
    out = np.empty(len(ys))
    for i, y in enumerate(ys):
        out[i] = distance_to_span(y, np.vstack([zs, ys[:i]]))
    return out


def volume_chain_identity_check(ys, zs) -> float:
    """Absolute gap between ``vol(ys, zs)`` and ``vol(zs) * prod_i r_i``."""
    ys = np.atleast_2d(np.asarray(ys, dtype=np.float64))
    zs = np.atleast_2d(np.asarray(zs, dtype=np.float64))
    if is_dependent(zs):
        raise DegenerateBasis("zs must be linearly independent")
    lhs = parallelepiped_volume(np.vstack([ys[::-1], zs]))
    rhs = parallelepiped_volume(zs) * float(np.prod(chain_distances(ys, zs)))
    return abs(lhs - rhs)


def hadamard_scale(vectors) -> float:
    """Product of row norms, the natural upper bound for a volume."""
    a = np.atleast_2d(np.asarray(vectors, dtype=np.float64))
    return float(np.prod(np.linalg.norm(a, axis=1)))


def sphere_intersection_gram(x, centers) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    diff = x - np.atleast_2d(np.asarray(centers, dtype=np.float64))
    return diff @ diff.T


def gl_sphere_density(x, centers, radii_sq, tol: float = 1e-9) -> float:
    """Density of the Gelfand-Leray measure against surface measure.

    For the spheres ``|x - x_i|^2 = t_i`` the defining gradients are
    ``2(x - x_i)``, so the density at ``x`` is ``vol(2(x-x_1),...)^-1``.
    """
    x = np.asarray(x, dtype=np.float64)
    c = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    t = np.atleast_1d(np.asarray(radii_sq, dtype=np.float64))
    if len(t) != len(c):
        raise InvalidInput("one squared radius per center is required")
    resid = np.sum((x - c) ** 2, axis=1) - t
    if np.any(np.abs(resid) > tol * np.maximum(1.0, t)):
        raise InvalidInput(f"point is off the spheres (residuals {resid.tolist()})")
    grads = 2.0 * (x - c)
    vol = parallelepiped_volume(grads)
    if vol == 0.0:
        raise DegenerateBasis("point lies in the span of the centers")
    return 1.0 / vol


def gl_sphere_density_gram(x, centers) -> float:
    """Closed form ``2^-m det(T_X)^-1/2`` with ``(T_X)_ij = (x-x_i).(x-x_j)``."""
    t = sphere_intersection_gram(x, centers)
    det = float(np.linalg.det(t))
    if det <= 0:
        raise DegenerateBasis("sphere-intersection Gram matrix is singular")
    return 2.0 ** (-len(t)) * det ** -0.5
