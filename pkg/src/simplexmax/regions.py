"""Exponent regions in [0,1]^k and the hypothesis predicates built on them.

Points are tuples of reciprocal exponents ``(1/p_1, .., 1/p_k)``.  The
regions are open, so every classification is three-way: interior,
boundary (within a tolerance) or exterior.

Polytopes carry exact rational vertices and facets.  Vertex and facet
enumeration run in floating point through qhull, then every candidate is
snapped to rationals by solving its tight constraints exactly and is kept
only if it verifies exactly.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, HalfspaceIntersection

from .errors import InvalidInput

DIRECT_EPS = 1e-12
LP_EPS = 1e-9
MAX_TILDE_K = 6


class Membership(str, Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


def q_of_m(m: int) -> Fraction:
    if int(m) != m or m < 2:
        raise InvalidInput(f"m must be an integer >= 2, got {m}")
    return Fraction(int(m), int(m) - 1)


def _check_q(q) -> Fraction:
    q = Fraction(q)
    if q <= 1 or q > 2:
        raise InvalidInput(f"q must lie in (1, 2], got {q}")
    m = q / (q - 1)
    if m.denominator != 1:
        raise InvalidInput(f"q must have the form m/(m-1), got {q}")
    return q


def partial_sum_bounds(k: int, q) -> list[Fraction]:
    """Bounds ``b_1..b_k`` on the sum of the ``j`` largest coordinates.

    ``b_j = q^-1 + .. + q^-j`` for ``j < k`` and ``b_k = b_{k-1} + q^-(k-1)``.
    """
    if k < 2:
        raise InvalidInput("regions are defined for k >= 2")
    q = _check_q(q)
    out, acc = [], Fraction(0)
    for j in range(1, k):
        acc += q**-j
        out.append(acc)
    out.append(acc + q ** -(k - 1))
    return out


def _as_point(x, k: int | None = None) -> list:
    pts = [a if isinstance(a, Fraction) else (Fraction(a) if isinstance(a, int) else float(a)) for a in x]
    if k is not None and len(pts) != k:
        raise InvalidInput(f"point has {len(pts)} coordinates, expected {k}")
    if any(a < 0 or a > 1 for a in pts):
        raise InvalidInput("coordinates must lie in [0, 1]")
    return pts


def _classify_gaps(gaps, eps) -> Membership:
    if any(g > eps for g in gaps):
        return Membership.EXTERIOR
    if any(g >= -eps for g in gaps):
        return Membership.BOUNDARY
    return Membership.INTERIOR


def in_Ckq(x, q, scale=1, eps: float = DIRECT_EPS) -> Membership:
    """Classify ``x`` against ``scale * C_{k,q}`` by sorted prefix sums."""
    pts = _as_point(x)
    bounds = partial_sum_bounds(len(pts), q)
    scale = Fraction(scale) if not isinstance(scale, float) else scale
    prefix = list(itertools.accumulate(sorted(pts, reverse=True)))
    return _classify_gaps([s - scale * b for s, b in zip(prefix, bounds)], eps)


def in_Ck(x, scale=1, eps: float = DIRECT_EPS) -> Membership:
    """Classify ``x`` against ``scale * C_k``: partial sums below ``1 - 2^-j``, total below 1."""
    return in_Ckq(x, 2, scale, eps)


# ---------------------------------------------------------------- exact helpers


def _solve_exact(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    n = len(a)
    m = [row[:] + [rhs] for row, rhs in zip(a, b)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c] / m[c][c]
                m[r] = [u - f * v for u, v in zip(m[r], m[c])]
    return [m[i][n] / m[i][i] for i in range(n)]


def _independent_rows(rows: np.ndarray, k: int) -> list[int] | None:
    chosen: list[int] = []
    for i in range(len(rows)):
        trial = chosen + [i]
        if np.linalg.matrix_rank(rows[trial], tol=1e-9) == len(trial):
            chosen = trial
            if len(chosen) == k:
                return chosen
    return None


def _nullspace_exact(rows: list[list[Fraction]], n: int) -> list[Fraction] | None:
    """A nonzero vector orthogonal to ``rows`` when they have rank ``n - 1``."""
    m = [r[:] for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        m[r] = [v / m[r][c] for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [u - f * v for u, v in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        return None
    vec = [Fraction(0)] * n
    vec[free[0]] = Fraction(1)
    for i, c in enumerate(pivots):
        vec[c] = -m[i][free[0]]
    return vec


def _primitive(a: list[Fraction], b: Fraction) -> tuple[tuple[Fraction, ...], Fraction]:
    den = math.lcm(*(v.denominator for v in a + [b]))
    ints = [int(v * den) for v in a + [b]]
    g = math.gcd(*ints) or 1
    ints = [v // g for v in ints]
    return tuple(Fraction(v) for v in ints[:-1]), Fraction(ints[-1])


# ---------------------------------------------------------------- polytopes


@dataclass
class Polytope:
    """A closed polytope in [0,1]^k with exact vertices and facets ``a . x <= b``."""

    k: int
    vertices: list[tuple[Fraction, ...]]
    facets: list[tuple[tuple[Fraction, ...], Fraction]]
    generators: dict[str, list[tuple[Fraction, ...]]] = field(default_factory=dict)

    def vertex_array(self) -> np.ndarray:
        return np.array([[float(v) for v in p] for p in self.vertices])

    def facet_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        a = np.array([[float(v) for v in f[0]] for f in self.facets])
        b = np.array([float(f[1]) for f in self.facets])
        return a, b

    def has_vertex(self, p) -> bool:
        p = tuple(Fraction(v) for v in p)
        return p in set(self.vertices)

    def contains_exact(self, p) -> bool:
        p = [Fraction(v) for v in p]
        return all(sum(ai * xi for ai, xi in zip(a, p)) <= b for a, b in self.facets)

    def classify(self, x, scale=1, eps: float = DIRECT_EPS) -> Membership:
        """Open-region verdict from the facets that miss the origin.

        Facets through the origin (the coordinate walls) are closed sides of
        the region and only decide exterior points.
        """
        pts = _as_point(x, self.k)
        gaps = []
        for a, b in self.facets:
            lhs = sum(ai * xi for ai, xi in zip(a, pts))
            if b == 0:
                if lhs > eps:
                    return Membership.EXTERIOR
                continue
            gaps.append(lhs - scale * b)
        return _classify_gaps(gaps, eps)

    def classify_many(self, xs: np.ndarray, scale: float = 1.0, eps: float = DIRECT_EPS) -> np.ndarray:
        """Vectorized :meth:`classify`; returns 0 interior, 1 boundary, 2 exterior."""
        a, b = self.facet_arrays()
        lhs = np.asarray(xs, dtype=np.float64) @ a.T
        wall = b == 0
        upper = ~wall
        gaps = lhs[:, upper] - scale * b[upper]
        out = np.where((gaps > eps).any(axis=1), 2, np.where((gaps >= -eps).any(axis=1), 1, 0))
        if wall.any():
            out = np.where((lhs[:, wall] > eps).any(axis=1), 2, out)
        return out

    def scaled(self, s) -> "Polytope":
        s = Fraction(s)
        if not 0 < s <= 1:
            raise InvalidInput("scale factor must lie in (0, 1]")
        verts = [tuple(s * v for v in p) for p in self.vertices]
        facets = [(a, s * b) for a, b in self.facets]
        gens = {name: [tuple(s * v for v in p) for p in pts] for name, pts in self.generators.items()}
        return Polytope(self.k, verts, facets, gens)


def _chebyshev_center(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(a, axis=1)
    k = a.shape[1]
    res = linprog(np.r_[np.zeros(k), -1.0], A_ub=np.c_[a, norms], b_ub=b, bounds=[(None, None)] * k + [(0, None)], method="highs")
    if res.status != 0 or res.x[-1] <= 1e-9:
        raise InvalidInput("inequality system has empty interior")
    return res.x[:k]


def vertices_from_halfspaces(facets: Sequence[tuple[Sequence[Fraction], Fraction]], k: int) -> list[tuple[Fraction, ...]]:
    """Exact vertices of ``{x : a . x <= b}`` (bounded, full-dimensional)."""
    fa = [[Fraction(v) for v in a] for a, _ in facets]
    fb = [Fraction(b) for _, b in facets]
    a = np.array([[float(v) for v in row] for row in fa])
    b = np.array([float(v) for v in fb])
    hs = HalfspaceIntersection(np.c_[a, -b], _chebyshev_center(a, b))
    found: set[tuple[Fraction, ...]] = set()
    for p in hs.intersections:
        tight = np.nonzero(np.abs(a @ p - b) < 1e-7)[0]
        rows = _independent_rows(a[tight], k)
        if rows is None:
            continue
        sel = [int(tight[i]) for i in rows]
        v = _solve_exact([fa[i] for i in sel], [fb[i] for i in sel])
        if v is None:
            continue
        if all(sum(x * y for x, y in zip(row, v)) <= rhs for row, rhs in zip(fa, fb)):
            found.add(tuple(v))
    return sorted(found)


def facets_from_vertices(points: Sequence[Sequence[Fraction]], k: int) -> tuple[list[tuple[Fraction, ...]], list[tuple[tuple[Fraction, ...], Fraction]]]:
    """Exact hull of a rational point set: (extreme points, facets ``a . x <= b``)."""
    pts = sorted(set(tuple(Fraction(v) for v in p) for p in points))
    arr = np.array([[float(v) for v in p] for p in pts])
    hull = ConvexHull(arr)
    # qhull triangulates facets (some pieces may be degenerate); try the
    # pieces of each distinct hyperplane until one gives an exact facet
    _, group = np.unique(np.round(hull.equations, 9) + 0.0, axis=0, return_inverse=True)
    facets: set[tuple[tuple[Fraction, ...], Fraction]] = set()
    for g in range(group.max() + 1):
        for simplex in hull.simplices[np.ravel(group) == g]:
            base = pts[simplex[0]]
            rows = [[pts[i][c] - base[c] for c in range(k)] for i in simplex[1:]]
            n = _nullspace_exact(rows, k)
            if n is None:
                continue
            b = sum(x * y for x, y in zip(n, base))
            sides = [sum(x * y for x, y in zip(n, p)) - b for p in pts]
            if all(s <= 0 for s in sides):
                facets.add(_primitive(n, b))
                break
            if all(s >= 0 for s in sides):
                facets.add(_primitive([-x for x in n], -b))
                break
    facet_list = sorted(facets)
    extreme = []
    for p in pts:
        tight = [a for a, b in facet_list if sum(x * y for x, y in zip(a, p)) == b]
        if tight and np.linalg.matrix_rank(np.array([[float(v) for v in a] for a in tight]), tol=1e-9) == k:
            extreme.append(p)
    return extreme, facet_list


def ckq_halfspaces(k: int, q) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    """Closed ``C_{k,q}``: one subset-sum inequality per nonempty subset plus ``x >= 0``."""
    bounds = partial_sum_bounds(k, q)
    out = []
    for size in range(1, k + 1):
        for sub in itertools.combinations(range(k), size):
            out.append((tuple(Fraction(1 if i in sub else 0) for i in range(k)), bounds[size - 1]))
    for i in range(k):
        out.append((tuple(Fraction(-1 if j == i else 0) for j in range(k)), Fraction(0)))
    return out


@lru_cache(maxsize=32)
def ckq_polytope(k: int, q) -> Polytope:
    """Closure of ``C_{k,q}`` with vertices from its defining inequalities."""
    q = _check_q(q)
    verts = vertices_from_halfspaces(ckq_halfspaces(k, q), k)
    extreme, facets = facets_from_vertices(verts, k)
    return Polytope(k, extreme, facets, {"ckq": extreme})


def _lift(facets, k: int) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    """Inequalities of ``{x : pi_j(x) in P for every j}``, where ``pi_j`` drops coordinate ``j``."""
    out = set()
    for a, b in facets:
        for j in range(k):
            out.add((tuple(a[:j]) + (Fraction(0),) + tuple(a[j:]), b))
    for i in range(k):
        unit = tuple(Fraction(1 if c == i else 0) for c in range(k))
        out.add((unit, Fraction(1)))
        out.add((tuple(-v for v in unit), Fraction(0)))
    return sorted(out)


@lru_cache(maxsize=32)
def tilde_region_polytope(k: int, q) -> Polytope:
    """Closed hull of the tilde region.

    ``k = 2``: hull of the unit triangle and ``C_{2,q}``.  ``k >= 3``: hull of
    the points whose every coordinate projection lies in the ``k - 1`` region,
    together with ``C_{k,q}``.  ``generators`` keeps both vertex sets.
    """
    q = _check_q(q)
    if k < 2:
        raise InvalidInput("k must be at least 2")
    if k > MAX_TILDE_K:
        raise InvalidInput(f"k={k} exceeds the vertex enumeration guard of {MAX_TILDE_K}")
    ckq = ckq_polytope(k, q)
    if k == 2:
        lower = [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))]
        name = "triangle"
    else:
        prev = tilde_region_polytope(k - 1, q)
        lower = vertices_from_halfspaces(_lift(prev.facets, k), k)
        name = "projection"
    extreme, facets = facets_from_vertices(list(lower) + list(ckq.vertices), k)
    return Polytope(k, extreme, facets, {name: list(lower), "ckq": list(ckq.vertices)})


def cube_polytope(k: int, q) -> Polytope:
    """The cube ``q^-(k-1) [0,1]^k`` inscribed in ``C_{k,q}``."""
    side = _check_q(q) ** -(k - 1)
    verts = [tuple(side * v for v in bits) for bits in itertools.product((Fraction(0), Fraction(1)), repeat=k)]
    extreme, facets = facets_from_vertices(verts, k)
    return Polytope(k, extreme, facets, {"cube": extreme})


def lp_gauge(x, vertices: np.ndarray) -> float:
    """``min t`` with ``x`` in ``t * hull(vertices)``; ``inf`` when no such ``t`` exists."""
    v = np.asarray(vertices, dtype=np.float64)
    res = linprog(np.ones(len(v)), A_eq=v.T, b_eq=np.asarray(x, dtype=np.float64), bounds=(0, None), method="highs")
    return float(res.fun) if res.status == 0 else math.inf


def lp_classify(x, poly: Polytope, scale: float = 1.0, eps: float = LP_EPS) -> Membership:
    pts = _as_point(x, poly.k)
    g = lp_gauge([float(v) for v in pts], poly.vertex_array()) / float(scale)
    if g > 1 + eps:
        return Membership.EXTERIOR
    if g >= 1 - eps:
        return Membership.BOUNDARY
    return Membership.INTERIOR


def in_tilde(x, k: int, q, scale=1, method: str = "lp") -> Membership:
    """Classify ``x`` against ``scale`` times the tilde region, by LP on the vertices or by facets."""
    poly = tilde_region_polytope(k, Fraction(q))
    if method == "lp":
        return lp_classify(x, poly, float(scale))
    if method == "facets":
        return poly.classify(x, scale, LP_EPS)
    raise InvalidInput(f"unknown membership method {method!r}")


# ---------------------------------------------------------------- regions as data


KINDS = ("ck", "ckq", "tilde", "cube")


@dataclass(frozen=True)
class RegionSpec:
    kind: str
    k: int
    m: int = 2
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInput(f"unknown region kind {self.kind!r}; choose from {', '.join(KINDS)}")
        if self.k < 2:
            raise InvalidInput("k must be at least 2")
        q_of_m(self.m)
        s = Fraction(self.scale)
        if not 0 < s <= 1:
            raise InvalidInput("scale must lie in (0, 1]")
        object.__setattr__(self, "scale", s)

    @property
    def q(self) -> Fraction:
        return Fraction(2) if self.kind == "ck" else q_of_m(self.m)

    def polytope(self) -> Polytope:
        if self.kind in ("ck", "ckq"):
            p = ckq_polytope(self.k, self.q)
        elif self.kind == "tilde":
            p = tilde_region_polytope(self.k, self.q)
        else:
            p = cube_polytope(self.k, self.q)
        return p.scaled(self.scale) if self.scale != 1 else p

    def classify(self, x) -> Membership:
        if len(x) != self.k:
            raise InvalidInput(f"point has {len(x)} coordinates, expected {self.k}")
        if self.kind in ("ck", "ckq"):
            return in_Ckq(x, self.q, self.scale)
        if self.kind == "tilde":
            return in_tilde(x, self.k, self.q, self.scale)
        return self.polytope().classify(x)


def _fmt(v: Fraction) -> str:
    return str(v)


def export_region(spec: RegionSpec, fmt: str) -> str:
    """CSV (one vertex per row, tagged by vertex set) or JSON (vertices, generators, inequalities)."""
    poly = spec.polytope()
    sets = [("hull", poly.vertices)] + [(name, pts) for name, pts in sorted(poly.generators.items()) if pts != poly.vertices]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["set"] + [f"x{i + 1}" for i in range(spec.k)] + [f"x{i + 1}_exact" for i in range(spec.k)])
        for name, pts in sets:
            for p in pts:
                w.writerow([name] + [repr(float(v)) for v in p] + [_fmt(v) for v in p])
        return buf.getvalue()
    if fmt == "json":
        doc = {
            "kind": spec.kind,
            "k": spec.k,
            "m": spec.m,
            "q": _fmt(spec.q),
            "scale": _fmt(spec.scale),
            "vertices": [[_fmt(v) for v in p] for p in poly.vertices],
            "generators": {name: [[_fmt(v) for v in p] for p in pts] for name, pts in sets[1:]},
            "inequalities": [
                {"a": [_fmt(v) for v in a], "b": _fmt(b), "strict": b != 0} for a, b in poly.facets
            ],
        }
        if spec.kind in ("ck", "ckq"):
            doc["defining_bounds"] = [_fmt(spec.scale * b) for b in partial_sum_bounds(spec.k, spec.q)]
        return json.dumps(doc, indent=2) + "\n"
    raise InvalidInput(f"unsupported export format {fmt!r}; use csv or json")


# ---------------------------------------------------------------- theorem hypotheses


THEOREMS = ("T0", "T1i", "T1ii", "T2i", "T2ii", "T3", "C3", "C3'", "T3'")


@dataclass
class PredicateResult:
    claimed: bool
    failures: list[str]

    @property
    def status(self) -> str:
        return "claimed-bounded" if self.claimed else "not-claimed"


def _recip(p):
    if isinstance(p, str) and p.lower() in ("inf", "infinity", "oo"):
        return Fraction(0)
    if isinstance(p, float) and math.isinf(p):
        return Fraction(0)
    if isinstance(p, (int, Fraction)):
        return Fraction(1) / Fraction(p)
    return 1.0 / float(p)


def _close(a, b) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(float(a) - float(b)) <= 1e-12


def _gt(a, b) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a > b
    return float(a) > float(b) + 1e-15


def theorem_predicate(tid: str, d: int, k: int, p: Sequence, r, m: int = 2) -> PredicateResult:
    """Evaluate the stated hypotheses of a boundedness result.

    Exponents may be ints, Fractions, floats or ``inf``.  Region conditions
    use the open regions: a boundary point is not claimed.
    """
    if tid not in THEOREMS:
        raise InvalidInput(f"unknown theorem id {tid!r}; choose from {', '.join(THEOREMS)}")
    if len(p) != k:
        raise InvalidInput(f"{len(p)} exponents given for k={k}")
    recips = [_recip(x) for x in p]
    rr = _recip(r)
    if any(x < 0 or x > 1 for x in recips) or rr < 0 or rr > 1:
        raise InvalidInput("exponents must lie in [1, inf]")
    exact = all(isinstance(x, Fraction) for x in recips + [rr])
    one = Fraction(1) if exact else 1.0
    dd = Fraction(d) if exact else float(d)
    total = sum(recips, Fraction(0) if exact else 0.0)
    q = q_of_m(m)
    qq = q if exact else float(q)
    fails: list[str] = []

    def need(cond: bool, text: str):
        if not cond:
            fails.append(text)

    def sum_equal():
        need(_close(rr, total), "1/r = sum 1/p_j fails")

    def r_above(bound, text):
        # r > bound  <=>  1/r < 1/bound
        need(_gt(one / bound, rr), f"r > {text} fails")

    def p_above(bound, text):
        need(all(_gt(one / bound, x) for x in recips), f"p_j > {text} fails")

    def region(kind: str, scale, pts=None):
        pts = recips if pts is None else pts
        s = scale
        if kind == "ck":
            v = in_Ckq(pts, 2, s)
        elif kind == "ckq":
            v = in_Ckq(pts, q, s)
        else:
            v = tilde_region_polytope(len(pts), q).classify(pts, s, LP_EPS)
        return v

    disc = (dd - 2) / dd
    cont = (dd - 1) / dd
    if tid == "T0":
        need(d >= k + 1, f"d >= k+1 = {k + 1} fails")
        sum_equal()
        need(_gt(cont, total), "sum 1/p_j < (d-1)/d fails")
    elif tid == "T1i":
        need(d >= 4 * k + 1, f"d >= 4k+1 = {4 * k + 1} fails")
        r_above(2 * dd / (dd - 2), "2d/(d-2)")
        sum_equal()
    elif tid == "T1ii":
        need(d >= 4 * k + 3, f"d >= 4k+3 = {4 * k + 3} fails")
        r_above(dd / (dd - 2), "d/(d-2)")
        p_above(2 * dd / (dd - 2), "2d/(d-2)")
        v = region("ck", disc)
        need(v == Membership.INTERIOR, f"reciprocals in (d-2)/d * C_k fails ({v.value})")
        sum_equal()
    elif tid == "T2i":
        need(d >= 2 * m * (k - 1) + 5, f"d >= 2m(k-1)+5 = {2 * m * (k - 1) + 5} fails")
        r_above(qq * dd / (dd - 2), "q d/(d-2)")
        need(rr <= total or _close(rr, total), "1/r <= sum 1/p_j fails")
    elif tid == "T2ii":
        need(d >= 2 * m * k + 3, f"d >= 2mk+3 = {2 * m * k + 3} fails")
        btot = partial_sum_bounds(k, q)[-1]
        r_above((1 / (btot if exact else float(btot))) * dd / (dd - 2), "(sum of bounds)^-1 d/(d-2)")
        p_above(qq * dd / (dd - 2), "q d/(d-2)")
        v = region("ckq", disc)
        need(v == Membership.INTERIOR, f"reciprocals in (d-2)/d * C_kq fails ({v.value})")
        sum_equal()
    elif tid == "T3":
        need(k == 2, "stated for k = 2 only")
        need(d >= 2 * m, f"d >= 2m = {2 * m} fails")
        r_above(qq / 2 * dd / (dd - 1), "q/2 d/(d-1)")
        p_above(qq * dd / (dd - 1), "q d/(d-1)")
        sum_equal()
    elif tid == "C3":
        need(k == 2, "stated for k = 2 only")
        need(d >= 2 * m, f"d >= 2m = {2 * m} fails")
        r_above(qq / 2 * dd / (dd - 1), "q/2 d/(d-1)")
        if k == 2:
            v = region("tilde", cont)
            need(v == Membership.INTERIOR, f"reciprocals in (d-1)/d * tilde C_2q fails ({v.value})")
        sum_equal()
    elif tid == "C3'":
        need(k == 3, "stated for k = 3 only")
        need(d >= 2 * m, f"d >= 2m = {2 * m} fails")
        r_above(qq / 2 * dd / (dd - 1), "q/2 d/(d-1)")
        if k == 3:
            for i, j in ((0, 1), (1, 2), (0, 2)):
                v = region("tilde", cont, [recips[i], recips[j]])
                need(v == Membership.INTERIOR, f"pair ({i + 1},{j + 1}) in (d-1)/d * tilde C_2q fails ({v.value})")
        sum_equal()
    elif tid == "T3'":
        need(d >= m * k, f"d >= mk = {m * k} fails")
        btot = partial_sum_bounds(k, q)[-1]
        r_above((1 / (btot if exact else float(btot))) * dd / (dd - 1), "(sum of bounds)^-1 d/(d-1)")
        v = region("tilde", cont)
        need(v == Membership.INTERIOR, f"reciprocals in (d-1)/d * tilde C_kq fails ({v.value})")
        sum_equal()
    return PredicateResult(not fails, fails)


def minimal_dimension(tid: str, k: int, m: int = 2) -> int:
    """Smallest ``d`` meeting the dimension hypothesis of ``tid``."""
    table = {
        "T0": k + 1,
        "T1i": 4 * k + 1,
        "T1ii": 4 * k + 3,
        "T2i": 2 * m * (k - 1) + 5,
        "T2ii": 2 * m * k + 3,
        "T3": 2 * m,
        "C3": 2 * m,
        "C3'": 2 * m,
        "T3'": m * k,
    }
    if tid not in table:
        raise InvalidInput(f"unknown theorem id {tid!r}")
    return table[tid]
