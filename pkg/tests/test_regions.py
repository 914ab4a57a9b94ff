import json
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from simplexmax.errors import InvalidInput
from simplexmax.regions import (
    Membership,
    RegionSpec,
    ckq_polytope,
    cube_polytope,
    export_region,
    in_Ck,
    in_Ckq,
    in_tilde,
    lp_classify,
    minimal_dimension,
    partial_sum_bounds,
    q_of_m,
    theorem_predicate,
    tilde_region_polytope,
)


def test_q_of_m():
    assert q_of_m(2) == 2 and q_of_m(3) == F(3, 2)
    with pytest.raises(InvalidInput):
        q_of_m(1)


def test_partial_sum_bounds_q2():
    assert partial_sum_bounds(3, 2) == [F(1, 2), F(3, 4), F(1)]


def test_ck_examples():
    assert in_Ck([F(1, 2), 0]) == Membership.BOUNDARY
    assert in_Ck([F(1, 3)] * 3) == Membership.BOUNDARY
    assert in_Ck([0.2, 0.2]) == Membership.INTERIOR
    assert in_Ck([0.9, 0.2]) == Membership.EXTERIOR


def test_ckq_point_examples():
    assert in_Ckq([0.6, 0.6], F(3, 2)) == Membership.INTERIOR


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 5).flatmap(lambda k: st.lists(st.floats(0, 1), min_size=k, max_size=k)), st.sampled_from([2, 3, 4]))
def test_facet_path_agrees_with_prefix_sums(x, m):
    q = q_of_m(m)
    poly = ckq_polytope(len(x), q)
    code = {Membership.INTERIOR: 0, Membership.BOUNDARY: 1, Membership.EXTERIOR: 2}
    assert poly.classify_many(np.array([x]))[0] == code[in_Ckq(x, q)]


def test_polytope_vertices_satisfy_facets_exactly():
    for k, m in [(2, 2), (3, 3), (4, 2)]:
        p = ckq_polytope(k, q_of_m(m))
        assert all(p.contains_exact(v) for v in p.vertices)
        for v in p.vertices:
            assert in_Ckq([float(a) for a in v], q_of_m(m)) != Membership.EXTERIOR


def test_cube_inside_ckq():
    for k, m in [(2, 2), (3, 3)]:
        q = q_of_m(m)
        cube = cube_polytope(k, q)
        assert all(ckq_polytope(k, q).contains_exact(v) for v in cube.vertices)


def test_tilde_k3_contains_ckq_generators():
    q = q_of_m(2)
    poly = tilde_region_polytope(3, q)
    target = (F(1, 2), F(1, 4), F(1, 4))
    assert target in poly.generators["ckq"]
    assert poly.contains_exact(target)


def test_tilde_lp_and_facets_agree():
    rng = np.random.default_rng(0)
    for _ in range(200):
        x = rng.random(3) * 0.8
        a = in_tilde(x, 3, 2, method="lp")
        b = in_tilde(x, 3, 2, method="facets")
        assert a == b or Membership.BOUNDARY in (a, b)


def test_tilde_k2_region():
    assert in_tilde([0.2, 0.2], 2, 2) == Membership.INTERIOR
    assert in_tilde([0.99, 0.9], 2, 2) == Membership.EXTERIOR


def test_tilde_size_guard():
    with pytest.raises(InvalidInput):
        tilde_region_polytope(7, 2)


def test_region_spec_validation():
    with pytest.raises(InvalidInput):
        RegionSpec("hexagon", 2)
    with pytest.raises(InvalidInput):
        RegionSpec("ckq", 2, 1)
    with pytest.raises(InvalidInput):
        RegionSpec("ckq", 2, 2).classify([0.1])


def test_export_csv_and_json():
    csv = export_region(RegionSpec("tilde", 3, 2), "csv")
    rows = [ln.split(",") for ln in csv.splitlines()[1:]]
    ckq = {tuple(r[4:]) for r in rows if r[0] == "ckq"}
    for perm in [("1/2", "1/4", "1/4"), ("1/4", "1/2", "1/4"), ("1/4", "1/4", "1/2")]:
        assert perm in ckq
    doc = json.loads(export_region(RegionSpec("ckq", 2, 3, F(9, 11)), "json"))
    assert doc["q"] == "3/2" and doc["scale"] == "9/11"
    assert len(doc["defining_bounds"]) == 2
    with pytest.raises(InvalidInput):
        export_region(RegionSpec("ckq", 2, 2), "xml")


def test_predicate_examples():
    assert theorem_predicate("T1i", 9, 2, [8, 8], 4).claimed
    assert theorem_predicate("T0", 3, 2, [4, 4], 2).claimed
    res = theorem_predicate("T2ii", 10, 2, [3, 3], F(3, 2), 2)
    assert not res.claimed and any("2mk+3 = 11" in f for f in res.failures)


def test_predicate_boundary_not_claimed():
    d = 15
    s = F(d - 2, d)
    # (1/2, 1/4) is a vertex of C_2, so its scaled copy is a boundary point
    x = [s / 2, s / 4]
    res = theorem_predicate("T1ii", d, 2, [1 / a for a in x], 1 / sum(x))
    assert not res.claimed
    assert any("boundary" in f for f in res.failures)
    inner = [a * F(99, 100) for a in x]
    assert theorem_predicate("T1ii", d, 2, [1 / a for a in inner], 1 / sum(inner)).claimed


def test_predicate_rejects_bad_input():
    with pytest.raises(InvalidInput):
        theorem_predicate("T9", 5, 2, [2, 2], 1)
    with pytest.raises(InvalidInput):
        theorem_predicate("T0", 5, 2, [2], 1)
    with pytest.raises(InvalidInput):
        theorem_predicate("T0", 5, 2, [F(1, 2), 2], 1)


def test_minimal_dimensions():
    assert minimal_dimension("T2ii", 2, 2) == 11
    assert minimal_dimension("T2ii", 3, 3) == 21
    assert minimal_dimension("T1ii", 3) == 15
    for tid in ("T2ii", "T1ii"):
        d = minimal_dimension(tid, 2, 2)
        assert not any("d >=" in f for f in theorem_predicate(tid, d, 2, [100, 100], 50).failures)
        assert any("d >=" in f for f in theorem_predicate(tid, d - 1, 2, [100, 100], 50).failures)
