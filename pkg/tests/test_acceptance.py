"""Acceptance checks AC1-AC12, one pass/fail line each.

Run under pytest (lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""

import itertools
import time
from fractions import Fraction as F

import numpy as np
import pytest

from simplexmax.campaigns import (
    brute_force_count,
    run_region_crosscheck,
    run_second_moment_campaign,
    run_surrogate_campaign,
)
from simplexmax.cli import main
from simplexmax.counterexample import CounterexampleFamily, divergence_report, family_norms
from simplexmax.enumeration import count_simplex_copies, representation_numbers, scaling_band_report
from simplexmax.geometry import (
    exact_det,
    gl_sphere_density,
    gl_sphere_density_gram,
    gram_of_simplex,
    hadamard_scale,
    is_dependent,
    parallelepiped_volume,
    volume_chain_identity_check,
)
from simplexmax.montecarlo import mc_cs_check, pair_weight_identity_gap, sphere_witness
from simplexmax.regions import (
    Membership,
    cube_polytope,
    in_Ck,
    in_Ckq,
    q_of_m,
    tilde_region_polytope,
)

RESULTS: dict[str, str] = {}


def record(key: str, ok: bool, detail: str) -> None:
    RESULTS[key] = f"{key} {'PASS' if ok else 'FAIL'}: {detail}"


def test_ac1_oracle_equivalence():
    t0 = time.perf_counter()
    cases = [(d, [[1]], lam) for d in range(2, 6) for lam in range(1, 5)]
    for t in ([[1, 0], [0, 1]], [[2, 1], [1, 2]]):
        cases += [(d, t, lam) for d in range(3, 6) for lam in range(1, 5)]
    bad = []
    for d, t, lam in cases:
        a, b = count_simplex_copies(t, lam, d), brute_force_count(t, lam, d)
        if a != b:
            bad.append((d, t, lam, a, b))
    anchors = (
        count_simplex_copies([[1]], 1, 5),
        count_simplex_copies([[1]], 4, 5),
        count_simplex_copies([[1, 0], [0, 1]], 1, 3),
    )
    dt = time.perf_counter() - t0
    ok = not bad and anchors == (10, 90, 24) and dt < 30
    record("AC1", ok, f"{len(cases)} cases, mismatches={len(bad)}, anchors={anchors}, {dt:.1f}s")
    assert ok, bad


def test_ac2_single_edge_equals_sphere_count():
    t0 = time.perf_counter()
    bad = []
    for d in range(4, 8):
        r = representation_numbers(d, 25)
        bad += [(d, n) for n in range(1, 26) if count_simplex_copies([[1]], n, d) != r[n]]
    dt = time.perf_counter() - t0
    ok = not bad and dt < 60
    record("AC2", ok, f"d=4..7, lambda^2=1..25, mismatches={len(bad)}, {dt:.1f}s")
    assert ok, bad


def test_ac3_gram_determinant_is_squared_volume():
    rng = np.random.default_rng(3)
    worst, n = 0.0, 0
    while n < 1000:
        k = int(rng.integers(1, 5))
        d = int(rng.integers(k, 11))
        v = rng.integers(-5, 6, size=(k, d))
        if is_dependent(v):
            continue
        det = exact_det(gram_of_simplex(v).astype(np.int64))
        vol = parallelepiped_volume(v)
        worst = max(worst, abs(det - vol * vol) / det)
        n += 1
    ok = worst <= 1e-9
    record("AC3", ok, f"1000 simplices, k<=4, d<=10, max rel gap={worst:.2e}")
    assert ok


def test_ac4_surrogate_inequalities():
    t0 = time.perf_counter()
    rep = run_surrogate_campaign({"dims": [3, 5], "cases": 500})
    dt = time.perf_counter() - t0
    cases = sum(c.measured.get("cases", 0) for c in rep.cases)
    const = [c for c in rep.cases if c.key.endswith("constants")]
    equality = all(c.measured["equality"] for c in const) and len(const) == 2
    worst = max(v for c in rep.cases for v in c.measured.get("max_rel_violation", {}).values())
    bad = sum(c.status == "fail" for c in rep.cases)
    ok = not rep.failed and equality and dt < 300
    record("AC4", ok, f"{cases} seeded cases (d=3,5; m=2,3,4), failing blocks={bad}, max violation/scale={worst:.1e}, constant equality={equality}, {dt:.0f}s")
    assert ok


def _bump(c, w):
    return lambda p: np.exp(-w * ((np.asarray(p) - c) ** 2).sum(axis=-1))


def test_ac5_empirical_cauchy_schwarz():
    worst = -np.inf
    for d in (3, 4):
        for trial in range(100):
            rng = np.random.default_rng([d, trial])
            simplex = rng.standard_normal((2, d))
            fs = [_bump(rng.standard_normal(d), rng.uniform(0.2, 2.0)) for _ in range(2)]
            chk = mc_cs_check(fs, simplex, float(rng.uniform(0.5, 2.0)), rng.standard_normal(d), 2000, seed=trial)
            worst = max(worst, chk.violation / chk.scale)
    ok = worst <= 1e-12
    record("AC5", ok, f"200 trials, d=3,4, max violation/scale={worst:.2e}")
    assert ok


def test_ac6_scaling_band():
    t0 = time.perf_counter()
    rep = scaling_band_report([[1]], 5, [n * n for n in range(1, 9)])
    dt = time.perf_counter() - t0
    band = rep["band_factor"]
    ok = band <= 10 and dt < 60
    ratios = ", ".join(f"{r.ratio:.3f}" for r in rep["rows"])
    record("AC6", ok, f"r_5(n)/n^1.5 = [{ratios}], band factor={band:.2f}, {dt:.1f}s")
    assert ok


@pytest.mark.slow
def test_ac7_second_moment_band():
    t0 = time.perf_counter()
    rep = run_second_moment_campaign({"dims": [11], "lambda_sq": [1, 2, 3, 4], "band": 2.0}, threads=4)
    dt = time.perf_counter() - t0
    case = rep.cases[0]
    m = case.measured
    ok = case.status == "pass" and dt < 900
    ratios = m.get("ratios", [])
    record(
        "AC7",
        ok,
        f"sum W^2 = {m.get('second_moments')}, ratios/lambda^28 = {ratios}, forward growth={m.get('forward_growth')}, "
        f"max/min={m.get('band_factor')}, {dt:.0f}s",
    )
    assert ok, m


def test_ac8_region_fidelity():
    rng = np.random.default_rng(8)
    checks = {}
    checks["C_k boundary points"] = in_Ck([F(1, 2), 0]) == Membership.BOUNDARY and all(
        in_Ck([F(1, k)] * k) == Membership.BOUNDARY for k in range(2, 7)
    )
    pts = [rng.random(int(rng.integers(2, 6))) for _ in range(10_000)]
    checks["C_k2 == C_k"] = all(in_Ckq(x, 2) == in_Ck(x) for x in pts)
    cube_ok = True
    for k, m in [(2, 2), (3, 2), (2, 3), (3, 3), (4, 4)]:
        q = q_of_m(m)
        side = float(q ** -(k - 1))
        xs = rng.random((2000, k)) * side
        xs = xs[(xs > 0).all(axis=1)]
        cube_ok &= all(in_Ckq(x, q) == Membership.INTERIOR for x in xs)
        cube_ok &= all(in_Ckq([float(a) for a in v], q) != Membership.EXTERIOR for v in cube_polytope(k, q).vertices)
    checks["cube inside C_kq"] = cube_ok
    tilde_ok = True
    for m in (2, 3, 4):
        q = q_of_m(m)
        poly = tilde_region_polytope(3, q)
        for v in set(itertools.permutations((1 / q, q**-2, q**-2))):
            tilde_ok &= poly.contains_exact(v)
    checks["tilde C_3q contains (1/q,1/q^2,1/q^2) perms"] = tilde_ok
    ok = all(checks.values())
    record("AC8", ok, "; ".join(f"{k}={'ok' if v else 'FAILED'}" for k, v in checks.items()))
    assert ok, checks


def test_ac9_theorem_predicate_consistency():
    t0 = time.perf_counter()
    rep = run_region_crosscheck(
        {"theorems": ["T2ii", "T1ii"], "ks": [2, 3], "ms": [2, 3], "samples": 100_000, "block": 25_000}
    )
    dt = time.perf_counter() - t0
    bad = sum(c.measured.get("inconsistencies", 0) + c.measured.get("mismatches", 0) for c in rep.cases)
    tuples = sum(c.input.get("tuples", 0) for c in rep.cases)
    combos = sorted({(c.input["theorem"], c.input["k"], c.input["m"]) for c in rep.cases})
    ok = bad == 0 and not rep.failed
    record("AC9", ok, f"{tuples} random tuples over {len(combos)} combos, inconsistencies={bad}, {dt:.0f}s")
    assert ok


@pytest.mark.slow
def test_ac10_counterexample_trend():
    t0 = time.perf_counter()
    fam = CounterexampleFamily(7, 2, [[1, 0], [0, 1]], ["7/5", "inf"])
    rep = divergence_report(fam, j_max=3, budget=10**12)
    norms = family_norms(fam)
    dt = time.perf_counter() - t0
    blocks = rep.blocks
    positive = all(b.normalized > 0 for b in blocks)
    increasing = all(a.partial_sum < b.partial_sum for a, b in zip(blocks, blocks[1:]))
    finite = all(np.isfinite(x) for x in norms)
    ok = len(blocks) == 3 and positive and increasing and finite and dt < 1200
    sums = [b.shell_sum for b in blocks]
    record(
        "AC10",
        ok,
        f"shell sums={sums}, normalized positive={positive}, partial sums increasing={increasing}, "
        f"input norms={[round(float(x), 4) for x in norms]}, {dt:.0f}s",
    )
    assert ok


def test_ac11_geometry_identities():
    rng = np.random.default_rng(11)
    chain = pair = dens = 0.0
    for _ in range(1000):
        d = int(rng.integers(4, 9))
        m = int(rng.integers(1, d - 2))
        zs = rng.standard_normal((m, d))
        ys = rng.standard_normal((int(rng.integers(1, d - m + 1)), d))
        chain = max(chain, volume_chain_identity_check(ys, zs) / hadamard_scale(np.vstack([ys, zs])))

        y2, y2p = rng.standard_normal(d), rng.standard_normal(d)
        t12 = float(rng.uniform(-1, 1))
        b = np.vstack([y2, y2p])
        foot = np.linalg.solve(b @ b.T, [t12, t12]) @ b
        t11 = float(foot @ foot + rng.uniform(1, 50))  # the three spheres meet
        y1 = sphere_witness(y2, y2p, t11, t12, seed=int(rng.integers(1 << 30)))
        pair = max(pair, pair_weight_identity_gap(y1, y2, y2p) / np.linalg.norm(y1))

        x = rng.standard_normal(d)
        c = rng.standard_normal((m, d))
        t = ((x - c) ** 2).sum(axis=1)
        a, b = gl_sphere_density(x, c, t), gl_sphere_density_gram(x, c)
        dens = max(dens, abs(a - b) / b)
    ok = max(chain, pair, dens) < 1e-9
    record("AC11", ok, f"1000 configs: chain gap={chain:.1e}, pair-weight gap={pair:.1e}, density rel gap={dens:.1e}")
    assert ok


def _run_cli(argv, out_path, capsys=None):
    code = main([*argv, "--output", str(out_path), "--seed", "7", "--threads", "2", "-q"])
    return code, out_path.read_bytes()


def test_ac12_cli_determinism(tmp_path):
    delta = tmp_path / "delta.txt"
    delta.write_text("3 1\n0 0 0 1.0\n")
    invocations = {
        "count": ["count", "--dim", "5", "--gram", "1 0; 0 1", "--lambda-sq", "4"],
        "maximal": ["maximal", "--input", str(delta), "--input", "const:1", "--gram", "1 0; 0 1", "--lambda-sq", "1,2"],
        "region": ["region", "--kind", "tilde", "--k", "3", "--m", "2", "--export", "json"],
        "verify": ["verify", "--smoke"],
        "counterexample": ["counterexample", "--d", "7", "--k", "2", "--p", "7/5,inf", "--j-max", "2"],
    }
    same = {}
    for name, argv in invocations.items():
        runs = [_run_cli(argv, tmp_path / f"{name}{i}.out") for i in range(2)]
        same[name] = runs[0] == runs[1] and runs[0][0] == 0 and len(runs[0][1]) > 0
    ok = all(same.values())
    record("AC12", ok, ", ".join(f"{k}={'identical' if v else 'DIFFERENT'}" for k, v in same.items()))
    assert ok, same


if __name__ == "__main__":
    import sys
    import tempfile
    from pathlib import Path

    failed = 0
    for name, fn in sorted(((n, f) for n, f in globals().items() if n.startswith("test_ac")), key=lambda p: int(p[0].split("_")[1][2:])):
        try:
            if "tmp_path" in fn.__code__.co_varnames[: fn.__code__.co_argcount]:
                with tempfile.TemporaryDirectory() as tmp:
                    fn(Path(tmp))
            else:
                fn()
        except AssertionError:
            failed += 1
        except Exception as exc:  # report and continue with the next criterion
            failed += 1
            key = "AC" + name.split("_")[1][2:]
            RESULTS.setdefault(key, f"{key} FAIL: {type(exc).__name__}: {exc}")
        key = "AC" + name.split("_")[1][2:]
        print(RESULTS.get(key, f"{key} FAIL: no result recorded"), flush=True)
    sys.exit(1 if failed else 0)
