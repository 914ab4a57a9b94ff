import numpy as np
import pytest

from simplexmax.errors import InvalidInput
from simplexmax.montecarlo import (
    RotationSampler,
    haar_moment_gap,
    iterated_sphere_sample,
    volume_moment_scan,
    mc_cs_check,
    mc_maximal,
    mc_multilinear_average,
    pair_weight,
    pair_weight_identity_gap,
    sphere_witness,
)


def test_rotations_are_special_orthogonal():
    rots = RotationSampler(5, seed=1).sample(200)
    eye = np.einsum("nij,nkj->nik", rots, rots)
    assert np.allclose(eye, np.eye(5), atol=1e-12)
    assert np.allclose(np.linalg.det(rots), 1.0)


def test_sampler_is_reproducible():
    a = RotationSampler(4, seed=7).sample(10)
    b = RotationSampler(4, seed=7).sample(10)
    assert np.array_equal(a, b)
    assert not np.array_equal(RotationSampler(4, seed=7).split(1).sample(10), a)


def test_haar_moments():
    mean_gap, cov_gap = haar_moment_gap(4, 20_000, seed=0)
    assert mean_gap < 0.03 and cov_gap < 0.03


def test_constant_functions_average_exactly():
    est = mc_multilinear_average([2.0, 3.0], np.eye(3)[:2], 1.5, np.zeros(3), 100, seed=0)
    assert est.estimate == pytest.approx(6.0)


def test_mc_average_converges_for_radial_function():
    # f(y) = |y|^2 on a unit-edge simplex at the origin: every vertex has |y| = lam
    f = lambda p: (np.asarray(p) ** 2).sum(axis=-1)
    est = mc_multilinear_average([f, f], np.eye(3)[:2], 2.0, np.zeros(3), 500, seed=2)
    assert est.estimate == pytest.approx(16.0)


def test_mc_maximal_takes_largest_scale():
    f = lambda p: (np.asarray(p) ** 2).sum(axis=-1)
    assert mc_maximal([f, 1.0], np.eye(3)[:2], [1.0, 2.0], np.zeros(3), 100) == pytest.approx(4.0)


def test_empirical_cauchy_schwarz():
    rng = np.random.default_rng(0)
    c1, c2 = rng.standard_normal(3), rng.standard_normal(3)
    f1 = lambda p: np.exp(-((p - c1) ** 2).sum(axis=-1))
    f2 = lambda p: np.exp(-((p - c2) ** 2).sum(axis=-1))
    chk = mc_cs_check([f1, f2], np.eye(3)[:2], 1.0, np.zeros(3), 1000, seed=3)
    assert chk.violation <= 1e-12 * chk.scale


def test_iterated_sphere_sample_has_target_gram():
    t = np.array([[2.0, 1.0], [1.0, 2.0]])
    ys = iterated_sphere_sample(t, 500, 4, seed=1)
    grams = np.einsum("nid,njd->nij", ys, ys)
    assert np.allclose(grams, t, atol=1e-10)


def test_pair_weight_identity_and_witness():
    rng = np.random.default_rng(4)
    y2, y2p = rng.standard_normal(6), rng.standard_normal(6)
    y1 = sphere_witness(y2, y2p, 50.0, 0.3, seed=1)
    assert y1 @ y1 == pytest.approx(50.0)
    assert y1 @ y2 == pytest.approx(0.3) and y1 @ y2p == pytest.approx(0.3)
    assert pair_weight_identity_gap(y1, y2, y2p) < 1e-9
    assert pair_weight(y2, y2p, 6, y1=y1) > 0


def test_integrand_scan_flags_divergent_exponent():
    assert volume_moment_scan(2, 1.0, 6, 2000, seed=0).heavy_tail is False
    assert volume_moment_scan(2, 5.0, 6, 2000, seed=0).heavy_tail is True


def test_integrand_scan_rejects_bad_m():
    with pytest.raises(InvalidInput):
        volume_moment_scan(7, 1.0, 6, 10)
