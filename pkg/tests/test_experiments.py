import numpy as np
import pytest
from scipy.special import eval_gegenbauer
from scipy.stats import wasserstein_distance

from polyenergy.basis import ChebyshevSeries, GegenbauerSeries
from polyenergy.measures import CircleMeasure
from polyenergy.optimize import OptimizerConfig
from polyenergy.experiments import (
    alpha_sweep,
    build_alpha_potential,
    compare_minimizers,
    inner_product_profile,
    p_sweep,
)

from helpers import random_circle, random_sphere

FAST = OptimizerConfig(restarts=3)
rng = np.random.default_rng(77)


@pytest.mark.parametrize("alpha, coeffs", [
    (0.0, [0.5, 0, 0.5]),
    (1.0, [1.0, 0, 0.5, 0, 0.5]),
    (0.5, [0.75, 0, 0.5, 0, 0.25]),
])
def test_alpha_potential_k1(alpha, coeffs):
    f = build_alpha_potential(1, alpha)
    assert isinstance(f, ChebyshevSeries)
    assert np.allclose(f.coeffs, coeffs, atol=1e-14)
    t = rng.uniform(-1, 1, 50)
    T2 = 2 * t**2 - 1
    assert np.allclose(f(t), t**2 + alpha * T2**2, atol=1e-13)


def test_alpha_potential_higher_dim():
    d, k, alpha = 2, 1, 0.3
    f = build_alpha_potential(k, alpha, d)
    assert isinstance(f, GegenbauerSeries) and f.dim == d
    t = rng.uniform(-1, 1, 50)
    lam = (d - 1) / 2
    C2 = eval_gegenbauer(2, lam, t) / eval_gegenbauer(2, lam, 1.0)
    assert np.allclose(f(t), t**2 + alpha * C2**2, atol=1e-9)


def test_alpha_potential_validation():
    with pytest.raises(ValueError):
        build_alpha_potential(0, 1.0)
    with pytest.raises(ValueError):
        build_alpha_potential(1, -0.1)


def test_alpha_sweep_single_and_empty():
    recs = alpha_sweep(1, [0.0], cfg=FAST)
    assert len(recs) == 1
    assert recs[0].energy == pytest.approx(0.5, abs=1e-6)
    assert alpha_sweep(1, [], cfg=FAST) == []


def test_alpha_sweep_monotone_and_psd():
    recs = alpha_sweep(1, [1.0, 0.1, 0.01], cfg=FAST)
    assert [r.parameter for r in recs] == [0.01, 0.1, 1.0]
    e = [r.energy for r in recs]
    assert all(a <= b + 1e-12 for a, b in zip(e, e[1:]))
    assert all(r.psd_ok for r in recs)
    d = recs[0].to_dict()
    assert set(d) >= {"parameter", "energy", "minimizer", "inner_products", "psd_ok"}


def test_alpha_sweep_sphere():
    recs = alpha_sweep(1, [0.5, 0.0], d=2, cfg=FAST, n_atoms=4)
    assert recs[0].dim == 2 and recs[0].psd_ok is None
    assert recs[0].energy == pytest.approx(1 / 3, abs=1e-6)
    assert recs[0].energy <= recs[1].energy + 1e-12


def test_alpha_sweep_rejects_negative():
    with pytest.raises(ValueError):
        alpha_sweep(1, [0.5, -1.0])


def test_p_sweep_p2_matches_alpha0():
    ps = p_sweep(1, [2.0], cfg=FAST)
    a0 = alpha_sweep(1, [0.0], cfg=FAST)
    assert ps[0].energy == pytest.approx(0.5, abs=1e-6)
    assert abs(ps[0].energy - a0[0].energy) <= 1e-6
    # |t|^2 on the circle has Chebyshev / Gegenbauer (d = 1) coefficients 1/2, 0, 1/2
    assert np.allclose(ps[0].coeffs[:3], [0.5, 0, 0.5], atol=1e-9)


def test_p_sweep_psd_and_ordering():
    recs = p_sweep(1, [1.99, 1.9], cfg=FAST)
    assert [r.parameter for r in recs] == [1.9, 1.99]
    assert all(r.psd_ok for r in recs)
    assert all(r.coeffs is not None and len(r.coeffs) == 11 for r in recs)
    with pytest.raises(ValueError):
        p_sweep(1, [0.0])


# -- comparison ------------------------------------------------------------------

def test_profile_weights_sum_to_one():
    mu = random_circle(rng, 5)
    v, w = inner_product_profile(mu)
    assert np.all(np.diff(v) >= 0)
    assert w.sum() == pytest.approx(1.0)


def test_compare_identity_and_rotation():
    mu = random_circle(rng, 6)
    assert compare_minimizers(mu, mu) == 0.0
    assert compare_minimizers(mu, mu.rotated(0.7)) == pytest.approx(0.0, abs=1e-12)


def test_compare_relabel_invariant():
    mu = random_circle(rng, 5)
    perm = rng.permutation(5)
    nu = CircleMeasure(mu.angles[perm], mu.weights[perm])
    assert compare_minimizers(mu, nu) == pytest.approx(0.0, abs=1e-12)


def test_compare_square_vs_hexagon():
    sq, hx = CircleMeasure.uniform(4), CircleMeasure.uniform(6)
    d = compare_minimizers(sq, hx)
    assert d > 0.1
    assert d == pytest.approx(compare_minimizers(hx, sq), abs=1e-15)


def test_compare_matches_wasserstein_oracle():
    for _ in range(20):
        a, b = random_circle(rng, rng.integers(1, 7)), random_circle(rng, rng.integers(1, 7))
        va, wa = inner_product_profile(a)
        vb, wb = inner_product_profile(b)
        ref = wasserstein_distance(va, vb, wa, wb)
        assert compare_minimizers(a, b) == pytest.approx(ref, abs=1e-12)
    X, Y = random_sphere(rng, 5, 3), random_sphere(rng, 4, 3)
    (vx, wx), (vy, wy) = inner_product_profile(X), inner_product_profile(Y)
    ref = wasserstein_distance(vx, vy, wx, wy)
    assert compare_minimizers(X, Y) == pytest.approx(ref, abs=1e-12)


def test_compare_dimension_mismatch():
    with pytest.raises(ValueError):
        compare_minimizers(CircleMeasure.uniform(3), random_sphere(rng, 3, 2))
    # a circle measure equals its embedding in the 1-sphere
    mu = random_circle(rng, 4)
    assert compare_minimizers(mu, mu.to_sphere()) == pytest.approx(0.0, abs=1e-12)
