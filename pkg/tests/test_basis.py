import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import eval_gegenbauer

from polyenergy.basis import (
    ChebyshevSeries,
    ConvergenceError,
    DomainError,
    GegenbauerSeries,
    MonomialPolynomial,
    PFramePotential,
    cheb_eval,
    cheb_to_monomial,
    critical_points,
    expand_gegenbauer,
    gegenbauer_eval,
    gegenbauer_to_monomial,
    monomial_to_cheb,
    pframe_coeffs,
    series_from_dict,
    series_product,
)

rng = np.random.default_rng(20261015)
coeff_lists = st.lists(st.floats(-10, 10), min_size=1, max_size=21)


def cheb_trig(c, t):
    """Independent evaluation via T_n(cos th) = cos(n th)."""
    th = np.arccos(np.clip(t, -1, 1))
    return sum(ck * np.cos(k * th) for k, ck in enumerate(c))


def mono_eval(b, t):
    return sum(bk * t**k for k, bk in enumerate(b))


# -- cheb_eval ---------------------------------------------------------------

def test_cheb_eval_examples():
    assert cheb_eval(ChebyshevSeries([1]), 0.7) == 1
    assert cheb_eval(ChebyshevSeries([0, 0, 1]), 0.5) == pytest.approx(-0.5, abs=1e-15)
    assert cheb_eval(ChebyshevSeries.basis(6), -1.0) == pytest.approx(1.0, abs=1e-14)


def test_cheb_eval_domain():
    s = ChebyshevSeries([0, 0, 1])
    assert cheb_eval(s, 1 + 5e-13) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        cheb_eval(s, 1 + 1e-9)
    with pytest.raises(DomainError):
        cheb_eval(s, np.array([0.0, -1.1]))


@given(coeff_lists)
def test_cheb_eval_matches_trig_form(c):
    t = np.linspace(-1, 1, 33)
    assert np.allclose(cheb_eval(ChebyshevSeries(c), t), cheb_trig(c, t), atol=1e-11 * (1 + np.abs(c).sum()))


# -- basis changes ---------------------------------------------------------------

def test_monomial_to_cheb_examples():
    assert np.allclose(monomial_to_cheb(MonomialPolynomial([0, 0, 1])).coeffs, [0.5, 0, 0.5])
    assert np.allclose(monomial_to_cheb(MonomialPolynomial([5])).coeffs, [5])
    c4 = monomial_to_cheb(MonomialPolynomial([0, 0, 0, 0, 1]))
    t = rng.uniform(-1, 1, 10)
    assert np.max(np.abs(cheb_trig(c4.coeffs, t) - t**4)) <= 1e-12
    assert np.allclose(c4.coeffs, [3 / 8, 0, 1 / 2, 0, 1 / 8], atol=1e-15)


def test_cheb_to_monomial_examples():
    assert np.allclose(cheb_to_monomial(ChebyshevSeries([0, 1])).coeffs, [0, 1])
    assert np.allclose(cheb_to_monomial(ChebyshevSeries([0.5, 0, 0.5])).coeffs, [0, 0, 1])
    m = cheb_to_monomial(ChebyshevSeries([0, 0, 0, 1]))
    t = rng.uniform(-1, 1, 10)
    assert np.allclose(m(t), 4 * t**3 - 3 * t, atol=1e-14)
    assert np.allclose(m.coeffs, [0, -3, 0, 4])


def test_monomial_degree_trimmed():
    assert MonomialPolynomial([1, 2, 0, 0]).degree == 1
    z = MonomialPolynomial([0, 0])
    assert z.degree == 0 and z.coeffs.tolist() == [0.0]


@given(coeff_lists)
def test_round_trip_monomial_cheb_monomial(b):
    back = cheb_to_monomial(monomial_to_cheb(MonomialPolynomial(b))).coeffs
    ref = MonomialPolynomial(b).coeffs
    n = max(back.size, ref.size)
    assert np.max(np.abs(np.pad(back, (0, n - back.size)) - np.pad(ref, (0, n - ref.size)))) <= 1e-10


def test_degree_preserved():
    p = MonomialPolynomial([1, 0, 0, 2])
    assert monomial_to_cheb(p).degree == 3


# -- products --------------------------------------------------------------------

def test_series_product_examples():
    t1 = ChebyshevSeries.basis(1)
    assert np.allclose(series_product(t1, t1).coeffs, [0.5, 0, 0.5])
    s = ChebyshevSeries([1.5, -2, 0.25])
    assert np.allclose(series_product(ChebyshevSeries([1]), s).coeffs, s.coeffs)
    p = series_product(ChebyshevSeries.basis(2), ChebyshevSeries.basis(6))
    expect = np.zeros(9)
    expect[[4, 8]] = 0.5
    assert np.allclose(p.coeffs, expect)
    t = rng.uniform(-1, 1, 20)
    assert np.allclose(cheb_trig(p.coeffs, t), np.cos(2 * np.arccos(t)) * np.cos(6 * np.arccos(t)), atol=1e-13)


@given(coeff_lists, coeff_lists)
@settings(max_examples=50)
def test_series_product_pointwise(a, b):
    A, B = ChebyshevSeries(a), ChebyshevSeries(b)
    P = series_product(A, B)
    assert P.degree == A.degree + B.degree
    t = rng.uniform(-1, 1, 50)
    scale = 1 + np.abs(a).sum() * np.abs(b).sum()
    assert np.max(np.abs(P(t) - A(t) * B(t))) <= 1e-12 * scale


# -- Gegenbauer ------------------------------------------------------------------

def test_gegenbauer_eval_examples():
    assert gegenbauer_eval(1, 2, 0.5) == pytest.approx(-0.5)
    for t0 in (-0.9, 0.1, 0.77):
        assert gegenbauer_eval(2, 2, t0) == pytest.approx((3 * t0**2 - 1) / 2, abs=1e-15)
    for d in (1, 2, 5):
        assert gegenbauer_eval(d, 0, 0.3) == 1.0


def test_gegenbauer_normalized_at_one():
    for d in range(1, 7):
        for k in range(12):
            assert gegenbauer_eval(d, k, 1.0) == pytest.approx(1.0, abs=1e-12)


def test_gegenbauer_d1_is_chebyshev():
    t = np.linspace(-1, 1, 101)
    for k in range(21):
        assert np.max(np.abs(gegenbauer_eval(1, k, t) - cheb_eval(ChebyshevSeries.basis(k), t))) <= 1e-12


@pytest.mark.parametrize("d", [2, 3, 4, 6])
def test_gegenbauer_matches_scipy(d):
    lam = (d - 1) / 2
    t = np.linspace(-1, 1, 41)
    for k in range(10):
        ref = eval_gegenbauer(k, lam, t) / eval_gegenbauer(k, lam, 1.0)
        assert np.allclose(gegenbauer_eval(d, k, t), ref, atol=1e-12)


def test_gegenbauer_domain():
    with pytest.raises(DomainError):
        gegenbauer_eval(3, 2, -1.01)


@pytest.mark.parametrize("d", [1, 2, 3, 5])
def test_gegenbauer_to_monomial(d):
    g = GegenbauerSeries(d, rng.uniform(-2, 2, 9))
    t = np.linspace(-1, 1, 31)
    assert np.allclose(gegenbauer_to_monomial(g)(t), g(t), atol=1e-11)


def test_expand_gegenbauer_examples():
    sq = lambda t: t**2
    assert np.allclose(expand_gegenbauer(sq, 1, 2).coeffs, [0.5, 0, 0.5], atol=1e-12)
    assert np.allclose(expand_gegenbauer(sq, 2, 2).coeffs, [1 / 3, 0, 2 / 3], atol=1e-12)
    c3 = expand_gegenbauer(lambda t: gegenbauer_eval(3, 3, t), 3, 6).coeffs
    assert np.allclose(c3, [0, 0, 0, 1, 0, 0, 0], atol=1e-12)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_expand_gegenbauer_is_projection(d):
    g = GegenbauerSeries(d, rng.uniform(-1, 1, 8))
    assert np.max(np.abs(expand_gegenbauer(g, d, 7).coeffs - g.coeffs)) <= 1e-10


def test_expand_gegenbauer_convergence_error():
    with pytest.raises(ConvergenceError):
        expand_gegenbauer(lambda t: np.abs(t) ** 0.5, 2, 4, cap=256)


def test_pframe_coeffs_examples():
    assert np.allclose(pframe_coeffs(2, 1, 2).coeffs, [0.5, 0, 0.5], atol=1e-12)
    p4 = pframe_coeffs(4, 1, 10).coeffs
    ref = monomial_to_cheb(MonomialPolynomial([0, 0, 0, 0, 1])).coeffs
    assert np.allclose(p4[:5], ref, atol=1e-12)
    assert np.max(np.abs(p4[5:])) <= 1e-10
    p2 = pframe_coeffs(2, 3, 6).coeffs
    assert p2[2] > 0
    assert np.max(np.abs(p2[1::2])) <= 1e-12


def test_pframe_abs_closed_form():
    # |t| = 2/pi + sum_j 4 (-1)^(j+1) / (pi (4 j^2 - 1)) T_2j
    c = pframe_coeffs(1, 1, 20).coeffs
    ref = np.zeros(21)
    ref[0] = 2 / np.pi
    j = np.arange(1, 11)
    ref[2::2] = 4 * (-1.0) ** (j + 1) / (np.pi * (4 * j**2 - 1))
    assert np.allclose(c, ref, atol=1e-12)


@pytest.mark.parametrize("p, d", [(1.5, 2), (0.3, 3), (1.9, 1)])
def test_pframe_kinked_matches_adaptive_quadrature(p, d):
    from scipy.integrate import quad

    a = d / 2 - 1
    g = pframe_coeffs(p, d, 6).coeffs
    for k in range(0, 7, 2):
        # endpoint factors go into quad's algebraic weight (x - 0)^s (1 - x)^a
        num = 2 * quad(lambda t: gegenbauer_eval(d, k, t) * (1 + t) ** a, 0, 1,
                       weight="alg", wvar=(p, a))[0]
        den = quad(lambda t: gegenbauer_eval(d, k, t) ** 2, -1, 1, weight="alg", wvar=(a, a))[0]
        assert g[k] == pytest.approx(num / den, abs=1e-10)
    assert np.all(g[1::2] == 0.0)


def test_pframe_potential_derivative():
    P = PFramePotential(2.5)
    t = np.array([-0.7, -0.1, 0.0, 0.3])
    h = 1e-6
    fd = (P(t + h) - P(t - h)) / (2 * h)
    assert np.allclose(P.deriv()(t), fd, atol=1e-6)
    assert PFramePotential(0.5).deriv()(np.array([0.0]))[0] == 0.0
    with pytest.raises(ValueError):
        PFramePotential(0)


# -- critical points -------------------------------------------------------------

def test_critical_points_trivial():
    assert critical_points(ChebyshevSeries.basis(2)) == pytest.approx([0.0], abs=1e-12)
    assert critical_points(ChebyshevSeries.basis(1)) == []
    with pytest.raises(ValueError):
        critical_points(ChebyshevSeries([3.0]))


def _sign_scan_roots(c, n=10**6):
    # sign of f'(cos th) equals sign of sum n c_n sin(n th) on (0, pi)
    th = np.linspace(np.pi, 0, n)[1:-1]
    g = sum(k * ck * np.sin(k * th) for k, ck in enumerate(c))
    t = np.cos(th)
    idx = np.flatnonzero(np.sign(g[:-1]) * np.sign(g[1:]) < 0)
    return 0.5 * (t[idx] + t[idx + 1]), np.max(np.diff(t))


def test_critical_points_against_sign_scan():
    c = [1, 0, 1, 0, 1, 0, 3]
    ref, h = _sign_scan_roots(c)
    got = critical_points(ChebyshevSeries(c))
    assert len(got) == len(ref) == 5
    assert np.max(np.abs(np.array(got) - ref)) <= h


@given(st.lists(st.floats(-5, 5), min_size=2, max_size=13))
@settings(max_examples=60)
def test_critical_points_properties(c):
    f = ChebyshevSeries(c)
    if not np.any(np.abs(c[1:]) > 1e-3):
        return
    df = f.deriv()
    roots = critical_points(f)
    assert roots == sorted(roots)
    assert all(-1 <= r <= 1 for r in roots)
    assert all(b - a > 1e-8 for a, b in zip(roots, roots[1:]))
    scale = 1 + sum(k * k * abs(ck) for k, ck in enumerate(c))
    for r in roots:
        assert abs(df(r)) <= 1e-8 * scale
        lo, hi = max(r - 1e-7, -1), min(r + 1e-7, 1)
        assert df(lo) * df(hi) <= 0


# -- serialization ---------------------------------------------------------------

def test_series_json_round_trip():
    for s in (ChebyshevSeries([1, 0.5]), MonomialPolynomial([0, 1, 2]), GegenbauerSeries(3, [1, 2])):
        back = series_from_dict(json.loads(json.dumps(s.to_dict())))
        assert type(back) is type(s)
        assert np.array_equal(back.coeffs, s.coeffs)
    assert GegenbauerSeries(3, [1]).to_dict() == {"basis": "gegenbauer", "dim": 3, "coeffs": [1.0]}
    with pytest.raises(ValueError):
        series_from_dict({"basis": "legendre", "coeffs": [1]})
