"""Polynomial bases on [-1, 1]: monomial, Chebyshev and normalized Gegenbauer.

Every potential object here is a vectorized callable ``f(t)`` with a
``deriv()`` method returning another such callable. The energy and
optimization code relies only on that pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.polynomial import chebyshev as npcheb
from numpy.polynomial import polynomial as npoly
from scipy.special import roots_jacobi

__all__ = [
    "DomainError",
    "ConvergenceError",
    "MonomialPolynomial",
    "ChebyshevSeries",
    "GegenbauerSeries",
    "PFramePotential",
    "cheb_eval",
    "monomial_to_cheb",
    "cheb_to_monomial",
    "series_product",
    "gegenbauer_eval",
    "gegenbauer_basis",
    "gegenbauer_to_monomial",
    "expand_gegenbauer",
    "pframe_coeffs",
    "critical_points",
    "to_chebyshev",
    "series_from_dict",
]

DOMAIN_SLACK = 1e-12
QUAD_TOL = 1e-10
QUAD_CAP = 2**14


class DomainError(ValueError):
    """Argument outside [-1, 1] beyond the rounding slack."""


class ConvergenceError(RuntimeError):
    """Quadrature did not settle before the node cap."""


def _check_domain(t):
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0 + DOMAIN_SLACK):
        raise DomainError("argument outside [-1, 1]")
    return np.clip(t, -1.0, 1.0)


def _as_coeffs(coeffs) -> np.ndarray:
    c = np.array(coeffs, dtype=float, ndmin=1)
    if c.ndim != 1 or c.size == 0:
        raise ValueError("coefficients must be a non-empty 1-d sequence")
    c.setflags(write=False)
    return c


@dataclass(frozen=True, eq=False)
class MonomialPolynomial:
    """``F(t) = sum_k coeffs[k] * t**k``; trailing zeros are trimmed."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float, ndmin=1)
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else np.zeros(1)
        object.__setattr__(self, "coeffs", _as_coeffs(c))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, t):
        return npoly.polyval(np.asarray(t, dtype=float), self.coeffs)

    def deriv(self) -> "MonomialPolynomial":
        if self.degree == 0:
            return MonomialPolynomial([0.0])
        return MonomialPolynomial(npoly.polyder(self.coeffs))

    def to_dict(self) -> dict:
        return {"basis": "monomial", "coeffs": self.coeffs.tolist()}


@dataclass(frozen=True, eq=False)
class ChebyshevSeries:
    """``f(t) = sum_i coeffs[i] * T_i(t)`` with first-kind Chebyshev ``T_i``."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))

    @classmethod
    def basis(cls, k: int) -> "ChebyshevSeries":
        c = np.zeros(k + 1)
        c[k] = 1.0
        return cls(c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, t):
        return cheb_eval(self, t)

    def __add__(self, other: "ChebyshevSeries") -> "ChebyshevSeries":
        return ChebyshevSeries(npcheb.chebadd(self.coeffs, other.coeffs))

    def scale(self, a: float) -> "ChebyshevSeries":
        return ChebyshevSeries(a * self.coeffs)

    def deriv(self) -> "ChebyshevSeries":
        if self.degree == 0:
            return ChebyshevSeries([0.0])
        return ChebyshevSeries(npcheb.chebder(self.coeffs))

    def to_dict(self) -> dict:
        return {"basis": "chebyshev", "coeffs": self.coeffs.tolist()}


@dataclass(frozen=True, eq=False)
class GegenbauerSeries:
    """Series in Gegenbauer polynomials for ``S^dim``, normalized to ``C_k(1) = 1``."""

    dim: int
    coeffs: np.ndarray

    def __post_init__(self):
        if int(self.dim) < 1:
            raise ValueError("sphere dimension must be >= 1")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, t):
        t = _check_domain(t)
        P = gegenbauer_basis(self.dim, self.degree, t)
        return np.tensordot(self.coeffs, P, axes=1)

    def to_monomial(self) -> MonomialPolynomial:
        return gegenbauer_to_monomial(self)

    def deriv(self) -> MonomialPolynomial:
        return self.to_monomial().deriv()

    def to_dict(self) -> dict:
        return {"basis": "gegenbauer", "dim": self.dim, "coeffs": self.coeffs.tolist()}


class PFramePotential:
    """The p-frame kernel ``|t|**p``."""

    def __init__(self, p: float):
        if not p > 0:
            raise ValueError("p must be positive")
        self.p = float(p)

    def __call__(self, t):
        return np.abs(np.asarray(t, dtype=float)) ** self.p

    def deriv(self) -> Callable:
        p = self.p

        def slope(t):
            t = np.asarray(t, dtype=float)
            a = np.abs(t)
            with np.errstate(divide="ignore", invalid="ignore"):
                out = p * np.sign(t) * a ** (p - 1.0)
            return np.where(a == 0.0, 0.0, out)

        return slope

    def to_dict(self) -> dict:
        return {"basis": "pframe", "p": self.p}


def cheb_eval(s: ChebyshevSeries, t):
    """Evaluate a Chebyshev series by Clenshaw's backward recurrence.

    Arguments within ``1e-12`` outside [-1, 1] are clamped; anything
    further out raises :class:`DomainError`.
    """
    t = _check_domain(t)
    c = s.coeffs
    b1 = np.zeros_like(t)
    b2 = np.zeros_like(t)
    two_t = 2.0 * t
    for ck in c[:0:-1]:
        b1, b2 = two_t * b1 - b2 + ck, b1
    out = t * b1 - b2 + c[0]
    return out if out.ndim else float(out)


def monomial_to_cheb(p: MonomialPolynomial) -> ChebyshevSeries:
    return ChebyshevSeries(npcheb.poly2cheb(p.coeffs))


def cheb_to_monomial(s: ChebyshevSeries) -> MonomialPolynomial:
    return MonomialPolynomial(npcheb.cheb2poly(s.coeffs))


def series_product(a: ChebyshevSeries, b: ChebyshevSeries) -> ChebyshevSeries:
    """Product of two Chebyshev series via ``T_m T_n = (T_{m+n} + T_{|m-n|}) / 2``."""
    out = np.zeros(a.degree + b.degree + 1)
    for m, am in enumerate(a.coeffs):
        if am == 0.0:
            continue
        for n, bn in enumerate(b.coeffs):
            half = 0.5 * am * bn
            out[m + n] += half
            out[abs(m - n)] += half
    return ChebyshevSeries(out)


def _lam(d: int) -> float:
    return 0.5 * (d - 1)


def gegenbauer_basis(d: int, n: int, t) -> np.ndarray:
    """Rows ``0..n`` of normalized Gegenbauer values at ``t``.

    Uses ``(k + 2l) P_{k+1} = 2 (k + l) t P_k - k P_{k-1}`` with
    ``l = (d - 1) / 2``; for ``d = 1`` this is the Chebyshev recurrence.
    """
    if d < 1 or n < 0:
        raise ValueError("need d >= 1 and n >= 0")
    t = np.asarray(t, dtype=float)
    lam = _lam(d)
    P = np.empty((n + 1,) + t.shape)
    P[0] = 1.0
    if n >= 1:
        P[1] = t
    for k in range(1, n):
        P[k + 1] = (2.0 * (k + lam) * t * P[k] - k * P[k - 1]) / (k + 2.0 * lam)
    return P


def gegenbauer_eval(d: int, k: int, t):
    t = _check_domain(t)
    out = gegenbauer_basis(d, k, t)[k]
    return out if out.ndim else float(out)


def gegenbauer_to_monomial(g: GegenbauerSeries) -> MonomialPolynomial:
    lam = _lam(g.dim)
    n = g.degree
    rows = [np.array([1.0]), np.array([0.0, 1.0])]
    for k in range(1, n):
        nxt = 2.0 * (k + lam) * np.concatenate([[0.0], rows[k]])
        nxt[: k] -= k * rows[k - 1]
        rows.append(nxt / (k + 2.0 * lam))
    out = np.zeros(n + 1)
    for k, gk in enumerate(g.coeffs):
        out[: k + 1] += gk * rows[k]
    return MonomialPolynomial(out)


@lru_cache(maxsize=64)
def _jacobi_rule(n: int, d: int):
    a = 0.5 * d - 1.0
    x, w = roots_jacobi(n, a, a)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _project(f, d, n_max, nodes):
    x, w = _jacobi_rule(nodes, d)
    fx = np.asarray(f(x), dtype=float)
    if fx.shape != x.shape:
        fx = np.vectorize(f, otypes=[float])(x)
    P = gegenbauer_basis(d, n_max, x)
    return (P * (w * fx)).sum(axis=1) / (P * P * w).sum(axis=1)


def _settle(project, n_max, tol, cap):
    nodes = max(32, 2 * (n_max + 1))
    prev = project(nodes)
    while nodes < cap:
        nodes = min(2 * nodes, cap)
        cur = project(nodes)
        if np.max(np.abs(cur - prev)) <= tol:
            return cur
        prev = cur
    raise ConvergenceError(f"Gegenbauer coefficients not settled at {cap} nodes")


def expand_gegenbauer(f, d: int, n_max: int, *, tol: float = QUAD_TOL,
                      cap: int = QUAD_CAP) -> GegenbauerSeries:
    """Project ``f`` onto normalized Gegenbauer polynomials of degree <= n_max.

    Gauss-Jacobi quadrature with weight ``(1 - t^2)^(d/2 - 1)``; the node
    count doubles until no coefficient moves by more than ``tol``.
    """
    if isinstance(f, PFramePotential):
        return pframe_coeffs(f.p, d, n_max, tol=tol, cap=cap)
    return GegenbauerSeries(d, _settle(lambda m: _project(f, d, n_max, m), n_max, tol, cap))


@lru_cache(maxsize=64)
def _half_rule(n: int, d: int, p: float):
    # nodes on [0, 1] for the weight t^p (1 - t)^a; the remaining (1 + t)^a is smooth there
    a = 0.5 * d - 1.0
    x, w = roots_jacobi(n, a, p)
    t = 0.5 * (1.0 + x)
    w = w * 0.5 ** (a + p + 1.0) * (1.0 + t) ** a
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


def _project_pframe(p, d, n_max, nodes):
    t, w = _half_rule(nodes, d, p)
    P = gegenbauer_basis(d, n_max, t)
    num = 2.0 * (P * w).sum(axis=1)
    num[1::2] = 0.0  # |t|^p is even
    x, wx = _jacobi_rule(n_max + 1, d)  # exact for the polynomial norms
    Q = gegenbauer_basis(d, n_max, x)
    return num / (Q * Q * wx).sum(axis=1)


def pframe_coeffs(p: float, d: int, n_max: int, *, tol: float = QUAD_TOL,
                  cap: int = QUAD_CAP) -> GegenbauerSeries:
    """Gegenbauer coefficients of ``|t|^p``.

    The kink at ``t = 0`` would stall a rule on the whole interval, so the
    even integrand is folded onto [0, 1] and ``t^p`` moved into the
    Jacobi weight. What is left is smooth and converges quickly.
    """
    if not p > 0:
        raise ValueError("p must be positive")
    return GegenbauerSeries(d, _settle(lambda m: _project_pframe(float(p), d, n_max, m),
                                       n_max, tol, cap))


def to_chebyshev(f) -> ChebyshevSeries:
    """Convert any polynomial series to the Chebyshev basis."""
    if isinstance(f, ChebyshevSeries):
        return f
    if isinstance(f, GegenbauerSeries):
        f = f.to_monomial()
    if isinstance(f, MonomialPolynomial):
        return monomial_to_cheb(f)
    raise TypeError(f"cannot convert {type(f).__name__} to a Chebyshev series")


def critical_points(f: ChebyshevSeries, grid_factor: int = 64) -> list[float]:
    """Real roots of ``f'`` in [-1, 1], sorted and deduplicated at 1e-8.

    Sign changes of ``f'`` on a uniform grid of ``grid_factor * degree``
    intervals are bracketed and then bisected. Roots of even multiplicity
    (no sign change) are only caught if they hit a grid point exactly.
    """
    f = to_chebyshev(f)
    if f.degree < 1:
        raise ValueError("critical points need degree >= 1")
    df = f.deriv()
    x = np.linspace(-1.0, 1.0, grid_factor * f.degree + 1)
    y = df(x)
    roots = list(x[y == 0.0])
    s = np.sign(y)
    for i in np.flatnonzero(s[:-1] * s[1:] < 0):
        lo, hi, slo = x[i], x[i + 1], s[i]
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            sm = np.sign(df(mid))
            if sm == 0.0:
                lo = hi = mid
                break
            if sm == slo:
                lo = mid
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))
    roots.sort()
    out: list[float] = []
    for r in roots:
        if not out or r - out[-1] > 1e-8:
            out.append(float(r))
    return out


def series_from_dict(data: dict):
    basis = data.get("basis")
    if basis == "chebyshev":
        return ChebyshevSeries(data["coeffs"])
    if basis == "monomial":
        return MonomialPolynomial(data["coeffs"])
    if basis == "gegenbauer":
        return GegenbauerSeries(data["dim"], data["coeffs"])
    if basis == "pframe":
        return PFramePotential(data["p"])
    raise ValueError(f"unknown basis {basis!r}")
