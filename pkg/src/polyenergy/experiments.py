"""Sweeps over ``t^(2k) + alpha C_(2k)(t)^2`` (alpha -> 0) and ``|t|^p`` (p -> 2k)."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .basis import (
    ChebyshevSeries,
    ConvergenceError,
    GegenbauerSeries,
    MonomialPolynomial,
    PFramePotential,
    expand_gegenbauer,
    gegenbauer_basis,
    monomial_to_cheb,
    pframe_coeffs,
    series_product,
)
from .measures import CircleMeasure, SphereConfig
from .moments import is_psd, moments_of, toeplitz
from .optimize import OptimizationResult, OptimizerConfig, minimize_circle, minimize_sphere

__all__ = [
    "SweepRecord",
    "build_alpha_potential",
    "alpha_sweep",
    "p_sweep",
    "inner_product_profile",
    "compare_minimizers",
]

log = logging.getLogger(__name__)

PSD_ORDER = 10


@dataclass(frozen=True)
class SweepRecord:
    parameter: float
    minimizer: CircleMeasure | SphereConfig
    energy: float
    grad_norm: float
    restart_index: int
    psd_ok: bool | None = None
    coeffs: tuple[float, ...] | None = None
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def dim(self) -> int:
        m = self.minimizer
        return 1 if isinstance(m, CircleMeasure) else m.sphere_dim

    @property
    def support_size(self) -> int:
        return self.minimizer.size

    def inner_products(self):
        return inner_product_profile(self.minimizer)

    def to_dict(self) -> dict:
        vals, wts = self.inner_products()
        return {
            "parameter": self.parameter,
            "energy": self.energy,
            "support_size": self.support_size,
            "grad_norm": self.grad_norm,
            "restart_index": self.restart_index,
            "psd_ok": self.psd_ok,
            "minimizer": self.minimizer.to_dict(),
            "inner_products": {"values": vals.tolist(), "weights": wts.tolist()},
            "coeffs": None if self.coeffs is None else list(self.coeffs),
        }


def _power_monomial(m: int) -> MonomialPolynomial:
    c = np.zeros(m + 1)
    c[m] = 1.0
    return MonomialPolynomial(c)


def build_alpha_potential(k: int, alpha: float, d: int = 1):
    """``t^(2k) + alpha * C_(2k)(t)^2`` in the Chebyshev basis (d = 1) or Gegenbauer basis."""
    if k < 1 or alpha < 0:
        raise ValueError("need k >= 1 and alpha >= 0")
    base = _power_monomial(2 * k)
    if d == 1:
        t2k = ChebyshevSeries.basis(2 * k)
        return monomial_to_cheb(base) + series_product(t2k, t2k).scale(alpha)
    n = 4 * k

    def sq(t):
        return gegenbauer_basis(d, 2 * k, t)[2 * k] ** 2

    g_pow = expand_gegenbauer(base, d, n).coeffs
    g_sq = expand_gegenbauer(sq, d, n).coeffs
    return GegenbauerSeries(d, g_pow + alpha * g_sq)


def _psd(mu) -> bool | None:
    if not isinstance(mu, CircleMeasure):
        return None
    return is_psd(toeplitz(moments_of(mu, PSD_ORDER)), 1e-9).psd


def _solve(f, d, n_atoms, cfg, warm):
    if d == 1:
        return minimize_circle(f, n_atoms, cfg, starts=warm)
    F = f.to_monomial() if isinstance(f, GegenbauerSeries) else f
    return minimize_sphere(F, n_atoms, d, cfg, starts=warm)


def _record(param, res: OptimizationResult, coeffs=None) -> SweepRecord:
    return SweepRecord(param, res.minimizer, res.energy, res.grad_norm,
                       res.restart_index, _psd(res.minimizer), coeffs)


def _default_atoms(k):
    return 4 * k + 4


def alpha_sweep(k: int, alphas: Sequence[float], d: int = 1,
                cfg: OptimizerConfig | None = None, *, n_atoms: int | None = None,
                warm_start: bool = True) -> list[SweepRecord]:
    """Minimize the alpha family along ``alphas``, warm-starting each step.

    Records come back sorted by alpha. With warm starts and alphas
    processed in descending order the minimal energy is non-increasing as
    alpha falls, because the potential decreases pointwise.
    """
    cfg = cfg or OptimizerConfig()
    if any(a < 0 for a in alphas):
        raise ValueError("alpha must be >= 0")
    n_atoms = n_atoms or _default_atoms(k)
    out = []
    warm: list = []
    for a in sorted(alphas, reverse=True):
        res = _solve(build_alpha_potential(k, a, d), d, n_atoms, cfg, warm)
        out.append(_record(float(a), res))
        if warm_start:
            warm = [res.minimizer]
    out.sort(key=lambda r: r.parameter)
    e = [r.energy for r in out]
    if any(e[i] > e[i + 1] + 1e-12 for i in range(len(e) - 1)):
        log.warning("alpha sweep energies are not monotone: %s", e)
    return out


def p_sweep(k: int, ps: Sequence[float], d: int = 1, cfg: OptimizerConfig | None = None, *,
            n_atoms: int | None = None, n_max: int | None = None,
            warm_start: bool = True) -> list[SweepRecord]:
    """Minimize the p-frame energy ``|t|^p`` for each ``p``, moving toward ``2k``.

    Each record also carries the Gegenbauer coefficients of ``|t|^p`` up
    to ``n_max`` (default ``2k + 8``), or ``None`` if the quadrature did
    not settle.
    """
    cfg = cfg or OptimizerConfig()
    if any(not p > 0 for p in ps):
        raise ValueError("p must be positive")
    n_atoms = n_atoms or _default_atoms(k)
    n_max = n_max if n_max is not None else 2 * k + 8
    order = sorted(ps, key=lambda p: (-abs(p - 2 * k), p))
    out = []
    warm: list = []
    for p in order:
        res = _solve(PFramePotential(p), d, n_atoms, cfg, warm)
        try:
            coeffs = tuple(pframe_coeffs(p, d, n_max).coeffs.tolist())
        except ConvergenceError:
            log.warning("p-frame coefficients for p=%g did not converge", p)
            coeffs = None
        out.append(_record(float(p), res, coeffs))
        if warm_start:
            warm = [res.minimizer]
    out.sort(key=lambda r: r.parameter)
    return out


def inner_product_profile(m):
    """Distribution of ``<x, y>`` under ``mu x mu`` as sorted values and weights."""
    if isinstance(m, CircleMeasure):
        Q = np.cos(m.angles[:, None] - m.angles[None, :])
    else:
        Q = m.points @ m.points.T
    W = np.outer(m.weights, m.weights)
    v = np.clip(Q.ravel(), -1.0, 1.0)
    order = np.argsort(v, kind="stable")
    return v[order], W.ravel()[order]


def _dim(m) -> int:
    return 1 if isinstance(m, CircleMeasure) else m.sphere_dim


def compare_minimizers(a, b) -> float:
    """L1 distance between the CDFs of two inner-product profiles.

    Accepts :class:`SweepRecord`, :class:`CircleMeasure` or
    :class:`SphereConfig`. Invariant under rotations and relabelings;
    zero exactly when the two profiles coincide.
    """
    ma = a.minimizer if isinstance(a, SweepRecord) else a
    mb = b.minimizer if isinstance(b, SweepRecord) else b
    if _dim(ma) != _dim(mb):
        raise ValueError("minimizers live on spheres of different dimension")
    va, wa = inner_product_profile(ma)
    vb, wb = inner_product_profile(mb)
    grid = np.union1d(va, vb)
    Fa = np.array([wa[va <= x].sum() for x in grid])
    Fb = np.array([wb[vb <= x].sum() for x in grid])
    return float(np.sum(np.abs(Fa - Fb)[:-1] * np.diff(grid)))
