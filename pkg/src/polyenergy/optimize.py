"""Multi-start first-order minimization of circle and sphere energies.

Each run alternates a backtracking step on positions (angles, or points
retracted to the sphere) with a projected backtracking step on weights.
Position steps follow the per-unit-mass gradient ``dE/dx_i / w_i``, which
is a positive diagonal rescaling of the true gradient and keeps atoms of
tiny weight mobile.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .basis import ChebyshevSeries, GegenbauerSeries
from .measures import (
    CircleMeasure,
    SphereConfig,
    _circle_energy,
    _circle_grad,
    _sphere_energy,
    _sphere_grad,
    _vectorized,
    canonicalize,
    wrap_angles,
)

__all__ = [
    "OptimizerConfig",
    "OptimizationResult",
    "project_simplex",
    "minimize_circle",
    "minimize_sphere",
    "refine",
]

log = logging.getLogger(__name__)

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 8
    max_iters: int = 2000
    grad_tol: float = 1e-9
    initial_step: float = 1.0
    shrink: float = 0.5
    sufficient_decrease: float = 0.3
    seed: int = 0
    merge_tol: float = 1e-6
    weight_floor: float = 1e-8
    workers: int = 1

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iters < 0:
            raise ValueError("max_iters must be >= 0")
        if not self.grad_tol > 0:
            raise ValueError("grad_tol must be positive")
        if not 0 < self.shrink < 1:
            raise ValueError("shrink factor must lie in (0, 1)")
        if not self.initial_step > 0:
            raise ValueError("initial_step must be positive")

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass(frozen=True)
class OptimizationResult:
    minimizer: CircleMeasure | SphereConfig
    energy: float
    grad_norm: float
    iterations: int
    restart_index: int
    label: str = "random"
    extra: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {
            "minimizer": self.minimizer.to_dict(),
            "energy": self.energy,
            "grad_norm": self.grad_norm,
            "iterations": self.iterations,
            "restart_index": self.restart_index,
            "label": self.label,
        }


def project_simplex(v) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sorted-threshold rule)."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v, kind="stable")[::-1]
    css = np.cumsum(u)
    k = np.arange(1, v.size + 1)
    rho = np.flatnonzero(u - (css - 1.0) / k > 0)[-1]
    tau = (css[rho] - 1.0) / (rho + 1)
    x = np.maximum(v - tau, 0.0)
    return x / x.sum()


def _rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, index])


def _potential_pair(f):
    if isinstance(f, GegenbauerSeries):
        f = f.to_monomial()
    fv = f if isinstance(f, ChebyshevSeries) else _vectorized(f)
    return fv, _vectorized(f.deriv())


# -- local descent -----------------------------------------------------------

class _Descent:
    """Shared alternating projected-gradient loop.

    Subclasses supply ``energy(x, w)``, ``grad(x, w)`` returning
    ``(g_x, g_w, direction)`` and ``retract(x, step, direction)``.
    """

    def __init__(self, cfg: OptimizerConfig, free_weights: bool = True):
        self.cfg = cfg
        self.free_weights = free_weights

    def run(self, x, w, grad_tol, max_iters, callback=None):
        cfg = self.cfg
        E = self.energy(x, w)
        sx = sw = cfg.initial_step
        it = stalls = 0
        gnorm = np.inf
        for it in range(max_iters + 1):
            E_start = E
            g_x, g_w, dirn = self.grad(x, w)
            pg = w - project_simplex(w - g_w) if self.free_weights else np.zeros_like(w)
            gnorm = max(float(np.max(np.abs(g_x))), float(np.max(np.abs(pg))))
            if gnorm < grad_tol or it == max_iters:
                break
            moved = False

            slope = float(np.sum(g_x * dirn))
            if slope > 0:
                s = sx / cfg.shrink
                while s > 1e-16:
                    xn = self.retract(x, s, dirn)
                    En = self.energy(xn, w)
                    if En <= E - cfg.sufficient_decrease * s * slope:
                        x, E, sx, moved = xn, En, s, True
                        break
                    s *= cfg.shrink

            if self.free_weights:
                if moved:
                    g_w = self.grad(x, w)[1]
                s = sw / cfg.shrink
                while s > 1e-16:
                    wn = project_simplex(w - s * g_w)
                    dec = float(np.dot(g_w, wn - w))
                    if dec >= 0:
                        break
                    En = self.energy(x, wn)
                    if En <= E + cfg.sufficient_decrease * dec:
                        w, E, sw, moved = wn, En, s, True
                        break
                    s *= cfg.shrink

            if callback is not None:
                callback(it, x, w, E)
            if not moved:
                break
            # decrease below rounding resolution: the energy cannot improve further
            stalls = stalls + 1 if E_start - E <= 8 * _EPS * max(1.0, abs(E)) else 0
            if stalls >= 10:
                it += 1
                break
        return x, w, E, gnorm, it


class _CircleDescent(_Descent):
    def __init__(self, fv, fd, cfg, free_weights=True):
        super().__init__(cfg, free_weights)
        self.fv, self.fd = fv, fd

    def energy(self, theta, w):
        return _circle_energy(self.fv, theta, w)

    def grad(self, theta, w):
        return _circle_grad(self.fv, self.fd, theta, w)

    def retract(self, theta, s, dirn):
        return wrap_angles(theta - s * dirn)


class _SphereDescent(_Descent):
    def __init__(self, fv, fd, cfg, free_weights=False):
        super().__init__(cfg, free_weights)
        self.fv, self.fd = fv, fd

    def energy(self, X, w):
        return _sphere_energy(self.fv, X, w)

    def grad(self, X, w):
        return _sphere_grad(self.fv, self.fd, X, w)

    def retract(self, X, s, dirn):
        Y = X - s * dirn
        return Y / np.linalg.norm(Y, axis=1, keepdims=True)


# -- multi-start drivers -----------------------------------------------------

def _best(results: Sequence[OptimizationResult]) -> OptimizationResult:
    return min(results, key=lambda r: (r.energy, r.restart_index))


def _map(fn, jobs, workers):
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, jobs))
    return [fn(j) for j in jobs]


def _two_point_start(f, fv) -> tuple[float, float] | None:
    """Angle and weight of the best two-atom measure ``{0, arccos t*}``."""
    if isinstance(f, ChebyshevSeries):
        if f.degree < 1:
            return None
        from .structured import two_point_optimum
        tp = two_point_optimum(f)
        return float(np.arccos(tp.t)), tp.w
    grid = np.linspace(-1.0, 1.0, 4097)
    vals = fv(grid)
    i = int(np.argmin(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    res = minimize_scalar(lambda t: float(fv(np.array(t))), bounds=(lo, hi),
                          method="bounded", options={"xatol": 1e-12})
    t = res.x if res.fun < vals[i] else grid[i]
    if fv(np.array(t)) >= fv(np.array(1.0)):
        return None
    return float(np.arccos(t)), 0.5


def _circle_candidates(f, fv, n_atoms: int) -> list[tuple[str, CircleMeasure]]:
    out = [(f"{n}-gon", CircleMeasure.uniform(n)) for n in range(2, n_atoms + 1)]
    if n_atoms >= 2:
        tp = _two_point_start(f, fv)
        if tp is not None:
            phi, w = tp
            out.append(("two-point", CircleMeasure([0.0, phi], [w, 1.0 - w])))
    return out


def minimize_circle(f, n_atoms: int, cfg: OptimizerConfig | None = None, *,
                    starts: Sequence[CircleMeasure] = (), candidates: bool = True,
                    callback: Callable | None = None) -> OptimizationResult:
    """Minimize ``sum_ij w_i w_j f(cos(theta_i - theta_j))`` over measures with ``n_atoms`` atoms.

    Parameters
    ----------
    f : ChebyshevSeries or callable with ``deriv()``
        The potential on [-1, 1].
    n_atoms : int
        Support size of the random starts.
    cfg : OptimizerConfig
        Restart count, stopping rule, line search and seed.
    starts : sequence of CircleMeasure
        Extra starting measures (warm starts), run after the random ones.
    candidates : bool
        Also descend from regular n-gons (``n <= n_atoms``) and the best
        two-point measure, so the result is never worse than those.
    callback : callable, optional
        ``callback(restart_index, iteration, angles, weights, energy)``
        after every iteration; only honoured with ``workers == 1``.

    Returns
    -------
    OptimizationResult
        Best run by energy, ties broken by restart index. The minimizer
        is canonicalized and the energy recomputed on it.
    """
    cfg = cfg or OptimizerConfig()
    if n_atoms < 1:
        raise ValueError("n_atoms must be >= 1")
    fv, fd = _potential_pair(f)
    if n_atoms == 1:
        mu = CircleMeasure.point_mass()
        return OptimizationResult(mu, _circle_energy(fv, mu.angles, mu.weights), 0.0, 0, 0, "point")

    jobs = []
    for r in range(cfg.restarts):
        rng = _rng(cfg.seed, r)
        theta = rng.uniform(-np.pi, np.pi, n_atoms)
        w = rng.dirichlet(np.ones(n_atoms))
        jobs.append((r, "random", theta, w))
    extra = [("warm", mu) for mu in starts]
    if candidates:
        extra += _circle_candidates(f, fv, n_atoms)
    for j, (label, mu) in enumerate(extra):
        jobs.append((cfg.restarts + j, label, np.array(mu.angles), np.array(mu.weights)))

    descent = _CircleDescent(fv, fd, cfg)

    def one(job):
        r, label, theta, w = job
        cb = _bind(callback, r, cfg.workers)
        x, ww, E, gnorm, its = descent.run(theta, w, cfg.grad_tol, cfg.max_iters, cb)
        mu = canonicalize(CircleMeasure(x, ww), cfg.merge_tol, cfg.weight_floor)
        return OptimizationResult(mu, _circle_energy(fv, mu.angles, mu.weights),
                                  gnorm, its, r, label)

    return _best(_map(one, jobs, cfg.workers))


def _bind(callback, r, workers):
    # per-iteration callbacks are only honoured on the serial path
    if callback is None or workers > 1:
        return None
    return lambda it, x, w, E: callback(r, it, x, w, E)


def minimize_sphere(F, N: int, d: int, cfg: OptimizerConfig | None = None, *,
                    weights_free: bool = False, starts: Sequence[SphereConfig] = (),
                    callback: Callable | None = None) -> OptimizationResult:
    """Minimize ``sum_ij w_i w_j F(<x_i, x_j>)`` over N points on ``S^d``.

    Points are the rows of an N x (d+1) factor and are renormalized after
    every step, so the Gram matrix keeps unit diagonal and rank <= d+1
    without any explicit constraint. Weights stay uniform unless
    ``weights_free`` is set.
    """
    cfg = cfg or OptimizerConfig()
    if N < 1 or d < 1:
        raise ValueError("need N >= 1 and d >= 1")
    fv, fd = _potential_pair(F)
    jobs = []
    for r in range(cfg.restarts):
        rng = _rng(cfg.seed, r)
        X = rng.standard_normal((N, d + 1))
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        w = rng.dirichlet(np.ones(N)) if weights_free else np.full(N, 1.0 / N)
        jobs.append((r, "random", X, w))
    for j, cfg0 in enumerate(starts):
        if cfg0.sphere_dim != d or cfg0.size != N:
            raise ValueError("warm start must have N points on S^d")
        w = np.array(cfg0.weights) if weights_free else np.full(cfg0.size, 1.0 / cfg0.size)
        jobs.append((cfg.restarts + j, "warm", np.array(cfg0.points), w))

    descent = _SphereDescent(fv, fd, cfg, free_weights=weights_free)

    def one(job):
        r, label, X, w = job
        cb = _bind(callback, r, cfg.workers)
        X, w, E, gnorm, its = descent.run(X, w, cfg.grad_tol, cfg.max_iters, cb)
        sc = SphereConfig(X, w)
        return OptimizationResult(sc, _sphere_energy(fv, sc.points, sc.weights), gnorm, its, r, label)

    return _best(_map(one, jobs, cfg.workers))


def refine(r: OptimizationResult, f, cfg: OptimizerConfig | None = None, *,
           weights_free: bool | None = None) -> OptimizationResult:
    """Continue local descent from ``r.minimizer`` with a 100x tighter gradient tolerance.

    The returned energy never exceeds ``r.energy``; with a zero iteration
    budget ``r`` itself is returned.
    """
    cfg = cfg or OptimizerConfig()
    if cfg.max_iters == 0:
        return r
    fv, fd = _potential_pair(f)
    m = r.minimizer
    tol = cfg.grad_tol / 100.0
    if isinstance(m, CircleMeasure):
        x, w, _, gnorm, its = _CircleDescent(fv, fd, cfg).run(
            np.array(m.angles), np.array(m.weights), tol, cfg.max_iters)
        new = canonicalize(CircleMeasure(x, w), cfg.merge_tol, cfg.weight_floor)
        E = _circle_energy(fv, new.angles, new.weights)
    else:
        free = bool(weights_free) if weights_free is not None else not np.allclose(
            m.weights, 1.0 / m.size, rtol=0, atol=1e-15)
        X, w, _, gnorm, its = _SphereDescent(fv, fd, cfg, free).run(
            np.array(m.points), np.array(m.weights), tol, cfg.max_iters)
        new = SphereConfig(X, w)
        E = _sphere_energy(fv, new.points, new.weights)
    if E > r.energy:
        return r
    return replace(r, minimizer=new, energy=E, grad_norm=gnorm,
                   iterations=r.iterations + its, label=r.label + "+refine")
