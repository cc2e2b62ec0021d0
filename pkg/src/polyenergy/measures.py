"""Discrete measures on the circle and weighted point sets on spheres.

Energies are full double sums ``sum_ij w_i w_j f(<x_i, x_j>)`` including
the diagonal ``i = j`` terms, i.e. the double integral of ``f`` against
``mu x mu``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "CircleMeasure",
    "SphereConfig",
    "wrap_angles",
    "circle_energy",
    "circle_energy_fn",
    "circle_gradient",
    "sphere_energy",
    "sphere_gradient",
    "gram",
    "canonicalize",
    "measure_from_dict",
]

SUM_TOL = 1e-12
NORM_TOL = 1e-12
MERGE_TOL = 1e-6
WEIGHT_FLOOR = 1e-8


def wrap_angles(theta):
    """Map angles into [-pi, pi); in-range values are returned untouched."""
    theta = np.asarray(theta, dtype=float)
    inside = (theta >= -np.pi) & (theta < np.pi)
    return np.where(inside, theta, np.mod(theta + np.pi, 2.0 * np.pi) - np.pi)


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _check_weights(w, n):
    if w.shape != (n,):
        raise ValueError("need one weight per atom")
    if np.any(w < 0.0):
        raise ValueError("weights must be nonnegative")
    if abs(w.sum() - 1.0) > SUM_TOL:
        raise ValueError(f"weights sum to {w.sum()!r}, not 1")


@dataclass(frozen=True, eq=False)
class CircleMeasure:
    """Atomic probability measure on the unit circle, atoms given by angle."""

    angles: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        th = np.array(self.angles, dtype=float, ndmin=1)
        w = np.array(self.weights, dtype=float, ndmin=1)
        if th.ndim != 1 or th.size == 0:
            raise ValueError("need a non-empty 1-d array of angles")
        _check_weights(w, th.size)
        object.__setattr__(self, "angles", _frozen(wrap_angles(th)))
        object.__setattr__(self, "weights", _frozen(w))

    @classmethod
    def uniform(cls, n: int, offset: float = 0.0) -> "CircleMeasure":
        """Equal masses on the vertices of a regular n-gon."""
        return cls(offset + 2.0 * np.pi * np.arange(n) / n, np.full(n, 1.0 / n))

    @classmethod
    def point_mass(cls, theta: float = 0.0) -> "CircleMeasure":
        return cls([theta], [1.0])

    @property
    def size(self) -> int:
        return self.angles.size

    def rotated(self, phi: float) -> "CircleMeasure":
        return CircleMeasure(self.angles + phi, self.weights)

    def to_sphere(self) -> "SphereConfig":
        pts = np.column_stack([np.cos(self.angles), np.sin(self.angles)])
        return SphereConfig(pts, self.weights)

    def to_dict(self) -> dict:
        return {"angles": self.angles.tolist(), "weights": self.weights.tolist()}


@dataclass(frozen=True, eq=False)
class SphereConfig:
    """Weighted unit vectors in R^(d+1), i.e. a measure on ``S^d``.

    ``weights=None`` gives equal masses ``1/N``.
    """

    points: np.ndarray
    weights: np.ndarray | None = None

    def __post_init__(self):
        X = np.array(self.points, dtype=float, ndmin=2)
        if X.ndim != 2 or X.shape[1] < 2:
            raise ValueError("points must be an N x (d+1) array with d >= 1")
        if np.any(np.abs(np.linalg.norm(X, axis=1) - 1.0) > NORM_TOL):
            raise ValueError("points must have unit norm")
        n = X.shape[0]
        w = np.full(n, 1.0 / n) if self.weights is None else np.array(self.weights, dtype=float, ndmin=1)
        _check_weights(w, n)
        object.__setattr__(self, "points", _frozen(X))
        object.__setattr__(self, "weights", _frozen(w))

    @classmethod
    def from_vectors(cls, X, weights=None) -> "SphereConfig":
        X = np.asarray(X, dtype=float)
        return cls(X / np.linalg.norm(X, axis=1, keepdims=True), weights)

    @property
    def sphere_dim(self) -> int:
        return self.points.shape[1] - 1

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def to_dict(self) -> dict:
        return {"points": self.points.tolist(), "weights": self.weights.tolist(),
                "dim": self.sphere_dim}


def measure_from_dict(data: dict):
    if "angles" in data:
        return CircleMeasure(data["angles"], data["weights"])
    cfg = SphereConfig(data["points"], data.get("weights"))
    if "dim" in data and int(data["dim"]) != cfg.sphere_dim:
        raise ValueError("declared dim does not match point coordinates")
    return cfg


# Array-level kernels shared with the optimizer.

def _circle_cos_sin(theta):
    delta = theta[:, None] - theta[None, :]
    return np.clip(np.cos(delta), -1.0, 1.0), np.sin(delta)


def _quad(w, M):
    return float(np.dot(w, M @ w))


def _circle_energy(f, theta, w):
    c, _ = _circle_cos_sin(theta)
    return _quad(w, np.asarray(f(c), dtype=float))


def _circle_grad(f, df, theta, w):
    c, s = _circle_cos_sin(theta)
    F = np.asarray(f(c), dtype=float)
    D = np.asarray(df(c), dtype=float)
    field = -2.0 * ((D * s) @ w)  # per-unit-mass angle derivative
    return w * field, 2.0 * (F @ w), field


def _sphere_energy(F, X, w):
    Q = np.clip(X @ X.T, -1.0, 1.0)
    return _quad(w, np.asarray(F(Q), dtype=float))


def _sphere_grad(F, dF, X, w):
    Q = np.clip(X @ X.T, -1.0, 1.0)
    field = 2.0 * ((np.asarray(dF(Q), dtype=float) * w[None, :]) @ X)
    field -= np.sum(field * X, axis=1, keepdims=True) * X
    return w[:, None] * field, 2.0 * (np.asarray(F(Q), dtype=float) @ w), field


def _vectorized(f):
    def g(t):
        out = np.asarray(f(t), dtype=float)
        if out.shape != np.shape(t):
            out = np.vectorize(f, otypes=[float])(t)
        return out
    return g


def circle_energy(f, mu: CircleMeasure) -> float:
    """Energy ``sum_ij w_i w_j f(cos(theta_i - theta_j))`` of a series potential."""
    return _circle_energy(f, mu.angles, mu.weights)


def circle_energy_fn(f, mu: CircleMeasure) -> float:
    """Same double sum for an arbitrary (possibly scalar-only) function on [-1, 1]."""
    return _circle_energy(_vectorized(f), mu.angles, mu.weights)


def circle_gradient(f, mu: CircleMeasure):
    """Partial derivatives of :func:`circle_energy` w.r.t. angles and weights.

    Returns
    -------
    d_angles, d_weights : ndarray
        ``dE/dtheta_i = -2 w_i sum_j w_j f'(cos d_ij) sin d_ij`` and
        ``dE/dw_i = 2 sum_j w_j f(cos d_ij)``.
    """
    g_th, g_w, _ = _circle_grad(f, f.deriv(), mu.angles, mu.weights)
    return g_th, g_w


def sphere_energy(F, cfg: SphereConfig) -> float:
    return _sphere_energy(F, cfg.points, cfg.weights)


def sphere_gradient(F, cfg: SphereConfig):
    """Tangential point gradient (N x (d+1)) and weight gradient of :func:`sphere_energy`."""
    g_x, g_w, _ = _sphere_grad(F, F.deriv(), cfg.points, cfg.weights)
    return g_x, g_w


def gram(cfg: SphereConfig) -> np.ndarray:
    Q = cfg.points @ cfg.points.T
    np.fill_diagonal(Q, 1.0)
    return 0.5 * (Q + Q.T)


def _merge_once(theta, w, tol):
    order = np.argsort(theta, kind="stable")
    theta, w = theta[order], w[order]
    groups = [[0]]
    for i in range(1, theta.size):
        if theta[i] - theta[groups[-1][-1]] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    if len(groups) > 1 and theta[0] + 2.0 * np.pi - theta[groups[-1][-1]] <= tol:
        groups[0] = groups.pop() + groups[0]
    if len(groups) == theta.size:
        return theta, w, False
    new_t, new_w = [], []
    for g in groups:
        base = theta[g[0]]
        off = wrap_angles(theta[g] - base)
        ww = w[g]
        tot = ww.sum()
        new_t.append(base + (np.dot(ww, off) / tot if tot > 0 else 0.0))
        new_w.append(tot)
    return wrap_angles(new_t), np.array(new_w), True


def canonicalize(mu: CircleMeasure, merge_tol: float = MERGE_TOL,
                 weight_floor: float = WEIGHT_FLOOR) -> CircleMeasure:
    """Canonical representative of a measure modulo rotation.

    Merges atoms closer than ``merge_tol`` (weight-averaged angle), drops
    atoms lighter than ``weight_floor``, rotates the heaviest atom to 0
    and sorts by angle. Among equally heavy atoms the one closest to 0
    is chosen, which keeps the operation idempotent.
    """
    if merge_tol < 0:
        raise ValueError("merge_tol must be nonnegative")
    theta, w = np.array(mu.angles), np.array(mu.weights)
    changed = True
    while changed and theta.size > 1:
        theta, w, changed = _merge_once(theta, w, merge_tol)
    keep = w >= weight_floor
    if not keep.any():
        keep = w == w.max()
    if not keep.all():
        theta, w = theta[keep], w[keep]
        w = w / w.sum()
    heavy = np.flatnonzero(w >= w.max() - 1e-12)
    pick = heavy[np.lexsort((theta[heavy], np.abs(theta[heavy])))[0]]
    theta = wrap_angles(theta - theta[pick])
    theta[pick] = 0.0
    order = np.argsort(theta, kind="stable")
    return CircleMeasure(theta[order], w[order])
