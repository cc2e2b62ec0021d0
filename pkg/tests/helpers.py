import numpy as np

from polyenergy.basis import ChebyshevSeries
from polyenergy.measures import CircleMeasure, SphereConfig


def random_series(rng, degree, scale=1.0):
    return ChebyshevSeries(rng.uniform(-scale, scale, int(degree) + 1))


def random_circle(rng, n):
    w = rng.dirichlet(np.ones(int(n)))
    w = w / w.sum()
    return CircleMeasure(rng.uniform(-np.pi, np.pi, int(n)), w)


def random_sphere(rng, n, d, uniform=False):
    X = rng.standard_normal((n, d + 1))
    w = None if uniform else rng.dirichlet(np.ones(n))
    if w is not None:
        w = w / w.sum()
    return SphereConfig.from_vectors(X, w)


def rel_err(a, b):
    a, b = np.ravel(a), np.ravel(b)
    return float(np.linalg.norm(a - b) / max(np.linalg.norm(b), 1e-300))


def max_abs_inner(mu):
    if isinstance(mu, CircleMeasure):
        mu = mu.to_sphere()
    Q = mu.points @ mu.points.T
    np.fill_diagonal(Q, 0.0)
    return float(np.max(np.abs(Q))) if Q.size > 1 else 0.0
