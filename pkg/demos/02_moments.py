"""
Trigonometric moments and Toeplitz forms
========================================

For a probability measure on the circle the energy of ``sum c_k T_k``
depends only on the moments ``nu_k``: it equals ``c_0 + sum c_k |nu_k|^2``.
Moments of real measures always give a positive semidefinite Toeplitz
matrix, which is how candidate moment vectors are screened.
"""

import numpy as np

from polyenergy import (
    ChebyshevSeries,
    CircleMeasure,
    circle_energy,
    is_psd,
    moment_energy,
    moments_of,
    toeplitz,
)

rng = np.random.default_rng(0)
mu = CircleMeasure(rng.uniform(-np.pi, np.pi, 5), rng.dirichlet(np.ones(5)))
f = ChebyshevSeries(rng.uniform(-1, 1, 9))

nu = moments_of(mu, f.degree)
print("|nu_k|:", np.round(np.abs(nu.values), 4))
print("double sum     :", circle_energy(f, mu))
print("moment formula :", moment_energy(f, nu))

# the square's moments are 1 at multiples of 4 and 0 elsewhere
print("square:", np.round(moments_of(CircleMeasure.uniform(4), 8).values.real, 12))

res = is_psd(toeplitz(moments_of(mu, 10)))
print("random measure PSD:", res.psd, "min eigenvalue", f"{res.min_eigenvalue:.2e}")

# |nu_1| > 1 is impossible for a probability measure, and the test says so
bad = is_psd(toeplitz([1.0, 1.2]))
print("nu = (1, 1.2) PSD:", bad.psd, "witness", np.round(bad.witness, 4))
