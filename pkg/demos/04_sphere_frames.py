"""
Points on higher spheres
========================

With ``F(t) = t^2`` the minimum over N >= d+1 equal-weight points on
S^d is 1/(d+1), reached by tight frames. Higher even powers need more
points before the frame bound becomes attainable.
"""

import numpy as np

from polyenergy import MonomialPolynomial, OptimizerConfig, gram, minimize_sphere

cfg = OptimizerConfig(restarts=4, seed=2)
t2 = MonomialPolynomial([0, 0, 1])
for d in (1, 2, 3):
    res = minimize_sphere(t2, d + 1, d, cfg)
    print(f"S^{d}: energy {res.energy:.10f}  target {1 / (d + 1):.10f}")

# orthonormal basis recovered: the Gram matrix is the identity up to sign
res = minimize_sphere(t2, 3, 2, cfg)
print(np.round(np.abs(gram(res.minimizer)), 6))

t4 = MonomialPolynomial([0, 0, 0, 0, 1])
for n in (4, 6, 8):
    res = minimize_sphere(t4, n, 2, cfg)
    print(f"t^4, {n} points on S^2: {res.energy:.6f}")
print("t^4 averaged over S^2 is", 1 / 5)
