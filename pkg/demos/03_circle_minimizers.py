"""
Minimizing measures on the circle
=================================

Multi-start projected descent over atom angles and weights. Regular
polygons and the best two-point measure are always tried as extra
starts, so the answer is never worse than those closed forms.
"""

from polyenergy import ChebyshevSeries, OptimizerConfig, minimize_circle, moments_of, is_psd, toeplitz

cfg = OptimizerConfig(restarts=8, seed=1)

# t^2 = (T_0 + T_2)/2: any tight frame reaches 1/2
res = minimize_circle(ChebyshevSeries([0.5, 0, 0.5]), 6, cfg)
print("t^2 energy:", res.energy, "support", res.minimizer.size)

# a potential with a negative top coefficient
f = ChebyshevSeries([0.2, 0.1, -0.7, 0.3, 0.5])
res = minimize_circle(f, 8, cfg)
print("energy", round(res.energy, 8), "from", res.label, "restart", res.restart_index)
print("angles ", res.minimizer.angles.round(4))
print("weights", res.minimizer.weights.round(4))

nu = moments_of(res.minimizer, 10)
print("Toeplitz check:", is_psd(toeplitz(nu)).psd)
