"""
A worked example: f = T_0 + T_2 + T_4 + 3 T_6
=============================================

The energy of the uniform n-gon equals the sum of the Chebyshev
coefficients whose index is a multiple of n. Reading this off for the
example and comparing with a two-point measure and with numerical
minimizers settles which configuration is best.

One published reading of this example has the antipodal pair and the
hexagon tie for the minimum. The sub-sum rule gives s(2) = 6 and
s(6) = 4, so that reading does not survive the computation below.
"""

from polyenergy import (
    ChebyshevSeries,
    OptimizerConfig,
    best_ngon,
    critical_points,
    minimize_circle,
    two_point_optimum,
)

f = ChebyshevSeries([1, 0, 1, 0, 1, 0, 3])

rep = best_ngon(f, 12)
print(rep.table_csv())
print("smallest sub-sum", rep.minimum, "at n =", rep.minimizers)

tp = two_point_optimum(f)
print(f"two-point: t* = {tp.t:.6f}, energy {tp.energy:.6f}")
print("critical points:", [round(c, 6) for c in critical_points(f)])
print("two-point beats every n-gon:", tp.energy < rep.minimum)

res = minimize_circle(f, 12, OptimizerConfig(restarts=8))
print(f"numerical minimum {res.energy:.8f} with {res.minimizer.size} atoms ({res.label})")

s = dict(zip(rep.n_values, rep.sums))
tie = s[2] == s[6] == rep.minimum
print("antipodal/hexagon tie:", "confirmed" if tie else "contradicted",
      f"(s(2) = {s[2]:g}, s(6) = {s[6]:g}, minimum {rep.minimum:g})")
