"""
Two routes to the same limit
============================

``t^2 + alpha T_2(t)^2`` as alpha -> 0 and ``|t|^p`` as p -> 2 both
approach the frame potential t^2. The sweeps warm-start each step
from the previous minimizer and check every circle minimizer against
the Toeplitz test.
"""

from polyenergy import OptimizerConfig, alpha_sweep, compare_minimizers, p_sweep

cfg = OptimizerConfig(restarts=4, seed=3)
alphas = alpha_sweep(1, [1, 0.1, 0.01, 0], cfg=cfg)
ps = p_sweep(1, [1.5, 1.9, 1.99, 2], cfg=cfg)

print("alpha    energy      atoms  psd")
for r in alphas:
    print(f"{r.parameter:<8g} {r.energy:.8f}  {r.support_size:>5}  {r.psd_ok}")
print("p        energy      atoms  psd")
for r in ps:
    print(f"{r.parameter:<8g} {r.energy:.8f}  {r.support_size:>5}  {r.psd_ok}")

# same energy, but not necessarily the same configuration
print("profile distance at the limits:", compare_minimizers(alphas[0], ps[-1]))
