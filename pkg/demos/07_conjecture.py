"""
Ties between sub-sums
=====================

When two genuinely different n-gons share the smallest sub-sum, the
harness minimizes numerically and measures how far each support inner
product lies from a critical point of f. The verdict is evidence, not
proof.
"""

import json

from polyenergy import ChebyshevSeries, OptimizerConfig, conjecture_check

# s(4) = 1 + c_4 and s(6) = 1 + c_6, so c_4 = c_6 forces a tie
f = ChebyshevSeries([1, 0, 1.5, 0, -0.8, 0, -0.8])
rep = conjecture_check(f, OptimizerConfig(restarts=4), n_max=6)
print("minimal sub-sum at n =", rep.subsums.minimizers)
print("verdict:", rep.verdict, "max distance", rep.max_distance)
for run in rep.runs:
    print(run["n_atoms"], "atoms:", round(run["energy"], 8),
          "distances", [round(x, 6) for x in run["distances"]])

# without a tie the hypothesis is not met
print(json.dumps(conjecture_check(ChebyshevSeries([1, 0, 1, 0, -1, 0, 3]), n_max=6).verdict))
