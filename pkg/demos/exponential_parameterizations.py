"""
Same hyperparameters, two parameterizations
===========================================

Exponential data with rate 2 (mean 0.5).  A gamma prior on the rate and an
inverse-gamma prior on the mean share the hyperparameters (20, 10) and so
the same nominal size of 20 observations, yet they are not equally
informative about the data at hand.
"""

import dataclasses

from priorsize.simstudy import SCENARIOS, delta_sq, run_scenario

for name in ("gamma-a20-b10", "invgamma-a20-b10", "gamma-a45-b15", "invgamma-a5-b5"):
    sc = SCENARIOS[name]
    sc = dataclasses.replace(sc, plan=dataclasses.replace(sc.plan, budget=20_000))
    rep = run_scenario(sc).report
    mean_m = sum(m for k, m in rep.m_hat if 6 <= k <= 20) / 15
    print(f"{name:>18}: delta^2={delta_sq(sc):6.2f}  mean M(6..20)={mean_m:6.1f}  "
          f"slope={rep.slope:6.3f}  {rep.verdict.value}")

# The gamma prior on the rate ends up worth more observations than the
# inverse gamma on the mean, even though both are nominally worth 20.
# The strong gamma(45, 15) prior centred at rate 3 conflicts clearly.
