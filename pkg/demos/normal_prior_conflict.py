"""
How many observations is a normal prior worth?
==============================================

Four priors of equal width are placed at increasing distances from the
true mean.  For each one the prior data size M(k) is estimated from
subsamples of a single dataset and the slope of M(k) is used to judge
whether prior and data disagree.
"""

import numpy as np

from priorsize import SubsamplePlan, run_diagnostic
from priorsize import families as F

# one dataset of n = 1000 draws from N(1, 1)
rng = np.random.default_rng(1)
x = rng.normal(1.0, 1.0, size=1000)

# a smaller budget than the full study keeps this quick
plan = SubsamplePlan(K=20, budget=20_000, seed=0)

print(f"{'prior mean':>10} {'M(6)':>7} {'M(20)':>7} {'slope':>7}  verdict")
for mu in (1.0, 1.5, 2.0, 3.0):
    # variance 0.25 with sigma^2 = 1 gives a nominal size of 4 observations
    rep = run_diagnostic(x, F.normal(mu, 0.25), plan=plan, k0=6)
    m = dict(rep.m_hat)
    print(f"{mu:>10.1f} {m[6]:>7.2f} {m[20]:>7.2f} {rep.slope:>7.3f}  {rep.verdict.value}")

# A prior one prior-standard-deviation away from the truth is worth about its
# nominal 4 observations at every k.  A prior centred on the truth is worth
# more than that, and far-off priors lose value as k grows, ending up
# worth a negative number of observations.
