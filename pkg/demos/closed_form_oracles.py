"""
Closed forms for the prior data size
====================================

For the normal model with known variance the average posterior uncertainty
curves have limiting closed forms, so M(k) can be solved exactly.  The
general large-sample formula reduces to the same answer.
"""

import numpy as np

from priorsize import (
    AsymptoticParams,
    asymptotic_r,
    normal_analytic_curves,
    normal_exact_m,
    solve_m,
    super_info_factor,
)

gamma = 4.0  # nominal prior size sigma^2 / sigma_pi^2
k = 20
for d2 in (0.0, 1.0, 4.0, 16.0):
    prior, base = normal_analytic_curves(gamma, d2)
    matched = solve_m(prior, base, k)
    r = k / (k + gamma)
    print(f"delta^2={d2:5.1f}  matched M={matched:8.4f}  closed form={normal_exact_m(k, gamma, d2):8.4f}"
          f"  R*k={asymptotic_r(AsymptoticParams(r, d2)) * k:8.4f}")

# A prior sitting exactly on the truth gains a factor between 1.5 and 2
rs = np.linspace(0.01, 1, 5)
print("super-information factor:", np.round([super_info_factor(r) for r in rs], 4))
