"""Prior data size diagnostics for conjugate Bayesian models.

Measures how many observations a prior is worth relative to a baseline
prior, by matching average posterior uncertainty curves estimated from
subsamples, and flags prior-likelihood conflict from how that size changes
with the amount of data.
"""

from .asymptotics import (
    AsymptoticParams,
    asymptotic_r,
    lemma1_constants,
    normal_analytic_curves,
    normal_analytic_u,
    normal_exact_m,
    prior_size_factor,
    super_info_factor,
)
from .families import (
    FamilyKind,
    FamilySpec,
    PosteriorSummary,
    SufficientSummary,
    nominal_prior_size,
    posterior_summary,
    prior_centrality,
    uv_functions,
)
from .matching import (
    DiagnosticReport,
    Thresholds,
    Verdict,
    check_additivity_identity,
    check_transpose_identity,
    classify,
    diagnose,
    interpolate,
    slope_regression,
    solve_m,
)
from .pipeline import run_diagnostic, run_diagnostics
from .resample import AnalyticCurve, SubsamplePlan, UCurve, draw_subsamples, estimate_u_curve
from .uncertainty import Aggregator, Measure, UncertaintyConfig, aggregate, d_measure, estimate_theta0

__version__ = "0.1.0"
