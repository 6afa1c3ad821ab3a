"""Simulation scenarios for the normal and exponential studies.

Each :class:`Scenario` fixes a true parameter, a prior, a subsampling plan
and a seed.  Data come from a stream separate from the subsampling streams,
so changing the plan never changes the dataset.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from . import families as F
from .errors import DomainError
from .families import FamilyKind, FamilySpec, nominal_prior_size, prior_centrality
from .matching import DiagnosticReport, Thresholds, Verdict, classify, slope_regression
from .pipeline import run_diagnostics
from .resample import SubsamplePlan
from .uncertainty import Measure, UncertaintyConfig

# spawn-key tag of the data stream (subsampling uses tag 1)
_DATA_TAG = 0


@dataclass(frozen=True)
class Scenario:
    """One simulation setting.

    ``true_param`` is the true value of the parameter the prior is placed
    on: the normal mean, the exponential rate or mean, a probability, etc.
    """

    name: str
    spec: FamilySpec
    true_param: float
    n: int = 1000
    plan: SubsamplePlan = field(default_factory=lambda: SubsamplePlan(K=20))
    cfg: UncertaintyConfig = UncertaintyConfig()
    k0: int = 6
    seed: int = 0

    def __post_init__(self):
        if not np.isfinite(self.true_param):
            raise DomainError("true_param must be finite")
        kind = self.spec.kind
        ok = {
            FamilyKind.NORMAL: True,
            FamilyKind.EXP_RATE: self.true_param > 0,
            FamilyKind.EXP_MEAN: self.true_param > 0,
            FamilyKind.BERNOULLI: 0 < self.true_param < 1,
            FamilyKind.POISSON: self.true_param > 0,
            FamilyKind.GEOMETRIC: 0 < self.true_param <= 1,
        }[kind]
        if not ok:
            raise DomainError(f"true_param {self.true_param} outside the {kind.value} parameter space")

    def with_seed(self, seed):
        return replace(self, seed=seed, plan=replace(self.plan, seed=seed))


def true_mean_of_t(sc):
    """Mean of the sufficient statistic under the true parameter."""
    kind, p = sc.spec.kind, sc.true_param
    if kind in (FamilyKind.EXP_RATE, FamilyKind.GEOMETRIC):
        return 1 / p
    return p


def delta_sq(sc):
    """Squared standardised distance between prior centrality and the truth."""
    mu_t = true_mean_of_t(sc)
    var_t = F.sampling_variance(sc.spec, mu_t)
    return nominal_prior_size(sc.spec) * (prior_centrality(sc.spec) - mu_t) ** 2 / var_t


def generate_data(sc):
    rng = np.random.default_rng(np.random.SeedSequence(sc.seed, spawn_key=(_DATA_TAG,)))
    kind, p, n = sc.spec.kind, sc.true_param, sc.n
    if kind is FamilyKind.NORMAL:
        return p + math.sqrt(sc.spec.sigma_sq) * rng.standard_normal(n)
    if kind in (FamilyKind.EXP_RATE, FamilyKind.EXP_MEAN):
        mean = 1 / p if kind is FamilyKind.EXP_RATE else p
        # inverse CDF; 1 - U lies in (0, 1]
        return -mean * np.log1p(-rng.random(n))
    if kind is FamilyKind.BERNOULLI:
        return (rng.random(n) < p).astype(float)
    if kind is FamilyKind.POISSON:
        return rng.poisson(p, n).astype(float)
    return rng.geometric(p, n).astype(float)


def data_digest(x):
    return hashlib.sha256(np.ascontiguousarray(x, dtype="<f8").tobytes()).hexdigest()


class ScenarioResult(NamedTuple):
    scenario: Scenario
    report: DiagnosticReport
    digest: str

    @property
    def u_prior(self):
        return self.report.u_prior

    @property
    def u_base(self):
        return self.report.u_base


def run_scenario(sc):
    """Generate the dataset and run the full diagnostic on it."""
    x = generate_data(sc)
    report = run_diagnostics(x, sc.spec, (sc.cfg,), sc.plan, k0=sc.k0)[0]
    return ScenarioResult(sc, report, data_digest(x))


def run_decomposition_study(sc):
    """``(variance_only, bias_only)`` reports on one dataset and one set of subsamples."""
    x = generate_data(sc)
    cfgs = (replace(sc.cfg, measure=Measure.VARIANCE_ONLY), replace(sc.cfg, measure=Measure.BIAS_ONLY))
    var_report, bias_report = run_diagnostics(x, sc.spec, cfgs, sc.plan, k0=sc.k0)
    return var_report, bias_report


def summarize_tables(results):
    """Table rows ``(family, hyperparameters, S_K, R(K))`` from scenario results."""
    rows = []
    for res in results:
        spec, rep = res.scenario.spec, res.report
        row = {"scenario": res.scenario.name, "family": spec.kind.value}
        if spec.kind is FamilyKind.NORMAL:
            row.update(mu_pi=spec.mu, var_pi=spec.var)
        else:
            row.update(alpha=spec.alpha, beta=spec.beta)
        row.update(slope=rep.slope, r_hat_K=rep.r_at(rep.K) if rep.K else math.nan, K=rep.K)
        rows.append(row)
    return rows


@dataclass(frozen=True)
class EnsembleSummary:
    scenario: Scenario
    seeds: tuple
    slopes: np.ndarray
    r_hat_K: np.ndarray
    mean_m_curve: tuple
    verdict: Verdict | None
    reports: tuple = field(default=(), repr=False)

    @property
    def mean_slope(self):
        return float(np.mean(self.slopes))

    @property
    def mean_r_hat_K(self):
        return float(np.mean(self.r_hat_K))

    def mean_m(self, k_lo, k_hi):
        """Ensemble-mean M(k) averaged over ``k_lo <= k <= k_hi``."""
        vals = [m for k, m in self.mean_m_curve if k_lo <= k <= k_hi]
        return float(np.mean(vals))


def run_ensemble(sc, seeds, thresholds=Thresholds()):
    """Run ``sc`` under several seeds and average the M(k) curves.

    The verdict is that of the ensemble-mean curve.  Seeds whose reports
    miss M(k) at some ``k`` contribute only where it exists.
    """
    results = [run_scenario(sc.with_seed(s)) for s in seeds]
    K = max(r.report.K for r in results)
    slopes = np.array([r.report.slope for r in results])
    r_K = np.array([r.report.r_at(K) for r in results])
    by_k = {}
    for r in results:
        for k, m in r.report.m_hat:
            by_k.setdefault(k, []).append(m)
    curve = tuple((k, float(np.mean(v))) for k, v in sorted(by_k.items()))
    slope = slope_regression(curve, sc.k0)
    verdict = classify(slope, curve, sc.k0, nominal_prior_size(sc.spec), thresholds)
    return EnsembleSummary(sc, tuple(seeds), slopes, r_K, curve, verdict,
                           tuple(r.report for r in results))


# -- published settings --------------------------------------------------------

def _plan():
    return SubsamplePlan(K=20, budget=100_000)


NORMAL_STUDY = tuple(
    Scenario(f"normal-mu{mu:g}", F.normal(mu, 0.25), 1.0, plan=_plan())
    for mu in (1.0, 1.5, 2.0, 3.0)
)

_EXP_PRIORS = ((20.0, 10.0), (5.0, 5.0), (0.1, 0.5), (45.0, 15.0))

GAMMA_STUDY = tuple(
    Scenario(f"gamma-a{a:g}-b{b:g}", F.exp_rate_gamma(a, b), 2.0, plan=_plan())
    for a, b in _EXP_PRIORS
)

INVGAMMA_STUDY = tuple(
    Scenario(f"invgamma-a{a:g}-b{b:g}", F.exp_mean_invgamma(a, b), 0.5, plan=_plan())
    for a, b in _EXP_PRIORS
)

SCENARIOS = {sc.name: sc for sc in NORMAL_STUDY + GAMMA_STUDY + INVGAMMA_STUDY}
