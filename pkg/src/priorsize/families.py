"""Conjugate likelihood/prior pairs with closed-form posterior moments.

Six one-parameter families are supported, all with sufficient statistic
``T(x) = x`` so a subsample is summarised by its size ``k`` and mean
``t_bar``:

==========  =====================  =================  ================
kind        likelihood             prior on theta     baseline
==========  =====================  =================  ================
normal      N(theta, sigma^2)      N(mu, var)         flat
exp_rate    Exp(rate=theta)        Gamma(alpha, beta) alpha, beta -> 0
exp_mean    Exp(mean=theta)        InvGamma(a, b)     alpha, beta -> 0
bernoulli   Bernoulli(theta)       Beta(alpha, beta)  alpha, beta -> 0
poisson     Poisson(theta)         Gamma(alpha, beta) alpha, beta -> 0
geometric   Geometric(theta) >= 1  Beta(alpha, beta)  alpha, beta -> 0
==========  =====================  =================  ================

The baseline posterior moments are the limits of the conjugate formulas as
the hyperparameters go to zero, so one set of formulas serves both.  The
inverse-gamma family also accepts a non-zero baseline shape (``alpha_b``,
typically 2) for which the baseline variance exists at every ``k >= 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import NamedTuple

import numpy as np

from .errors import (
    BaselineHasNoCentrality,
    DegenerateStatistic,
    DomainError,
    InsufficientData,
)


class FamilyKind(str, Enum):
    NORMAL = "normal"
    EXP_RATE = "exp_rate"
    EXP_MEAN = "exp_mean"
    BERNOULLI = "bernoulli"
    POISSON = "poisson"
    GEOMETRIC = "geometric"


@dataclass(frozen=True)
class FamilySpec:
    """A prior (or baseline) within one of the conjugate families.

    For ``normal`` the prior is ``N(mu, var)`` and ``sigma_sq`` is the known
    data variance.  For the other families ``alpha`` and ``beta`` are the
    gamma/beta/inverse-gamma hyperparameters.  Use the module-level
    constructors rather than building instances directly.
    """

    kind: FamilyKind
    mu: float = 0.0
    var: float = math.inf
    sigma_sq: float = 1.0
    alpha: float = 0.0
    beta: float = 0.0
    is_baseline: bool = False
    # inverse-gamma only: hyperparameters of the associated baseline
    alpha_b: float = 0.0
    beta_b: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", FamilyKind(self.kind))
        if self.kind is FamilyKind.NORMAL:
            if not self.sigma_sq > 0:
                raise DomainError("normal family needs sigma_sq > 0")
            if not self.is_baseline and not (0 < self.var < math.inf):
                raise DomainError("normal prior needs 0 < var < inf")
            return
        if self.is_baseline:
            if self.kind is FamilyKind.EXP_MEAN:
                if self.alpha < 0 or self.beta < 0:
                    raise DomainError("baseline hyperparameters must be >= 0")
            elif self.alpha != 0 or self.beta != 0:
                raise DomainError(f"{self.kind.value} baseline has alpha = beta = 0")
            return
        if not (self.alpha > 0 and self.beta > 0):
            raise DomainError("prior hyperparameters must be strictly positive")
        if self.kind is FamilyKind.EXP_MEAN and self.alpha <= self.alpha_b:
            raise DomainError("inverse-gamma prior shape must exceed the baseline shape")

    @property
    def label(self):
        if self.kind is FamilyKind.NORMAL:
            if self.is_baseline:
                return "normal-baseline"
            return f"normal(mu={self.mu:g},var={self.var:g})"
        if self.is_baseline:
            return f"{self.kind.value}-baseline"
        return f"{self.kind.value}(alpha={self.alpha:g},beta={self.beta:g})"

    def baseline(self):
        """The designated baseline member of this spec's family."""
        if self.is_baseline:
            return self
        if self.kind is FamilyKind.NORMAL:
            return replace(self, mu=0.0, var=math.inf, is_baseline=True)
        if self.kind is FamilyKind.EXP_MEAN:
            return replace(self, alpha=self.alpha_b, beta=self.beta_b, is_baseline=True)
        return replace(self, alpha=0.0, beta=0.0, is_baseline=True)


# -- constructors ---------------------------------------------------------

def normal(mu, var, sigma_sq=1.0):
    return FamilySpec(FamilyKind.NORMAL, mu=mu, var=var, sigma_sq=sigma_sq)


def normal_baseline(sigma_sq=1.0):
    return FamilySpec(FamilyKind.NORMAL, sigma_sq=sigma_sq, is_baseline=True)


def exp_rate_gamma(alpha, beta):
    return FamilySpec(FamilyKind.EXP_RATE, alpha=alpha, beta=beta)


def exp_mean_invgamma(alpha, beta, alpha_b=0.0, beta_b=0.0):
    """Inverse-gamma prior on the exponential mean.

    ``alpha_b``/``beta_b`` select the baseline; the default (0, 0) is the
    Jeffreys limit, ``alpha_b=2`` the alternative with finite variance.
    """
    return FamilySpec(FamilyKind.EXP_MEAN, alpha=alpha, beta=beta, alpha_b=alpha_b, beta_b=beta_b)


def bernoulli_beta(alpha, beta):
    return FamilySpec(FamilyKind.BERNOULLI, alpha=alpha, beta=beta)


def poisson_gamma(alpha, beta):
    return FamilySpec(FamilyKind.POISSON, alpha=alpha, beta=beta)


def geometric_beta(alpha, beta):
    return FamilySpec(FamilyKind.GEOMETRIC, alpha=alpha, beta=beta)


def baseline(kind, sigma_sq=1.0, alpha_b=0.0, beta_b=0.0):
    kind = FamilyKind(kind)
    if kind is FamilyKind.NORMAL:
        return normal_baseline(sigma_sq)
    if kind is FamilyKind.EXP_MEAN:
        return FamilySpec(kind, alpha=alpha_b, beta=beta_b, alpha_b=alpha_b,
                          beta_b=beta_b, is_baseline=True)
    return FamilySpec(kind, is_baseline=True)


# -- summaries ------------------------------------------------------------

class SufficientSummary(NamedTuple):
    k: int
    t_bar: float


class PosteriorSummary(NamedTuple):
    mean: float
    variance: float
    degenerate: bool


def min_k(spec):
    """Smallest subsample size for which the posterior variance is finite."""
    if spec.kind is FamilyKind.EXP_MEAN:
        # variance needs alpha + k > 2
        return max(1, math.floor(2.0 - spec.alpha) + 1)
    return 1


def posterior_moments(spec, k, t_bar):
    """Vectorised posterior mean, variance and degeneracy flags.

    ``t_bar`` may be a scalar or an array of subsample means, all of size
    ``k``.  Returns ``(mean, variance, degenerate)`` arrays.
    """
    if k < min_k(spec):
        raise InsufficientData(f"{spec.label} needs k >= {min_k(spec)}, got k={k}")
    t = np.asarray(t_bar, dtype=float)
    kind = spec.kind
    a, b = spec.alpha, spec.beta
    with np.errstate(divide="ignore", invalid="ignore"):
        if kind is FamilyKind.NORMAL:
            if spec.is_baseline:
                mean = t.copy()
                var = np.full_like(t, spec.sigma_sq / k)
            else:
                gamma = spec.sigma_sq / spec.var
                shrink = 1.0 / (gamma + k)
                mean = shrink * (gamma * spec.mu + k * t)
                var = np.full_like(t, shrink * spec.sigma_sq)
        elif kind is FamilyKind.EXP_RATE:
            denom = b + k * t
            _check_nonzero(denom, spec)
            mean = (a + k) / denom
            var = (a + k) / denom**2
        elif kind is FamilyKind.EXP_MEAN:
            num = b + k * t
            mean = num / (a + k - 1)
            var = num**2 / ((a + k - 1) ** 2 * (a + k - 2))
        elif kind is FamilyKind.BERNOULLI:
            tot = a + b + k
            mean = (a + k * t) / tot
            var = (a + k * t) * (b + k - k * t) / (tot**2 * (tot + 1))
        elif kind is FamilyKind.POISSON:
            mean = (a + k * t) / (b + k)
            var = (a + k * t) / (b + k) ** 2
        elif kind is FamilyKind.GEOMETRIC:
            tot = a + b + k * t
            _check_nonzero(tot, spec)
            mean = (a + k) / tot
            var = (a + k) * (b + k * t - k) / (tot**2 * (tot + 1))
        else:  # pragma: no cover
            raise AssertionError(kind)
    # clip float round-off below zero at the support boundary
    var = np.maximum(var, 0.0)
    return mean, var, var == 0.0


def _check_nonzero(denom, spec):
    if np.any(denom == 0):
        raise DegenerateStatistic(f"{spec.label}: posterior formula divides by zero")


def posterior_summary(spec, s):
    """Exact conjugate posterior mean and variance for one subsample."""
    k, t_bar = s
    mean, var, degenerate = posterior_moments(spec, k, t_bar)
    return PosteriorSummary(float(mean), float(var), bool(degenerate))


def nominal_prior_size(spec):
    """Number of observations the prior nominally represents (0 for a baseline)."""
    if spec.is_baseline:
        return 0.0
    kind = spec.kind
    if kind is FamilyKind.NORMAL:
        return spec.sigma_sq / spec.var
    if kind is FamilyKind.BERNOULLI:
        return spec.alpha + spec.beta
    if kind is FamilyKind.POISSON:
        return spec.beta
    if kind is FamilyKind.EXP_MEAN:
        return spec.alpha - spec.alpha_b
    return spec.alpha


def prior_centrality(spec):
    """Location of the prior on the scale of the sufficient-statistic mean."""
    if spec.is_baseline:
        raise BaselineHasNoCentrality(spec.label)
    kind, a, b = spec.kind, spec.alpha, spec.beta
    if kind is FamilyKind.NORMAL:
        return spec.mu
    if kind in (FamilyKind.EXP_RATE, FamilyKind.EXP_MEAN):
        return b / a
    if kind is FamilyKind.BERNOULLI:
        return a / (a + b)
    if kind is FamilyKind.POISSON:
        return a / b
    return (a + b) / a


# -- mean/variance functions ------------------------------------------------

def _kind(spec_or_kind):
    if isinstance(spec_or_kind, FamilySpec):
        return spec_or_kind.kind
    return FamilyKind(spec_or_kind)


def _in_domain(kind, t):
    if kind is FamilyKind.NORMAL:
        return math.isfinite(t)
    if kind in (FamilyKind.EXP_RATE, FamilyKind.EXP_MEAN):
        return 0 < t < math.inf
    if kind is FamilyKind.BERNOULLI:
        return 0 <= t <= 1
    if kind is FamilyKind.POISSON:
        return 0 <= t < math.inf
    return 1 <= t < math.inf


def uv_functions(spec, at, sigma_sq=None):
    """Return ``(u, u', v)`` at ``at`` for the family of ``spec``.

    ``u`` maps the sufficient-statistic mean to the parameter and ``v`` is
    the variance function of the conjugate prior.  ``spec`` may also be a
    family kind, in which case the normal ``sigma_sq`` defaults to 1.
    """
    kind = _kind(spec)
    t = float(at)
    if not _in_domain(kind, t):
        raise DomainError(f"{kind.value}: {t} outside the domain of u")
    if kind is FamilyKind.NORMAL:
        if sigma_sq is None:
            sigma_sq = spec.sigma_sq if isinstance(spec, FamilySpec) else 1.0
        return t, 1.0, float(sigma_sq)
    if kind is FamilyKind.EXP_RATE:
        return 1 / t, -1 / t**2, 1 / t**2
    if kind is FamilyKind.EXP_MEAN:
        return t, 1.0, t**2
    if kind is FamilyKind.BERNOULLI:
        return t, 1.0, t * (1 - t)
    if kind is FamilyKind.POISSON:
        return t, 1.0, t
    return 1 / t, -1 / t**2, (t - 1) / t**3


def sampling_variance(spec, mu_t, sigma_sq=None):
    """Variance of ``T(X)`` when its mean is ``mu_t``."""
    kind = _kind(spec)
    if not _in_domain(kind, mu_t):
        raise DomainError(f"{kind.value}: {mu_t} outside the parameter space")
    if kind is FamilyKind.NORMAL:
        if sigma_sq is None:
            sigma_sq = spec.sigma_sq if isinstance(spec, FamilySpec) else 1.0
        return float(sigma_sq)
    if kind in (FamilyKind.EXP_RATE, FamilyKind.EXP_MEAN):
        return mu_t**2
    if kind is FamilyKind.BERNOULLI:
        return mu_t * (1 - mu_t)
    if kind is FamilyKind.POISSON:
        return mu_t
    # geometric on {1, 2, ...}: p = 1/mu, var = (1 - p)/p^2
    return mu_t * (mu_t - 1)


def c_constant(spec, mu_t, sigma_sq=None):
    """The weight u'^2 s^2 / (u'^2 s^2 + v) evaluated at ``mu_t``."""
    _, du, v = uv_functions(spec, mu_t, sigma_sq)
    s = du**2 * sampling_variance(spec, mu_t, sigma_sq)
    return s / (s + v)


def check_support(kind, x):
    """Boolean mask of observations inside the family's sample space."""
    kind = _kind(kind)
    x = np.asarray(x, dtype=float)
    finite = np.isfinite(x)
    if kind is FamilyKind.NORMAL:
        return finite
    if kind in (FamilyKind.EXP_RATE, FamilyKind.EXP_MEAN):
        return finite & (x > 0)
    if kind is FamilyKind.BERNOULLI:
        return (x == 0) | (x == 1)
    integer = finite & (np.floor(x) == x)
    if kind is FamilyKind.POISSON:
        return integer & (x >= 0)
    return integer & (x >= 1)
