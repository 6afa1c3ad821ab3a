"""Closed-form and large-sample expressions for the prior data size.

Notation: ``m`` nominal prior size, ``k`` likelihood size,
``r = k / (k + m)``, ``delta_sq`` the squared standardised distance between
prior centrality and the true mean of T, and ``c`` the weight
``u'^2 s^2 / (u'^2 s^2 + v)`` (1/2 for every conjugate family here).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, SingularDenominator
from .resample import AnalyticCurve


@dataclass(frozen=True)
class AsymptoticParams:
    r: float
    delta_sq: float
    c: float = 0.5
    m: float | None = None
    k: float | None = None

    def __post_init__(self):
        if not 0 < self.r < 1:
            raise DomainError(f"r must lie strictly in (0, 1), got {self.r}")
        if self.delta_sq < 0:
            raise DomainError("delta_sq must be >= 0")
        if not 0 < self.c <= 1:
            raise DomainError("c must lie in (0, 1]")
        if self.m is not None and self.k is not None:
            if abs(self.r - self.k / (self.k + self.m)) > 1e-12:
                raise DomainError("r is inconsistent with k / (k + m)")

    @classmethod
    def from_sizes(cls, m, k, delta_sq, c=0.5):
        return cls(k / (k + m), delta_sq, c, m, k)


def _bracket(r, delta_sq, c):
    bracket = r * (1 + c * (1 - r) * (delta_sq - 1))
    if not bracket > 0:
        raise SingularDenominator(
            f"r[1 + c(1-r)(delta^2-1)] = {bracket} <= 0 for r={r}, delta^2={delta_sq}, c={c}")
    return bracket


def asymptotic_r(p: AsymptoticParams):
    """Limiting relative prior size M(k)/k."""
    return 1 / _bracket(p.r, p.delta_sq, p.c) - 1


def prior_size_factor(r, delta_sq, c=0.5):
    """Ratio of the actual to the nominal prior size, so that R = factor * m / k."""
    _bracket(r, delta_sq, c)
    x = c * (delta_sq - 1)
    return 1 - x / (1 + (1 - r) * x)


def super_info_factor(r, c=0.5):
    """Prior size inflation when the prior is centred exactly at the truth.

    Equals ``1 + 1/(1 + r)`` for ``c = 1/2``, which lies in [1.5, 2].
    """
    if not (0 < r <= 1 and 0 < c < 1 and (1 - r) * c < 1):
        raise DomainError(f"super_info_factor needs r in (0, 1], c in (0, 1); got r={r}, c={c}")
    return 1 + c / (1 - (1 - r) * c)


def lemma1_constants(p: AsymptoticParams, u_prime, v_val, sigma_t_sq):
    """Leading coefficients ``(alpha, beta)`` of U(k) ~ alpha/k and U_b(k) ~ beta/k."""
    s = u_prime**2 * sigma_t_sq
    alpha = p.r * (v_val + s * (p.r + (1 - p.r) * p.delta_sq))
    beta = v_val + s
    return alpha, beta


def normal_exact_m(k, gamma, delta_sq):
    """Prior data size for the normal model with known variance.

    Solves the matching equation on the limiting uncertainty curves; the
    variance ratio ``gamma`` plays the role of the nominal size.
    """
    if not k > 0 or gamma < 0:
        raise DomainError("need k > 0 and gamma >= 0")
    r = k / (gamma + k)
    return k * (1 / _bracket(r, delta_sq, 0.5) - 1)


def normal_analytic_u(k, gamma, delta_sq, sigma_sq=1.0):
    """Limiting average uncertainty ``(u_prior, u_base)`` for the normal model."""
    if not k > 0:
        raise DomainError("k must be positive")
    return _u_prior(k, gamma, delta_sq, sigma_sq), 2 * sigma_sq / k


def _u_prior(k, gamma, delta_sq, sigma_sq):
    shrink = 1 / (gamma + k)
    return sigma_sq * (shrink + gamma * delta_sq * shrink**2 + k * shrink**2)


def normal_analytic_curves(gamma, delta_sq, sigma_sq=1.0, lo=1e-3, hi=1e4):
    """``(prior, baseline)`` :class:`AnalyticCurve` pair for the normal model.

    Both curve functions accept arrays.
    """
    prior = AnalyticCurve(lambda k: _u_prior(k, gamma, delta_sq, sigma_sq), lo, hi,
                          label=f"normal-analytic(gamma={gamma:g},delta_sq={delta_sq:g})")
    base = AnalyticCurve(lambda k: 2 * sigma_sq / k, lo, hi, label="normal-analytic-baseline")
    return prior, base
