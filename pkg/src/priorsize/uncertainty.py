"""Per-subsample dispersion of a posterior and its aggregation over subsamples."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import EmptyInput, InsufficientData
from .families import PosteriorSummary, posterior_moments

# asymptotic efficiency of the sample median relative to the mean (normal case)
_MEDIAN_SE_FACTOR = math.sqrt(math.pi / 2)


class Measure(str, Enum):
    MSE = "mse"
    VARIANCE_ONLY = "variance"
    BIAS_ONLY = "bias"


class Aggregator(str, Enum):
    MEAN = "mean"
    MEDIAN = "median"


@dataclass(frozen=True)
class UncertaintyConfig:
    measure: Measure = Measure.MSE
    aggregator: Aggregator = Aggregator.MEAN

    def __post_init__(self):
        object.__setattr__(self, "measure", Measure(self.measure))
        object.__setattr__(self, "aggregator", Aggregator(self.aggregator))


def estimate_theta0(baseline, full_data):
    """Plug-in truth: baseline posterior mean on the full dataset."""
    x = np.asarray(full_data, dtype=float)
    if x.size == 0:
        raise InsufficientData("empty dataset")
    mean, _, _ = posterior_moments(baseline, x.size, x.mean())
    return float(mean)


def d_measure(ps, theta0, cfg=UncertaintyConfig()):
    """Dispersion of a posterior about ``theta0``.

    ``ps`` is a :class:`PosteriorSummary` or any ``(mean, variance, ...)``
    tuple; mean and variance may be arrays, in which case an array is
    returned.
    """
    mean, var = ps[0], ps[1]
    measure = Measure(cfg.measure)
    if measure is Measure.VARIANCE_ONLY:
        out = var
    else:
        bias_sq = np.square(np.subtract(mean, theta0))
        out = bias_sq if measure is Measure.BIAS_ONLY else np.add(var, bias_sq)
    return float(out) if isinstance(ps, PosteriorSummary) else out


def aggregate(values, cfg=UncertaintyConfig()):
    """Mean or median of per-subsample dispersion values.

    Even-length medians average the two middle order statistics.
    """
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise EmptyInput("cannot aggregate an empty sequence")
    if Aggregator(cfg.aggregator) is Aggregator.MEDIAN:
        return float(np.median(v))
    return float(v.mean())


def aggregate_se(values, cfg=UncertaintyConfig(), exact=False):
    """Monte Carlo standard error of :func:`aggregate` over ``values``.

    ``exact`` marks a complete enumeration, whose average has no sampling
    error.  The median uses the normal-theory sqrt(pi/2) inflation.
    """
    v = np.asarray(values, dtype=float)
    if exact or v.size < 2:
        return 0.0
    se = float(v.std(ddof=1)) / math.sqrt(v.size)
    if Aggregator(cfg.aggregator) is Aggregator.MEDIAN:
        se *= _MEDIAN_SE_FACTOR
    return se
