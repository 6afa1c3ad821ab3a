"""Prior data size from matched uncertainty curves, slope and verdict.

``solve_m(u_prior, u_base, k)`` finds the smallest ``m`` with
``u_base(k + m) == u_prior(k)``: the number of extra observations the
baseline needs to reach the prior's average uncertainty at ``k``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .errors import ExtremeConflictWarning, NonExistence, TooFewPoints
from .resample import AnalyticCurve, UCurve

# grid used to bracket roots on analytic curves
_ANALYTIC_SCAN = 2048


def interpolate(curve, x):
    """Value of ``curve`` at ``x``: linear between nodes, exact at nodes.

    Raises :class:`OutOfRange` with ``side`` ``"below"`` or ``"above"``.
    """
    return curve(x)


def _first_root_tabulated(curve: UCurve, target):
    x, y = curve.k, curve.u_hat - target
    hit = np.nonzero(y == 0)[0]
    first_hit = hit[0] if hit.size else x.size
    cross = np.nonzero(y[:-1] * y[1:] < 0)[0]
    if cross.size and cross[0] < first_hit:
        i = cross[0]
        # solve on the segment; exact node hits are handled above
        return x[i] + (target - curve.u_hat[i]) * (x[i + 1] - x[i]) / (curve.u_hat[i + 1] - curve.u_hat[i])
    if hit.size:
        return x[first_hit]
    return None


def _first_root_analytic(curve: AnalyticCurve, target):
    xs = np.geomspace(curve.lo, curve.hi, _ANALYTIC_SCAN)
    try:
        ys = np.asarray(curve.fn(xs), dtype=float) - target
    except (TypeError, ValueError):
        ys = np.array([curve.fn(x) for x in xs]) - target
    if ys.shape != xs.shape:
        ys = np.array([curve.fn(x) for x in xs]) - target
    for i in range(xs.size - 1):
        if ys[i] == 0:
            return xs[i]
        if ys[i] * ys[i + 1] < 0:
            f = lambda x: curve.fn(x) - target  # noqa: E731
            return brentq(f, xs[i], xs[i + 1], xtol=1e-14, rtol=4 * np.finfo(float).eps)
    return xs[-1] if ys[-1] == 0 else None


def match(u_prior, u_base, k):
    """``(m, clamped)`` for size ``k``; see :func:`solve_m`."""
    target = u_prior(k)
    if isinstance(u_base, AnalyticCurve):
        root = _first_root_analytic(u_base, target)
    else:
        root = _first_root_tabulated(u_base, target)
    if root is not None:
        return float(root) - k, False
    if target > u_base(u_base.lo):
        return u_base.lo - k, True
    raise NonExistence(k)


def solve_m(u_prior, u_base, k):
    """Prior data size at ``k``.

    The baseline curve is interpolated linearly (or evaluated exactly for an
    :class:`AnalyticCurve`) and the smallest solution is returned, so the
    result lies in ``[u_base.lo - k, u_base.hi - k]``.  When the prior's
    uncertainty exceeds the whole baseline curve the value is clamped to
    ``u_base.lo - k`` and an :class:`ExtremeConflictWarning` is issued; when it
    is below the whole curve :class:`NonExistence` is raised.
    """
    m, clamped = match(u_prior, u_base, k)
    if clamped:
        warnings.warn(f"extreme conflict at k={k}: M clamped to {m}", ExtremeConflictWarning,
                      stacklevel=2)
    return m


def slope_regression(m_hat, k0):
    """Least-squares slope of M(k) on k over the points with ``k >= k0``."""
    pts = [(k, m) for k, m in m_hat if k >= k0]
    if len(pts) < 3:
        raise TooFewPoints(f"need at least 3 points with k >= {k0}, got {len(pts)}")
    k, m = np.array(pts, dtype=float).T
    if not np.all(np.isfinite(m)):
        raise TooFewPoints("M(k) missing at some k >= k0")
    kc = k - k.mean()
    return float(kc @ (m - m.mean()) / (kc @ kc))


# -- report -------------------------------------------------------------------

class Verdict(str, Enum):
    NO_CONFLICT = "NoDetectableConflict"
    MILD = "MildConflict"
    SERIOUS = "SeriousConflict"
    SUPER_INFORMATIVE = "SuperInformative"


@dataclass(frozen=True, order=True)
class DiagWarning:
    kind: str
    k: int | None = None

    def __str__(self):
        return self.kind if self.k is None else f"{self.kind}({self.k})"


NON_EXISTENCE = "NonExistence"
EXTREME_CONFLICT = "ExtremeConflict"
PRIOR_DOMINATES = "PriorDominates"
NON_MONOTONE_U = "NonMonotoneU"
CROSSED_CURVES = "CrossedCurves"


@dataclass(frozen=True)
class Thresholds:
    """Heuristic verdict cut-offs.

    ``excess`` is the minimum ratio of mean M(k) to the nominal prior size
    for a negative slope with positive R(k) to count as super-information.
    """

    flat: float = 0.05
    serious: float = -0.25
    collapse: float = -0.5
    excess: float = 1.25


@dataclass(frozen=True, eq=False)
class DiagnosticReport:
    m_hat: tuple
    r_hat: tuple
    slope: float
    k0: int
    warnings: frozenset
    verdict: Verdict | None
    u_prior: UCurve | None = field(default=None, repr=False)
    u_base: UCurve | None = field(default=None, repr=False)
    nominal_size: float | None = None
    theta0: float | None = None

    @property
    def K(self):
        return max(k for k, _ in self.m_hat) if self.m_hat else None

    def r_at(self, k):
        return dict(self.r_hat).get(k, math.nan)

    def warning_kinds(self):
        return {w.kind for w in self.warnings}


def default_k0(K):
    return max(5, math.ceil(K / 3))


def classify(slope, m_hat, k0, nominal_size=None, thresholds=Thresholds()):
    """Verdict from the slope and the M(k) sequence.

    Without ``nominal_size`` a super-informative prior is recognised only by
    a clearly negative slope with positive R(k) throughout.
    """
    tail = [(k, m) for k, m in m_hat if k >= k0]
    r_tail = [m / k for k, m in tail]
    if math.isnan(slope):
        return None
    if slope < 0 and r_tail and all(r > 0 for r in r_tail):
        if nominal_size:
            mean_m = sum(m for _, m in tail) / len(tail)
            if mean_m >= thresholds.excess * nominal_size:
                return Verdict.SUPER_INFORMATIVE
        elif slope < -thresholds.flat:
            return Verdict.SUPER_INFORMATIVE
    if abs(slope) <= thresholds.flat and all(m >= 0 for _, m in m_hat):
        return Verdict.NO_CONFLICT
    if slope <= thresholds.serious or any(m / k <= thresholds.collapse for k, m in m_hat):
        return Verdict.SERIOUS
    return Verdict.MILD


def _monotonicity_warnings(curve):
    if not isinstance(curve, UCurve):
        return set()
    rise = np.diff(curve.u_hat)
    noise = 3 * np.hypot(curve.se[:-1], curve.se[1:])
    return {DiagWarning(NON_MONOTONE_U, int(k)) for k in curve.k[1:][rise > noise]}


def diagnose(u_prior, u_base, k0=None, nominal_size=None, n=None, thresholds=Thresholds()):
    """Match the curves at every prior grid point and summarise.

    ``n`` is the dataset size; when given and the baseline curve already
    reaches it, persistent non-existence is reported as ``PriorDominates``.
    """
    ks = [int(k) for k in u_prior.k]
    k0 = default_k0(ks[-1]) if k0 is None else k0
    found = set()
    m_hat = []
    for k in ks:
        try:
            m, clamped = match(u_prior, u_base, k)
        except NonExistence:
            found.add(DiagWarning(NON_EXISTENCE, k))
            continue
        if clamped:
            found.add(DiagWarning(EXTREME_CONFLICT, k))
        m_hat.append((k, m))
    if n is not None and u_base.hi >= n and any(w.kind == NON_EXISTENCE for w in found):
        found.add(DiagWarning(PRIOR_DOMINATES))
    found |= _monotonicity_warnings(u_prior) | _monotonicity_warnings(u_base)
    for k in ks:
        if k >= k0 and u_base.lo <= k <= u_base.hi and u_prior(k) > u_base(k):
            found.add(DiagWarning(CROSSED_CURVES, k))
    try:
        slope = slope_regression(m_hat, k0)
    except TooFewPoints:
        slope = math.nan
    verdict = classify(slope, m_hat, k0, nominal_size, thresholds)
    r_hat = tuple((k, m / k) for k, m in m_hat)
    return DiagnosticReport(tuple(m_hat), r_hat, slope, k0, frozenset(found), verdict,
                            u_prior, u_base, nominal_size)


# -- structural identities -----------------------------------------------------

def transpose_identity(u1, u2, k):
    """``(M12(k), M21(k + M12(k)))`` where ``M12`` moves from curve 1 to curve 2."""
    m12 = solve_m(u2, u1, k)
    return m12, solve_m(u1, u2, k + m12)


def check_transpose_identity(u1, u2, k):
    """Residual ``|M12(k) + M21(k + M12(k))|``; zero up to interpolation error."""
    m12, m21 = transpose_identity(u1, u2, k)
    return abs(m12 + m21)


def check_additivity_identity(u1, u2, u3, k):
    """Residual ``|M13(k) - M12(k + M23(k)) - M23(k)|``."""
    m23 = solve_m(u3, u2, k)
    m12 = solve_m(u2, u1, k + m23)
    m13 = solve_m(u3, u1, k)
    return abs(m13 - m12 - m23)


def m_standard_error(u_prior, u_base, k, m):
    """Delta-method standard error of a tabulated M(k).

    Propagates the Monte Carlo error of ``u_prior(k)`` and of the baseline
    value at ``k + m`` through the local slope of the baseline curve.  Errors
    at non-grid points are interpolated linearly.
    """
    x = k + m
    i = int(np.clip(np.searchsorted(u_base.k, x) - 1, 0, len(u_base) - 2))
    slope = (u_base.u_hat[i + 1] - u_base.u_hat[i]) / (u_base.k[i + 1] - u_base.k[i])
    w = (x - u_base.k[i]) / (u_base.k[i + 1] - u_base.k[i])
    se_base = math.hypot((1 - w) * u_base.se[i], w * u_base.se[i + 1])
    se_prior = float(np.interp(k, u_prior.k, u_prior.se))
    if slope == 0:
        return math.inf
    return math.hypot(se_prior, se_base) / abs(slope)
