"""Average posterior uncertainty curves from subsamples of a dataset.

For each subsample size ``k`` the ``C(n, k)`` subsets are enumerated when
there are at most ``budget`` of them; otherwise ``budget`` i.i.d. uniform
``k``-subsets are drawn.  The random stream for size ``k`` depends only on
``(seed, k, partition)``, so curves computed with different grids share
their subsamples at common ``k`` and prior/baseline curves evaluated at the
same ``k`` see identical subsets.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import AllDegenerate, InvalidSize, OutOfRange
from .families import min_k, posterior_moments
from .uncertainty import UncertaintyConfig, aggregate, aggregate_se, d_measure

# first element of every subsample spawn key; data generators use other tags
_STREAM_TAG = 1


def default_K(n):
    return min(n, math.ceil(math.sqrt(n)))


@dataclass(frozen=True)
class SubsamplePlan:
    """How subsamples are drawn.

    ``k_grid=None`` means ``k_min .. K`` with ``K = ceil(sqrt(n))``.
    ``partitions`` fixes how the draws for one ``k`` are split into
    independent sub-streams; ``workers`` only controls how many of those run
    at once and never changes the result.  ``allow_enumeration=False``
    forces random draws even when a full enumeration would fit the budget.
    """

    k_grid: tuple | None = None
    K: int | None = None
    budget: int = 100_000
    seed: int = 0
    partitions: int = 1
    workers: int = 1
    chunk_size: int = 25_000
    allow_enumeration: bool = True

    def __post_init__(self):
        if self.budget < 1:
            raise InvalidSize("budget must be >= 1")
        if self.partitions < 1 or self.workers < 1 or self.chunk_size < 1:
            raise InvalidSize("partitions, workers and chunk_size must be >= 1")
        if self.k_grid is not None:
            grid = tuple(int(k) for k in self.k_grid)
            if any(b <= a for a, b in zip(grid, grid[1:])):
                raise InvalidSize("k_grid must be strictly increasing")
            object.__setattr__(self, "k_grid", grid)

    def grid(self, n, k_min=1):
        if self.k_grid is not None:
            grid = self.k_grid
        else:
            K = default_K(n) if self.K is None else min(self.K, n)
            grid = tuple(range(k_min, K + 1))
        if not grid or grid[0] < 1 or grid[-1] > n:
            raise InvalidSize(f"subsample sizes must lie in [1, {n}], got {grid[:1]}..{grid[-1:]}")
        return grid

    def enumerates(self, n, k):
        return self.allow_enumeration and math.comb(n, k) <= self.budget


# -- subset generation -------------------------------------------------------

def _rng(seed, k, part):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(_STREAM_TAG, k, part)))


def _distinct_rows(rng, n, k, size):
    """``size`` uniform k-subsets of range(n), one per row, sorted.

    Duplicate entries within a row are redrawn until none remain.  The
    procedure is symmetric under relabelling of the population, which makes
    every k-subset equally likely.
    """
    idx = rng.integers(0, n, size=(size, k))
    if k < 2:
        return idx
    while True:
        idx.sort(axis=1)
        dup = np.zeros(idx.shape, dtype=bool)
        dup[:, 1:] = idx[:, 1:] == idx[:, :-1]
        count = int(dup.sum())
        if count == 0:
            return idx
        idx[dup] = rng.integers(0, n, size=count)


def _random_subsets(rng, n, k, size):
    if 2 * k <= n:
        return _distinct_rows(rng, n, k, size)
    # draw the excluded complement instead
    excluded = _distinct_rows(rng, n, n - k, size)
    keep = np.ones((size, n), dtype=bool)
    keep[np.arange(size)[:, None], excluded] = False
    return np.nonzero(keep)[1].reshape(size, k)


def _partition_sizes(total, parts):
    base, extra = divmod(total, parts)
    return [base + (p < extra) for p in range(parts)]


def _check_size(n, k):
    if not 1 <= k <= n:
        raise InvalidSize(f"subsample size k={k} outside [1, {n}]")


def _enumerated(n, k):
    flat = itertools.chain.from_iterable(itertools.combinations(range(n), k))
    count = math.comb(n, k)
    return np.fromiter(flat, dtype=np.intp, count=count * k).reshape(count, k)


def _partition_chunks(n, k, plan, part, size):
    rng = _rng(plan.seed, k, part)
    done = 0
    while done < size:
        step = min(plan.chunk_size, size - done)
        yield _random_subsets(rng, n, k, step)
        done += step


def draw_subsamples(n, k, plan):
    """All index sets used for size ``k`` as an ``(count, k)`` integer array."""
    _check_size(n, k)
    if plan.enumerates(n, k):
        return _enumerated(n, k)
    sizes = _partition_sizes(plan.budget, plan.partitions)
    blocks = [c for p, s in enumerate(sizes) for c in _partition_chunks(n, k, plan, p, s)]
    return np.concatenate(blocks)


def subsample_means(data, k, plan):
    """Means of ``data`` over every subsample of size ``k``.

    Returns ``(means, exact)`` where ``exact`` is true for a full enumeration.
    """
    x = np.asarray(data, dtype=float)
    n = x.size
    _check_size(n, k)
    if plan.enumerates(n, k):
        return x[_enumerated(n, k)].sum(axis=1) / k, True

    def run(part_size):
        part, size = part_size
        return np.concatenate([x[idx].sum(axis=1) / k
                               for idx in _partition_chunks(n, k, plan, part, size)])

    jobs = list(enumerate(_partition_sizes(plan.budget, plan.partitions)))
    if plan.workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(plan.workers) as pool:
            parts = list(pool.map(run, jobs))
    else:
        parts = [run(j) for j in jobs]
    return np.concatenate(parts), False


# -- curves -----------------------------------------------------------------

class UPoint(NamedTuple):
    k: int
    u_hat: float
    se: float
    n_subsamples: int
    n_degenerate: int


@dataclass(frozen=True, eq=False)
class UCurve:
    """Tabulated average posterior uncertainty on a grid of subsample sizes."""

    k: np.ndarray
    u_hat: np.ndarray
    se: np.ndarray
    n_subsamples: np.ndarray
    n_degenerate: np.ndarray
    label: str = ""

    def __post_init__(self):
        k = np.asarray(self.k, dtype=float)
        u = np.asarray(self.u_hat, dtype=float)
        cols = [np.asarray(c) for c in (self.se, self.n_subsamples, self.n_degenerate)]
        if k.ndim != 1 or k.size == 0 or any(c.shape != k.shape for c in [u, *cols]):
            raise ValueError("curve columns must be non-empty 1-d arrays of equal length")
        if np.any(np.diff(k) <= 0):
            raise ValueError("curve k values must be strictly increasing")
        if not np.all(np.isfinite(u)) or np.any(u < 0):
            raise ValueError("u_hat must be finite and non-negative")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "u_hat", u)
        object.__setattr__(self, "se", cols[0].astype(float))
        object.__setattr__(self, "n_subsamples", cols[1].astype(np.int64))
        object.__setattr__(self, "n_degenerate", cols[2].astype(np.int64))

    @classmethod
    def from_points(cls, points, label=""):
        points = sorted(points, key=lambda p: p.k)
        cols = list(zip(*points))
        return cls(*(np.array(c) for c in cols), label=label)

    @classmethod
    def from_values(cls, k, u_hat, se=None, label=""):
        k = np.asarray(k, dtype=float)
        zeros = np.zeros(k.shape)
        return cls(k, u_hat, zeros if se is None else se, zeros, zeros, label=label)

    @property
    def lo(self):
        return float(self.k[0])

    @property
    def hi(self):
        return float(self.k[-1])

    def points(self):
        return [UPoint(int(k), float(u), float(s), int(b), int(d))
                for k, u, s, b, d in zip(self.k, self.u_hat, self.se,
                                         self.n_subsamples, self.n_degenerate)]

    def __call__(self, x):
        x = float(x)
        if x < self.lo:
            raise OutOfRange(x, "below")
        if x > self.hi:
            raise OutOfRange(x, "above")
        return float(np.interp(x, self.k, self.u_hat))

    def __len__(self):
        return self.k.size


@dataclass(frozen=True, eq=False)
class AnalyticCurve:
    """A closed-form uncertainty curve on the continuous range ``[lo, hi]``.

    Matching against an analytic curve solves the continuous equation
    rather than a piecewise-linear surrogate.
    """

    fn: Callable[[float], float]
    lo: float
    hi: float
    label: str = ""

    def __call__(self, x):
        x = float(x)
        if x < self.lo:
            raise OutOfRange(x, "below")
        if x > self.hi:
            raise OutOfRange(x, "above")
        return float(self.fn(x))

    def tabulate(self, ks):
        ks = np.asarray(ks, dtype=float)
        return UCurve.from_values(ks, [self.fn(k) for k in ks], label=self.label)


def evaluate_at(data, k, plan, targets, theta0):
    """Average uncertainty at size ``k`` for several ``(spec, cfg)`` targets.

    All targets share the same subsamples.  Returns one :class:`UPoint` per
    target.
    """
    means, exact = subsample_means(data, k, plan)
    out = []
    for spec, cfg in targets:
        mean, var, degenerate = posterior_moments(spec, k, means)
        n_deg = int(degenerate.sum())
        if n_deg == means.size:
            raise AllDegenerate(k)
        d = d_measure((mean, var), theta0, cfg)
        out.append(UPoint(k, aggregate(d, cfg), aggregate_se(d, cfg, exact), means.size, n_deg))
    return out


def estimate_u_curves(data, targets: Sequence, theta0, plan, k_grid=None, labels=None):
    """Curves for several ``(spec, cfg)`` targets on a shared grid and subsamples."""
    n = np.asarray(data).size
    if k_grid is None:
        k_grid = plan.grid(n, max(min_k(spec) for spec, _ in targets))
    points = [[] for _ in targets]
    for k in k_grid:
        for acc, p in zip(points, evaluate_at(data, k, plan, targets, theta0)):
            acc.append(p)
    labels = labels or [spec.label for spec, _ in targets]
    return [UCurve.from_points(p, label) for p, label in zip(points, labels)]


def estimate_u_curve(data, spec, theta0, cfg=UncertaintyConfig(), plan=SubsamplePlan()):
    """Average posterior uncertainty of ``spec`` over ``plan``'s grid."""
    return estimate_u_curves(data, [(spec, cfg)], theta0, plan)[0]
