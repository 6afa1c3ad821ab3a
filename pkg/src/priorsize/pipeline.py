"""End-to-end prior diagnostic for one dataset."""

from __future__ import annotations

import logging
from dataclasses import replace

import numpy as np

from .errors import InvalidSize, SupportViolation
from .families import check_support, min_k, nominal_prior_size
from .matching import NON_EXISTENCE, Thresholds, default_k0, diagnose
from .resample import SubsamplePlan, UCurve, evaluate_at
from .uncertainty import UncertaintyConfig, estimate_theta0

log = logging.getLogger(__name__)

# number of sizes used when the baseline has to be stretched past 4K toward n
_SPARSE_EXTENSION_POINTS = 24


def _sparse_extension(start, n):
    ks = np.unique(np.round(np.geomspace(start, n, _SPARSE_EXTENSION_POINTS)).astype(int))
    return [int(k) for k in ks if k > start - 1]


def run_diagnostics(data, prior, cfgs=(UncertaintyConfig(),), plan=SubsamplePlan(), k0=None,
                    K_b=None, baseline=None, thresholds=Thresholds()):
    """Diagnostic reports for ``prior`` on ``data``, one per uncertainty config.

    All configs share ``theta0`` and the same subsamples.  The baseline curve
    covers the prior grid and is extended past ``K`` only when some ``M(k)``
    would otherwise not exist: first densely up to ``K_b`` (default
    ``min(n, 4K)``), then sparsely up to ``n``.  An explicit ``K_b`` is always
    computed in full.
    """
    x = np.asarray(data, dtype=float)
    n = x.size
    bad = np.nonzero(~check_support(prior.kind, x))[0]
    if bad.size:
        raise SupportViolation(int(bad[0]) + 1, float(x[bad[0]]))
    base = prior.baseline() if baseline is None else baseline
    theta0 = estimate_theta0(base, x)
    grid = plan.grid(n, max(min_k(prior), min_k(base)))
    K = grid[-1]
    if K_b is not None and not K <= K_b <= n:
        raise InvalidSize(f"K_b must lie in [{K}, {n}]")

    prior_pts = [[] for _ in cfgs]
    base_pts = [[] for _ in cfgs]

    def add(ks, with_prior):
        for k in ks:
            targets = [(base, c) for c in cfgs]
            if with_prior:
                targets += [(prior, c) for c in cfgs]
            pts = evaluate_at(x, k, plan, targets, theta0)
            for i in range(len(cfgs)):
                base_pts[i].append(pts[i])
                if with_prior:
                    prior_pts[i].append(pts[len(cfgs) + i])

    add(grid, True)
    lazy = K_b is None
    K_b = min(n, 4 * K) if K_b is None else K_b
    if not lazy:
        add(range(K + 1, K_b + 1), False)

    def build():
        return [diagnose(UCurve.from_points(p, prior.label), UCurve.from_points(b, base.label),
                         k0=default_k0(K) if k0 is None else k0,
                         nominal_size=nominal_prior_size(prior), n=n, thresholds=thresholds)
                for p, b in zip(prior_pts, base_pts)]

    def missing(reports):
        return any(NON_EXISTENCE in r.warning_kinds() for r in reports)

    reports = build()
    top = K
    while lazy and missing(reports) and top < K_b:
        # grow in blocks of K; the smallest root never moves once found
        nxt = min(K_b, top + K)
        log.info("extending baseline curve to k=%d", nxt)
        add(range(top + 1, nxt + 1), False)
        top = nxt
        reports = build()
    if missing(reports) and K_b < n:
        log.info("extending baseline curve sparsely to n=%d", n)
        add(_sparse_extension(K_b + 1, n), False)
        reports = build()
    return [replace(r, theta0=theta0) for r in reports]


def run_diagnostic(data, prior, cfg=UncertaintyConfig(), plan=SubsamplePlan(), k0=None, K_b=None,
                   baseline=None, thresholds=Thresholds()):
    """Full diagnostic for a single uncertainty configuration."""
    return run_diagnostics(data, prior, (cfg,), plan, k0, K_b, baseline, thresholds)[0]
