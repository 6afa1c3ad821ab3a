"""CSV and SVG artifacts for diagnostic reports."""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np


def fmt(x):
    """17 significant digits, enough to round-trip any double."""
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    return "" if math.isnan(x) else format(x, ".17g")


def _write(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, str) else fmt(v) for v in row])


def u_curve_rows(report):
    prior = {int(p.k): p for p in report.u_prior.points()}
    base = {int(p.k): p for p in report.u_base.points()}
    for k in sorted(prior.keys() | base.keys()):
        p, b = prior.get(k), base.get(k)
        n_deg = (p.n_degenerate if p else 0) + (b.n_degenerate if b else 0)
        yield (k, p and p.u_hat, p and p.se, b and b.u_hat, b and b.se, n_deg)


def write_u_curves(report, path):
    _write(path, ["k", "u_prior", "u_prior_se", "u_base", "u_base_se", "n_degenerate"],
           u_curve_rows(report))


def write_m_curve(report, path):
    _write(path, ["k", "M_hat", "R_hat"], ((k, m, m / k) for k, m in report.m_hat))


def summary_row(report):
    verdict = report.verdict.value if report.verdict else "Undetermined"
    warnings = ";".join(str(w) for w in sorted(report.warnings, key=lambda w: (w.kind, w.k or 0)))
    return (report.slope, report.k0, report.K, verdict, warnings)


def write_summary(report, path):
    _write(path, ["S_K", "k0", "K", "verdict", "warnings"], [summary_row(report)])


def write_table(rows, path):
    if not rows:
        Path(path).write_text("")
        return
    header = list(rows[0])
    for r in rows[1:]:
        header += [h for h in r if h not in header]
    _write(path, header, ([r.get(h) for h in header] for r in rows))


def write_report(report, out_dir, emit_svg=False, prefix=""):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_u_curves(report, out / f"{prefix}u_curves.csv")
    write_m_curve(report, out / f"{prefix}m_curve.csv")
    write_summary(report, out / f"{prefix}summary.csv")
    if emit_svg:
        write_svgs(report, out, prefix)


# -- plots --------------------------------------------------------------------

def _line_plot(path, series, xlabel, ylabel, title):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with matplotlib.rc_context({"svg.hashsalt": "priorsize", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6, 4))
        for label, xs, ys in series:
            ax.plot(xs, ys, marker="o", markersize=3, label=label)
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        ax.set_title(title)
        ax.legend()
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)


def write_svgs(report, out_dir, prefix=""):
    out = Path(out_dir)
    up, ub = report.u_prior, report.u_base
    _line_plot(out / f"{prefix}u.svg",
               [(up.label or "prior", up.k, up.u_hat), (ub.label or "baseline", ub.k, ub.u_hat)],
               "k", "average posterior uncertainty", "U(k)")
    ks = [k for k, _ in report.m_hat]
    _line_plot(out / f"{prefix}m.svg", [("M(k)", ks, [m for _, m in report.m_hat])],
               "k", "prior data size", "M(k)")
    _line_plot(out / f"{prefix}r.svg", [("R(k)", ks, [r for _, r in report.r_hat])],
               "k", "relative prior size", "R(k) = M(k)/k")
