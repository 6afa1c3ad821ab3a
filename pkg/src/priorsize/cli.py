"""Command-line entry point: ``priorsize {diagnose,simulate,oracle}``.

Options come from an optional ``key=value`` config file (``--config``) and
are overridden by command-line flags of the same name.  Exit status is 0 on
success, 1 on error and 2 when ``diagnose`` detects serious conflict or a
dominating prior.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import logging
import sys
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import families as F
from . import reporting
from .asymptotics import (
    AsymptoticParams,
    asymptotic_r,
    lemma1_constants,
    normal_exact_m,
    prior_size_factor,
)
from .errors import ConfigError, EmptyFile, ParseError, PriorSizeError, SupportViolation
from .matching import PRIOR_DOMINATES, Thresholds, Verdict
from .pipeline import run_diagnostic
from .resample import SubsamplePlan
from .simstudy import SCENARIOS, NORMAL_STUDY, GAMMA_STUDY, INVGAMMA_STUDY, run_decomposition_study
from .simstudy import run_scenario, summarize_tables
from .uncertainty import UncertaintyConfig

log = logging.getLogger(__name__)

EXIT_OK, EXIT_ERROR, EXIT_CONFLICT = 0, 1, 2


@dataclass
class RunConfig:
    command: str = "diagnose"
    data_path: str | None = None
    family: str = "normal"
    mu: float | None = None
    var: float | None = None
    sigma_sq: float = 1.0
    alpha: float | None = None
    beta: float | None = None
    alpha_b: float = 0.0
    beta_b: float = 0.0
    measure: str = "mse"
    aggregator: str = "mean"
    K: int | None = None
    K_b: int | None = None
    k0: int | None = None
    budget_B: int = 100_000
    seed: int = 0
    partitions: int = 1
    workers: int = 1
    output_dir: str = "out"
    emit_svg: bool = False
    # oracle
    delta_sq: float | None = None
    c: float = 0.5
    r: float | None = None
    m: float | None = None
    k: float | None = None
    gamma: float | None = None
    # simulate
    scenarios: str = "normal"
    seeds: int = 1
    decomposition: bool = False

    def plan(self):
        return SubsamplePlan(K=self.K, budget=self.budget_B, seed=self.seed,
                             partitions=self.partitions, workers=self.workers)

    def prior(self):
        kind = F.FamilyKind(self.family)
        if kind is F.FamilyKind.NORMAL:
            _require(self, "mu", "var")
            return F.normal(self.mu, self.var, self.sigma_sq)
        _require(self, "alpha", "beta")
        if kind is F.FamilyKind.EXP_MEAN:
            return F.exp_mean_invgamma(self.alpha, self.beta, self.alpha_b, self.beta_b)
        return F.FamilySpec(kind, alpha=self.alpha, beta=self.beta)


def _require(cfg, *names):
    missing = [n for n in names if getattr(cfg, n) is None]
    if missing:
        raise ConfigError(f"missing option(s): {', '.join(missing)}")


_BOOL = {"1": True, "true": True, "yes": True, "0": False, "false": False, "no": False}


def _convert(name, text):
    ftype = {f.name: f.type for f in fields(RunConfig)}[name]
    text = text.strip()
    try:
        if "bool" in ftype:
            return _BOOL[text.lower()]
        if "int" in ftype:
            return int(text)
        if "float" in ftype:
            return float(text)
    except (KeyError, ValueError):
        raise ConfigError(f"bad value for {name}: {text!r}") from None
    return text


def read_config(path):
    """Parse a ``key=value`` file into a dict of typed options."""
    known = {f.name for f in fields(RunConfig)}
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in known:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _convert(key, value)
    return out


def ingest_observations(path, family=None):
    """Read one decimal observation per line; ``#`` lines are comments."""
    values = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            x = float(line)
        except ValueError:
            raise ParseError(lineno, line) from None
        if family is not None and not F.check_support(family, x):
            raise SupportViolation(lineno, x)
        values.append(x)
    if not values:
        raise EmptyFile(f"{path}: no observations")
    return np.array(values)


def write_observations(x, path):
    Path(path).write_text("".join(f"{reporting.fmt(float(v))}\n" for v in x))


# -- commands -------------------------------------------------------------------

def run_diagnose(cfg):
    _require(cfg, "data_path")
    prior = cfg.prior()
    x = ingest_observations(cfg.data_path, prior.kind)
    ucfg = UncertaintyConfig(cfg.measure, cfg.aggregator)
    report = run_diagnostic(x, prior, ucfg, cfg.plan(), k0=cfg.k0, K_b=cfg.K_b)
    reporting.write_report(report, cfg.output_dir, cfg.emit_svg)
    verdict = report.verdict.value if report.verdict else "Undetermined"
    print(f"S_K={reporting.fmt(report.slope)} verdict={verdict} "
          f"warnings={len(report.warnings)} -> {cfg.output_dir}")
    if report.verdict is Verdict.SERIOUS or PRIOR_DOMINATES in report.warning_kinds():
        return EXIT_CONFLICT
    return EXIT_OK


def _selected_scenarios(names):
    groups = {"normal": NORMAL_STUDY, "exponential": GAMMA_STUDY + INVGAMMA_STUDY,
              "all": NORMAL_STUDY + GAMMA_STUDY + INVGAMMA_STUDY}
    out = []
    for name in (s.strip() for s in names.split(",")):
        if name in groups:
            out.extend(groups[name])
        elif name in SCENARIOS:
            out.append(SCENARIOS[name])
        else:
            raise ConfigError(f"unknown scenario {name!r}")
    return out


def run_simulate(cfg):
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    results = []
    for sc in _selected_scenarios(cfg.scenarios):
        if cfg.K is not None or cfg.budget_B != sc.plan.budget:
            sc = dataclasses.replace(sc, plan=dataclasses.replace(
                sc.plan, K=cfg.K or sc.plan.K, budget=cfg.budget_B))
        for s in range(cfg.seed, cfg.seed + cfg.seeds):
            res = run_scenario(sc.with_seed(s))
            results.append(res)
            reporting.write_report(res.report, out, cfg.emit_svg, prefix=f"{sc.name}_seed{s}_")
            if cfg.decomposition:
                var_rep, bias_rep = run_decomposition_study(sc.with_seed(s))
                reporting.write_m_curve(var_rep, out / f"{sc.name}_seed{s}_variance_m_curve.csv")
                reporting.write_m_curve(bias_rep, out / f"{sc.name}_seed{s}_bias_m_curve.csv")
    rows = summarize_tables(results)
    for row, res in zip(rows, results):
        row["seed"] = res.scenario.seed
        row["data_sha256"] = res.digest
    reporting.write_table(rows, out / "table.csv")
    print(f"{len(results)} scenario run(s) -> {out / 'table.csv'}")
    return EXIT_OK


def oracle_row(cfg):
    _require(cfg, "delta_sq")
    m = cfg.m if cfg.m is not None else cfg.gamma
    if cfg.r is not None:
        p = AsymptoticParams(cfg.r, cfg.delta_sq, cfg.c, m, cfg.k)
    else:
        _require(cfg, "k")
        if m is None:
            raise ConfigError("oracle needs r, or k together with m or gamma")
        p = AsymptoticParams.from_sizes(m, cfg.k, cfg.delta_sq, cfg.c)
    # normalised so that beta = 1: v = 1 - c, u'^2 sigma_T^2 = c
    alpha, beta = lemma1_constants(p, 1.0, 1 - cfg.c, cfg.c)
    exact = None
    if cfg.gamma is not None and cfg.k is not None:
        exact = normal_exact_m(cfg.k, cfg.gamma, cfg.delta_sq)
    return {"r": p.r, "delta_sq": p.delta_sq, "c": p.c, "R_r": asymptotic_r(p),
            "A_r": prior_size_factor(p.r, p.delta_sq, p.c), "alpha": alpha, "beta": beta,
            "normal_exact_m": exact}


def run_oracle(cfg, stream=None):
    stream = stream or sys.stdout
    row = oracle_row(cfg)
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(list(row))
    w.writerow([reporting.fmt(v) for v in row.values()])
    return EXIT_OK


COMMANDS = {"diagnose": run_diagnose, "simulate": run_simulate, "oracle": run_oracle}


def build_parser():
    parser = argparse.ArgumentParser(prog="priorsize", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="key=value options file")
        for f in fields(RunConfig):
            if f.name == "command":
                continue
            p.add_argument(f"--{f.name.replace('_', '-')}", dest=f.name, default=None, metavar="V")
    return parser


def make_config(args):
    opts = read_config(args.config) if args.config else {}
    for f in fields(RunConfig):
        value = getattr(args, f.name, None)
        if f.name != "command" and value is not None:
            opts[f.name] = _convert(f.name, value)
    opts["command"] = args.command
    return RunConfig(**opts)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = make_config(args)
        return COMMANDS[cfg.command](cfg)
    except (PriorSizeError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
