"""Command line entry point: ``honest-credible <subcommand>``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import sequence_model as sm
from .errors import ConfigError, DomainError, InvalidInputError, ResourceError, TruncationError
from .estimators import EstimatorConfig, mle_alpha, risk_alpha, write_diagnostics
from .experiments import ExperimentConfig, build_truth, coverage_experiment, truncation
from .figures import FigureConfig, reproduce_figures
from .radius import RadiusQuery, credible_radius, radius_bounds
from .rng import derive
from .sweeps import run_all_sweeps

EXIT_OK, EXIT_CONFIG, EXIT_RESOURCE, EXIT_FAIL = 0, 2, 3, 1


def _cmd_radius(args) -> int:
    N = args.N or truncation(args.n, args.alpha)
    q = RadiusQuery(args.alpha, args.n, args.gamma, N, args.method, args.draws,
                    derive(args.seed, "radius"))
    r = credible_radius(q)
    lo, hi, n_min = radius_bounds(args.alpha, args.alpha, args.n, args.gamma)
    print(f"r={r!r} lower={lo!r} upper={hi!r}")
    if args.verbose:
        print(f"n_min={n_min!r} guaranteed={args.n >= n_min}")
    return EXIT_OK


def read_observation(path) -> sm.Observation:
    """Text file: a header ``# n=<value>`` and one coefficient per line."""
    with open(path) as fh:
        header = fh.readline()
        if not header.startswith("#") or "n=" not in header:
            raise ConfigError("observation file must start with '# n=<value>'")
        n = float(header.split("n=", 1)[1].split()[0])
        vals = [float(line) for line in fh if line.strip() and not line.startswith("#")]
    return sm.Observation(np.array(vals), n, Path(path).name)


def _cmd_estimate(args) -> int:
    cfg = EstimatorConfig(args.D, args.C1, args.gamma, args.C0)
    if args.observation:
        X = read_observation(args.observation)
    else:
        if args.n is None:
            raise ConfigError("give --observation or --n to simulate")
        truth = build_truth({"builder": args.truth})
        N = truncation(args.n, args.D, truth.support)
        X = sm.sample_observation(truth, args.n, N, derive(args.seed, "observation", args.n, 0))
    mle = mle_alpha(X, cfg)
    risk = risk_alpha(X, cfg)
    print(f"alpha_mle={mle.alpha!r} alpha_risk={risk.alpha!r} k_n={cfg.k_n(X.n)} C0={cfg.C0!r}")
    if args.diagnostics:
        prefix = Path(args.diagnostics)
        prefix.parent.mkdir(parents=True, exist_ok=True)
        for sel in (mle, risk):
            with open(f"{prefix}_{sel.method}.csv", "w", newline="") as fh:
                write_diagnostics(sel, fh)
    return EXIT_OK


def _cmd_coverage(args) -> int:
    cfg = ExperimentConfig.from_json(args.config)
    if args.output_dir:
        cfg = ExperimentConfig.from_dict({**cfg.__dict__, "output_dir": args.output_dir})
    if not cfg.output_dir:
        raise ConfigError("no output_dir in config or on the command line")
    report = coverage_experiment(cfg)
    print(report.summary())
    return EXIT_OK


def _cmd_figures(args) -> int:
    opts = {}
    if args.config:
        with open(args.config) as fh:
            opts = json.load(fh)
        known = set(FigureConfig.__dataclass_fields__) - {"truth"}
        unknown = set(opts) - known
        if unknown:
            raise ConfigError(f"unknown figure config keys: {sorted(unknown)}")
        for key in ("n_list", "methods", "window"):
            if key in opts:
                opts[key] = tuple(opts[key])
    if args.output_dir:
        opts["output_dir"] = args.output_dir
    opts.setdefault("output_dir", "figures")
    panels = reproduce_figures(FigureConfig(**opts))
    for (method, n), p in panels.items():
        print(f"{method} n={n:g} alpha={p.alpha:.4f} covered_fraction={p.covered_fraction:.3f}")
    return EXIT_OK


def _cmd_check_bounds(args) -> int:
    results = run_all_sweeps()
    ok = True
    for res in results:
        print(res.line())
        ok &= res.passed
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="honest-credible",
                                description="Adaptive credible balls in the Gaussian sequence model")
    sub = p.add_subparsers(dest="command", metavar="command")

    r = sub.add_parser("radius", help="credible radius and its deterministic bracket")
    r.add_argument("--alpha", type=float, required=True)
    r.add_argument("--n", type=float, required=True)
    r.add_argument("--gamma", type=float, default=0.05)
    r.add_argument("--N", type=int, default=None, help="truncation (default: N(n) rule)")
    r.add_argument("--method", choices=("monte_carlo", "cumulant_approx"), default="monte_carlo")
    r.add_argument("--draws", type=int, default=20_000)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("-v", "--verbose", action="store_true")
    r.set_defaults(func=_cmd_radius)

    e = sub.add_parser("estimate", help="marginal-likelihood and risk-based alpha")
    e.add_argument("--observation", help="file with '# n=<value>' header and one value per line")
    e.add_argument("--truth", default="sim_truth", help="builder used when simulating")
    e.add_argument("--n", type=float)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--D", type=float, default=1.0)
    e.add_argument("--C1", type=float, default=1.0 / 3.0)
    e.add_argument("--C0", type=float, default=None)
    e.add_argument("--gamma", type=float, default=0.05)
    e.add_argument("--diagnostics", help="prefix for alpha,value,threshold CSV files")
    e.set_defaults(func=_cmd_estimate)

    c = sub.add_parser("coverage", help="Monte-Carlo coverage experiment from a JSON config")
    c.add_argument("--config", required=True)
    c.add_argument("--output-dir")
    c.set_defaults(func=_cmd_coverage)

    f = sub.add_parser("figures", help="function-space credible-set panels")
    f.add_argument("--config")
    f.add_argument("--output-dir")
    f.set_defaults(func=_cmd_figures)

    b = sub.add_parser("check-bounds", help="sweep the tail-sum and shift inequalities")
    b.set_defaults(func=_cmd_check_bounds)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ConfigError, DomainError, InvalidInputError, TruncationError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
