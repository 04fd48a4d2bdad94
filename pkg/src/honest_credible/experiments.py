"""Monte-Carlo coverage experiments.

Each (n, replicate) pair draws its observation from its own derived stream,
so rows can be computed in any order, in parallel, or on a subset, and the
written CSV is a pure function of the configuration.
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np
from scipy import stats

from . import sequence_model as sm
from .credible_sets import (contains, eb_credible_ball, fixed_alpha_ball, hier_credible_ball,
                            risk_credible_ball)
from .errors import ConfigError, ResourceError
from .estimators import EstimatorConfig
from .hierarchical import HyperPrior, McmcConfig, run_mcmc
from .radius import RadiusSettings
from .rng import derive

COVERAGE_HEADER = "n,replicate,hit,distance,effective_radius,alpha_used,seed_tag"
THREADS_ENV = "HONEST_CREDIBLE_THREADS"
DEFAULT_MAX_COORDINATES = 2 ** 21


def truncation(n: float, D: float, support: int = 0) -> int:
    """N(n) = max(4096, 4 ceil(n^(1/(1+2D))), ceil(n^(2/(1+4D))), truth support)."""
    a = 4 * math.ceil(round(n ** (1.0 / (1.0 + 2.0 * D)), 9))
    b = math.ceil(round(n ** (2.0 / (1.0 + 4.0 * D)), 9))
    return int(max(4096, a, b, support))


def build_truth(spec: dict) -> sm.TruthSequence:
    """Truth from ``{"builder": name, "params": {...}}``."""
    if not isinstance(spec, dict) or "builder" not in spec:
        raise ConfigError("truth_spec needs a 'builder'")
    unknown = set(spec) - {"builder", "params"}
    if unknown:
        raise ConfigError(f"unknown truth_spec keys: {sorted(unknown)}")
    name = spec["builder"]
    p = dict(spec.get("params", {}))
    try:
        if name == "sim_truth":
            return sm.make_sim_truth(**p)
        if name == "counterexample":
            if "target" in p and p["target"] is not None:
                p["target"] = tuple(p["target"])
            p.setdefault("N", 10 ** 7)
            return sm.make_counterexample(**p).truth
        if name == "polynomial":
            return sm.make_polynomial_truth(**p)
        if name == "blocks":
            if "starts" in p:
                p["starts"] = tuple(p["starts"])
            return sm.make_block_truth(**p)
        if name == "zero":
            return sm.TruthSequence(np.zeros(0), "zero")
        if name == "file":
            with open(p["path"]) as fh:
                return sm.read_truth(fh)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for truth builder {name!r}: {exc}") from exc
    raise ConfigError(f"unknown truth builder {name!r}")


def parse_method(method) -> tuple:
    """'eb_mle' | 'eb_risk' | 'hierarchical' | {'fixed_alpha': a} | 'fixed_alpha:a'."""
    if isinstance(method, dict):
        if set(method) != {"fixed_alpha"}:
            raise ConfigError(f"bad method {method!r}")
        return "fixed_alpha", float(method["fixed_alpha"])
    if isinstance(method, str):
        if method.startswith("fixed_alpha"):
            _, _, a = method.partition(":")
            if not a:
                raise ConfigError("fixed_alpha needs a value, e.g. 'fixed_alpha:1.5'")
            return "fixed_alpha", float(a)
        if method in ("eb_mle", "eb_risk", "hierarchical"):
            return method, None
    raise ConfigError(f"unknown method {method!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    truth_spec: dict
    method: object = "eb_risk"
    n_list: tuple = (1e4,)
    replicates: int = 100
    gamma: float = 0.05
    L: float = 1.0
    D: float = 1.0
    C1: float = 1.0 / 3.0
    C0_override: float | None = None
    M: float = 1.0
    master_seed: int = 0
    output_dir: str | None = None
    radius_method: str = "monte_carlo"
    mc_draws: int = 20_000
    grid_size: int = 512
    burn_in: int = 3200
    mcmc_draws: int = 800
    max_coordinates: int = DEFAULT_MAX_COORDINATES

    def __post_init__(self):
        object.__setattr__(self, "n_list", tuple(float(n) for n in self.n_list))
        if self.replicates < 1:
            raise ConfigError("replicates must be >= 1")
        if not self.n_list:
            raise ConfigError("n_list must be nonempty")
        if any(not n > 1 for n in self.n_list):
            raise ConfigError("every n must exceed 1")
        for name in ("L", "D", "C1", "M"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if not 0 < self.gamma < 1:
            raise ConfigError("gamma must lie in (0, 1)")
        parse_method(self.method)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "truth_spec" not in d:
            raise ConfigError("config needs truth_spec")
        try:
            return cls(**d)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        try:
            with open(path) as fh:
                d = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(d)

    def estimator_config(self) -> EstimatorConfig:
        return EstimatorConfig(self.D, self.C1, self.gamma, self.C0_override, self.grid_size)

    def radius_settings(self) -> RadiusSettings:
        return RadiusSettings(self.radius_method, self.mc_draws,
                              derive(self.master_seed, "radius"))


@dataclass(frozen=True)
class ReplicateRow:
    n: float
    replicate: int
    hit: bool
    distance: float
    effective_radius: float
    alpha_used: float
    seed_tag: str
    wall_time: float = 0.0

    def csv(self) -> str:
        return (f"{self.n!r},{self.replicate},{int(self.hit)},{self.distance!r},"
                f"{self.effective_radius!r},{self.alpha_used!r},{self.seed_tag}")


@dataclass(frozen=True)
class Aggregate:
    n: float
    replicates: int
    hits: int
    coverage: float
    se: float
    ci_low: float
    ci_high: float
    mean_radius: float
    median_radius: float


def aggregate(rows) -> dict:
    """Per-n coverage with binomial standard error and Clopper-Pearson interval."""
    out = {}
    for n in sorted({r.n for r in rows}):
        sub = [r for r in rows if r.n == n]
        R = len(sub)
        k = sum(r.hit for r in sub)
        p = k / R
        ci = stats.binomtest(k, R).proportion_ci(0.95, method="exact")
        radii = np.array([r.effective_radius for r in sub])
        out[n] = Aggregate(n, R, k, p, math.sqrt(p * (1 - p) / R), float(ci.low),
                           float(ci.high), float(radii.mean()), float(np.median(radii)))
    return out


@dataclass
class CoverageReport:
    config: ExperimentConfig
    rows: list = field(default_factory=list)

    @property
    def aggregates(self) -> dict:
        return aggregate(self.rows)

    def coverage(self, n: float) -> float:
        return self.aggregates[float(n)].coverage

    def write_csv(self, fh) -> None:
        fh.write(COVERAGE_HEADER + "\n")
        for r in sorted(self.rows, key=lambda r: (r.n, r.replicate)):
            fh.write(r.csv() + "\n")

    def summary(self) -> str:
        lines = []
        for a in self.aggregates.values():
            lines.append(f"n={a.n:g} R={a.replicates} coverage={a.coverage:.4f} "
                         f"se={a.se:.4f} mean_radius={a.mean_radius:.6g}")
        return "\n".join(lines)


def run_replicate(cfg: ExperimentConfig, truth: sm.TruthSequence, n: float, r: int,
                  N: int) -> ReplicateRow:
    t0 = time.perf_counter()
    stream = derive(cfg.master_seed, "observation", n, r)
    X = sm.sample_observation(truth, n, N, stream)
    kind, a = parse_method(cfg.method)
    rq = cfg.radius_settings()
    if kind == "fixed_alpha":
        ball = fixed_alpha_ball(X, a, cfg.gamma, cfg.L, rq)
    elif kind == "eb_mle":
        ball = eb_credible_ball(X, cfg.estimator_config(), cfg.gamma, cfg.L, rq)
    elif kind == "eb_risk":
        ball = risk_credible_ball(X, cfg.estimator_config(), cfg.gamma, cfg.L, rq)
    else:
        mc = McmcConfig(cfg.D, cfg.burn_in, cfg.mcmc_draws,
                        rng_stream=derive(cfg.master_seed, "mcmc", n, r))
        chain = run_mcmc(X, HyperPrior.uniform(), mc)
        ball = hier_credible_ball(chain, cfg.gamma, cfg.L, n)
    hit, dist = contains(ball, truth)
    return ReplicateRow(float(n), int(r), hit, dist, ball.effective_radius,
                        float(ball.alpha_used), stream.tag, time.perf_counter() - t0)


def _task(args):
    return run_replicate(*args)


def worker_count() -> int:
    v = os.environ.get(THREADS_ENV)
    if not v:
        return 1
    try:
        return max(1, int(v))
    except ValueError as exc:
        raise ConfigError(f"{THREADS_ENV} must be an integer") from exc


def coverage_experiment(cfg: ExperimentConfig, truth: sm.TruthSequence | None = None,
                        replicates=None) -> CoverageReport:
    """Coverage of the configured ball over replicates at every n.

    ``replicates`` optionally restricts the run to a subset of replicate ids.
    """
    truth = truth if truth is not None else build_truth(cfg.truth_spec)
    ids = range(cfg.replicates) if replicates is None else replicates
    tasks = []
    for n in cfg.n_list:
        N = truncation(n, cfg.D, truth.support)
        if N > cfg.max_coordinates:
            raise ResourceError(f"truncation N={N} at n={n:g} exceeds the budget "
                                f"of {cfg.max_coordinates} coordinates")
        tasks.extend((cfg, truth, n, r, N) for r in ids)
    workers = worker_count()
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            rows = list(ex.map(_task, tasks, chunksize=8))
    else:
        rows = [_task(t) for t in tasks]
    rows.sort(key=lambda r: (r.n, r.replicate))
    report = CoverageReport(cfg, rows)
    if cfg.output_dir:
        write_report(report, cfg.output_dir)
    return report


def write_report(report: CoverageReport, output_dir) -> Path:
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "coverage.csv"
    with open(path, "w", newline="") as fh:
        report.write_csv(fh)
    summary = {repr(n): asdict(a) for n, a in report.aggregates.items()}
    with open(out / "coverage_summary.json", "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
    return path


def read_coverage_csv(fh) -> list:
    header = fh.readline().strip()
    if header != COVERAGE_HEADER:
        raise ConfigError(f"unexpected header {header!r}")
    rows = []
    for line in fh:
        n, rep, hit, dist, eff, a, tag = line.strip().split(",")
        rows.append(ReplicateRow(float(n), int(rep), hit == "1", float(dist), float(eff),
                                 float(a), tag))
    return rows
