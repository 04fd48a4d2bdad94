"""Function-space pictures of the three credible sets on the simulation truth.

For every n one data set is simulated and shared by all methods.  Each panel
shows the truth, the posterior mean and the pointwise envelope of the
ceil((1-gamma) m) posterior draws closest (in l2) to the posterior mean,
mapped through the cosine basis and restricted to a window of [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import sequence_model as sm
from .conjugate import posterior_params, sample_posterior
from .estimators import EstimatorConfig, mle_alpha, risk_alpha
from .experiments import truncation
from .hierarchical import HyperPrior, McmcConfig, closest_draws, hier_posterior_mean, run_mcmc
from .rng import derive

PANEL_HEADER = "t,truth,center,env_lo,env_hi"
COLORS = {"eb_mle": "#d62728", "hierarchical": "#1f77b4", "eb_risk": "#2ca02c"}


@dataclass(frozen=True)
class FigureConfig:
    n_list: tuple = (1e2, 1e4, 1e5, 1e6, 5e6)
    methods: tuple = ("eb_mle", "hierarchical", "eb_risk")
    D: float = 1.0
    gamma: float = 0.05
    C1: float = 1.0 / 3.0
    risk_C0: float | None = 0.0
    draws: int = 800
    burn_in: int = 3200
    window: tuple = (0.3, 0.35)
    t_points: int = 512
    master_seed: int = 0
    output_dir: str | None = None
    truth: sm.TruthSequence | None = field(default=None, compare=False)


@dataclass(frozen=True, eq=False)
class Panel:
    method: str
    n: float
    alpha: float
    t: np.ndarray
    truth: np.ndarray
    center: np.ndarray
    env_lo: np.ndarray
    env_hi: np.ndarray

    @property
    def truth_inside(self) -> np.ndarray:
        return (self.truth >= self.env_lo) & (self.truth <= self.env_hi)

    @property
    def covered_fraction(self) -> float:
        return float(np.mean(self.truth_inside))

    def write_csv(self, fh) -> None:
        fh.write(PANEL_HEADER + "\n")
        for row in zip(self.t, self.truth, self.center, self.env_lo, self.env_hi):
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def _envelope(draws: np.ndarray, t: np.ndarray):
    f = sm.coefficients_to_function(draws, t)
    return f.min(axis=0), f.max(axis=0)


def make_panel(X: sm.Observation, truth: sm.TruthSequence, method: str, cfg: FigureConfig,
               t: np.ndarray, seed_n: float) -> Panel:
    ecfg = EstimatorConfig(cfg.D, cfg.C1, cfg.gamma,
                           cfg.risk_C0 if method == "eb_risk" else None)
    if method == "hierarchical":
        mc = McmcConfig(cfg.D, cfg.burn_in, cfg.draws,
                        rng_stream=derive(cfg.master_seed, "figure-mcmc", seed_n))
        chain = run_mcmc(X, HyperPrior.uniform(), mc)
        center = hier_posterior_mean(chain)
        kept = closest_draws(chain, cfg.gamma)
        alpha = float(np.mean(chain.alpha_draws))
    else:
        sel = mle_alpha(X, ecfg) if method == "eb_mle" else risk_alpha(X, ecfg)
        alpha = sel.alpha
        post = posterior_params(X, alpha)
        center = post.means
        draws = sample_posterior(post, cfg.draws,
                                 derive(cfg.master_seed, f"figure-draws/{method}", seed_n))
        d = np.sqrt(np.sum((draws - center) ** 2, axis=1))
        k = math.ceil(round((1.0 - cfg.gamma) * cfg.draws, 9))
        kept = draws[np.argsort(d, kind="stable")[:k]]
    lo, hi = _envelope(kept, t)
    return Panel(method, X.n, alpha, t, sm.truth_function_values(truth, t),
                 sm.coefficients_to_function(center, t), lo, hi)


def figure_panels(cfg: FigureConfig) -> dict:
    """Panels keyed by (method, n)."""
    truth = cfg.truth if cfg.truth is not None else sm.make_sim_truth()
    t = np.linspace(cfg.window[0], cfg.window[1], cfg.t_points)
    panels = {}
    for n in cfg.n_list:
        N = truncation(n, cfg.D, truth.support)
        X = sm.sample_observation(truth, n, N, derive(cfg.master_seed, "figure-observation", n))
        for method in cfg.methods:
            panels[(method, float(n))] = make_panel(X, truth, method, cfg, t, n)
    return panels


def _svg_path(xs, ys, sx, sy) -> str:
    pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(xs, ys))
    return pts


def render_svg(panels, title: str, cols: int = 3) -> str:
    """Grid of panels as plain SVG polylines and polygons."""
    w, h, pad = 300, 200, 30
    rows = -(-len(panels) // cols)
    W, H = cols * (w + pad) + pad, rows * (h + pad) + pad + 20
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
           f'viewBox="0 0 {W} {H}">',
           f'<text x="{pad}" y="18" font-family="sans-serif" font-size="14">{title}</text>']
    for k, p in enumerate(panels):
        ox = pad + (k % cols) * (w + pad)
        oy = 20 + pad + (k // cols) * (h + pad)
        ys = np.concatenate([p.truth, p.center, p.env_lo, p.env_hi])
        y0, y1 = float(ys.min()), float(ys.max())
        if y1 == y0:
            y1 = y0 + 1.0
        t0, t1 = float(p.t[0]), float(p.t[-1])
        sx = lambda x: ox + (x - t0) / (t1 - t0) * w
        sy = lambda y: oy + h - (y - y0) / (y1 - y0) * h
        band = _svg_path(np.concatenate([p.t, p.t[::-1]]),
                         np.concatenate([p.env_lo, p.env_hi[::-1]]), sx, sy)
        out.append(f'<rect x="{ox}" y="{oy}" width="{w}" height="{h}" fill="none" stroke="#999"/>')
        out.append(f'<polygon points="{band}" fill="#bbbbbb" stroke="none"/>')
        out.append(f'<polyline points="{_svg_path(p.t, p.center, sx, sy)}" fill="none" '
                   f'stroke="{COLORS.get(p.method, "#000")}" stroke-width="1.2"/>')
        out.append(f'<polyline points="{_svg_path(p.t, p.truth, sx, sy)}" fill="none" '
                   f'stroke="#000" stroke-width="1.2"/>')
        out.append(f'<text x="{ox + 4}" y="{oy + 14}" font-family="sans-serif" '
                   f'font-size="11">n={p.n:g}  alpha={p.alpha:.3f}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def reproduce_figures(cfg: FigureConfig) -> dict:
    """Compute all panels; with ``output_dir`` set, write one CSV per panel and one SVG per method."""
    panels = figure_panels(cfg)
    if cfg.output_dir:
        out = Path(cfg.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        for (method, n), p in panels.items():
            with open(out / f"{method}_n{n:g}.csv", "w", newline="") as fh:
                p.write_csv(fh)
        for method in cfg.methods:
            ps = [panels[(method, float(n))] for n in cfg.n_list]
            (out / f"figure_{method}.svg").write_text(render_svg(ps, method))
    return panels
