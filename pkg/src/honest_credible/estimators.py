"""Data-driven choices of the prior regularity alpha on [D, 2D].

``mle_alpha`` maximises the marginal likelihood; ``risk_alpha`` takes the
smallest alpha at which an unbiased estimate of the squared bias of the
posterior mean reaches C1^2 n^(-2 alpha/(1+2 alpha)), capped near 2D.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .conjugate import log_marginal_likelihood, log_marginal_likelihood_grid
from .errors import DomainError, TruncationError
from .sequence_model import Observation

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class EstimatorConfig:
    D: float = 1.0
    C1: float = 1.0 / 3.0
    gamma: float = 0.05
    C0_override: float | None = None
    grid_size: int = 512
    k_n_override: int | None = None

    def __post_init__(self):
        if not (self.D > 0 and self.C1 > 0):
            raise DomainError("D and C1 must be positive")
        if not 0 < self.gamma < 1:
            raise DomainError("gamma must lie in (0, 1)")
        if self.grid_size < 64:
            raise DomainError("grid_size must be at least 64")
        if self.C0_override is not None and self.C0_override < 0:
            raise DomainError("C0_override must be nonnegative")

    @property
    def C0(self) -> float:
        return compute_C0(self) if self.C0_override is None else float(self.C0_override)

    def k_n(self, n: float) -> int:
        if self.k_n_override is not None:
            return int(self.k_n_override)
        return k_n_default(n, self.D)

    def grid(self) -> np.ndarray:
        return np.linspace(self.D, 2.0 * self.D, self.grid_size)

    def cap(self, n: float) -> float:
        """(2D - C0/log n) v D, the upper limit of the risk-based estimator."""
        if not n > 1:
            raise DomainError("n must exceed 1")
        return max(2.0 * self.D - self.C0 / math.log(n), self.D)


@dataclass(frozen=True, eq=False)
class AlphaSelection:
    alpha: float
    method: str
    grid: np.ndarray
    values: np.ndarray
    threshold: np.ndarray | None = None


def k_n_default(n: float, D: float) -> int:
    """ceil(n^(2/(1+4D))), the number of coordinates used by the bias estimator."""
    return int(math.ceil(round(n ** (2.0 / (1.0 + 4.0 * D)), 9)))


def compute_C0(cfg: EstimatorConfig) -> float:
    D, C1, g = cfg.D, cfg.C1, cfg.gamma
    return max((1.0 + 4.0 * D) ** 2 * math.log(25.0 / (C1 * C1 * g)) / 2.0, 0.0)


def rate_threshold(alpha, n: float, C: float):
    """C^2 n^(-2 alpha/(1+2 alpha))."""
    alpha = np.asarray(alpha, dtype=float)
    return C * C * n ** (-2.0 * alpha / (1.0 + 2.0 * alpha))


def golden_section_max(f, a: float, b: float, tol: float = 1e-10, maxiter: int = 200):
    """Maximise a unimodal f on [a, b]; returns (x, f(x))."""
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


def mle_alpha(X: Observation, cfg: EstimatorConfig) -> AlphaSelection:
    """Grid maximiser of l_n on [D, 2D], sharpened by golden section in its cell."""
    grid = cfg.grid()
    vals = log_marginal_likelihood_grid(X, grid)
    j = int(np.argmax(vals))
    best_a, best_v = float(grid[j]), float(vals[j])
    lo, hi = grid[max(j - 1, 0)], grid[min(j + 1, grid.size - 1)]
    a, v = golden_section_max(lambda t: log_marginal_likelihood(X, t), lo, hi)
    if v > best_v:
        best_a = float(a)
    return AlphaSelection(best_a, "mle", grid, vals)


def bias_estimator_grid(X: Observation, alphas, k: int) -> np.ndarray:
    if k > X.N:
        raise TruncationError(f"k_n={k} exceeds the observation length {X.N}")
    alphas = np.atleast_1d(np.asarray(alphas, dtype=float))
    logi = np.log(np.arange(1, k + 1, dtype=float))
    p = np.exp((1.0 + 2.0 * alphas[:, None]) * logi)
    w = (p / (p + X.n)) ** 2
    return w @ (X.values[:k] ** 2 - 1.0 / X.n)


def bias_estimator(X: Observation, alpha: float, cfg: EstimatorConfig) -> float:
    """Unbiased estimate of the squared bias over the first k_n coordinates (may be < 0)."""
    return float(bias_estimator_grid(X, [alpha], cfg.k_n(X.n))[0])


def first_crossing(g, grid: np.ndarray, tol: float = 1e-6):
    """Approximate inf{a in grid range: g(a) >= 0} by a left-to-right scan and bisection.

    ``g`` maps an array of alphas to values.  Returns None when no grid point
    satisfies the inequality.
    """
    vals = g(grid)
    hits = np.flatnonzero(vals >= 0)
    if hits.size == 0:
        return None, vals
    j = int(hits[0])
    if j == 0:
        return float(grid[0]), vals
    lo, hi = float(grid[j - 1]), float(grid[j])
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if g(np.array([mid]))[0] >= 0:
            hi = mid
        else:
            lo = mid
    return hi, vals


def risk_alpha(X: Observation, cfg: EstimatorConfig) -> AlphaSelection:
    k = cfg.k_n(X.n)
    if k > X.N:
        raise TruncationError(f"k_n={k} exceeds the observation length {X.N}")
    grid = cfg.grid()
    g = lambda a: bias_estimator_grid(X, a, k) - rate_threshold(a, X.n, cfg.C1)
    crossing, _ = first_crossing(g, grid)
    cap = cfg.cap(X.n)
    alpha = cap if crossing is None else min(crossing, cap)
    return AlphaSelection(float(alpha), "risk", grid, bias_estimator_grid(X, grid, k),
                          rate_threshold(grid, X.n, cfg.C1))


def honesty_L_threshold(D: float, C1: float, M: float) -> float:
    """Smallest inflation factor covered by the honesty guarantee."""
    return math.sqrt(8.0 * (1.0 + 3.0 ** (1.0 + 4.0 * D))) * (
        math.sqrt(6.0) + math.sqrt(2.0 * (C1 * C1 + M)))


def adaptivity_K_constant(D: float, beta: float, C1: float, M: float, C0: float) -> float:
    """Constant K in the rate bound r <= K n^(-beta/(1+2 beta))."""
    expo = max((0.5 + beta) * math.log(2.0 * M / (C1 * C1)), C0)
    return math.sqrt(3.0 + 2.0 / D) * math.exp(2.0 * expo / (0.5 + 2.0 * D) ** 2)


def write_diagnostics(sel: AlphaSelection, fh) -> None:
    """CSV with columns alpha,value,threshold (threshold empty for the MLE)."""
    fh.write("alpha,value,threshold\n")
    thr = sel.threshold
    for j, a in enumerate(sel.grid):
        t = "" if thr is None else repr(float(thr[j]))
        fh.write(f"{float(a)!r},{float(sel.values[j])!r},{t}\n")
