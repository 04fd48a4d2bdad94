"""Deterministic quantities from the theory, used as oracles by tests and sweeps.

None of these feed the estimators; they check them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import special

from .conjugate import bias_weights
from .errors import DomainError
from .estimators import EstimatorConfig, first_crossing, rate_threshold
from .sequence_model import TruthSequence


@dataclass(frozen=True)
class BracketResult:
    alpha_lower: float
    alpha_upper: float

    def contains(self, alpha: float, strict: bool = False) -> bool:
        if strict:
            return self.alpha_lower < alpha < self.alpha_upper
        return self.alpha_lower <= alpha <= self.alpha_upper


def truncated_bias_sq_grid(theta: TruthSequence, alphas, n: float, k: int) -> np.ndarray:
    """B^2_{n,k}(alpha; theta) = sum_{i<=k} i^(2+4a) theta_i^2 / (i^(1+2a)+n)^2."""
    alphas = np.atleast_1d(np.asarray(alphas, dtype=float))
    th2 = theta.head(k) ** 2
    logi = np.log(np.arange(1, k + 1, dtype=float))
    p = np.exp((1.0 + 2.0 * alphas[:, None]) * logi)
    return ((p / (p + n)) ** 2) @ th2


def alpha_bracket(theta: TruthSequence, n: float, cfg: EstimatorConfig) -> BracketResult:
    """Deterministic thresholds at C1^2/2 and 2 C1^2 that sandwich the risk-based alpha."""
    k = cfg.k_n(n)
    grid = cfg.grid()
    cap = cfg.cap(n)

    def locate(C2):
        g = lambda a: truncated_bias_sq_grid(theta, a, n, k) - C2 * n ** (-2 * a / (1 + 2 * a))
        crossing, _ = first_crossing(g, grid)
        return cap if crossing is None else min(crossing, cap)

    C1sq = cfg.C1 ** 2
    return BracketResult(locate(C1sq / 2.0), locate(2.0 * C1sq))


def alpha_lower_bound(beta: float, M: float, n: float, cfg: EstimatorConfig) -> float:
    """beta - [(1/2 + beta) log(2M/C1^2) v C0] / log n, a lower bound on alpha_lower."""
    expo = max((0.5 + beta) * math.log(2.0 * M / cfg.C1 ** 2), cfg.C0)
    return beta - expo / math.log(n)


def h_n_diagnostic(theta: TruthSequence, alpha: float, n: float) -> float:
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    if not n > math.e:
        raise DomainError("h_n needs n > e")
    S = theta.support
    if S == 0:
        return 0.0
    i = np.arange(1, S + 1, dtype=float)
    p = i ** (1.0 + 2.0 * alpha)
    terms = n * n * p * np.log(i) * theta.coefficients ** 2 / (p + n) ** 2
    pref = (1.0 + 2.0 * alpha) / (n ** (1.0 / (1.0 + 2.0 * alpha)) * math.log(n))
    return float(pref * np.sum(terms))


def bias_estimator_variance(theta: TruthSequence, alpha: float, n: float, k: int,
                            identity: str = "gaussian") -> float:
    """Variance of the squared-bias estimator.

    ``identity="gaussian"`` uses Var(X_i^2) = 4 theta_i^2/n + 2/n^2, the correct
    value for X_i ~ N(theta_i, 1/n).  ``identity="as_printed"`` swaps the two
    constants (2 theta_i^2/n + 4/n^2) and exists only for comparison.
    """
    th2 = theta.head(k) ** 2
    if identity == "gaussian":
        v = 4.0 * th2 / n + 2.0 / n ** 2
    elif identity == "as_printed":
        v = 2.0 * th2 / n + 4.0 / n ** 2
    else:
        raise DomainError(f"unknown identity {identity!r}")
    return float(np.sum(bias_weights(alpha, n, k) ** 2 * v))


class TailSum(NamedTuple):
    exact: float
    bound: float
    halfwidth: float

    @property
    def holds(self) -> bool:
        return self.exact + self.halfwidth <= self.bound


def tail_sum_bound(N: int, k: float, m: float, rel_tol: float = 1e-16,
                   max_terms: int = 10 ** 7, chunk: int = 10 ** 6) -> TailSum:
    """sum_{i>N} i^(-1-k) (log i)^m against (1/N + 2/k) (log N)^m N^(-k).

    The sum is accumulated explicitly until terms drop below ``rel_tol`` times
    the running total (at most ``max_terms`` terms).  The remainder is enclosed
    by the integral test, so the true sum lies in exact +/- halfwidth.
    """
    if not (k > 0 and m >= 0):
        raise DomainError("need k > 0 and m >= 0")
    if N < math.exp(2.0 * m / k):
        raise DomainError("need N >= exp(2m/k)")
    partial = 0.0
    start = int(N) + 1
    done = 0
    while done < max_terms:
        size = min(chunk, max_terms - done)
        i = np.arange(start, start + size, dtype=float)
        terms = i ** (-1.0 - k) * np.log(i) ** m
        partial += float(np.sum(terms))
        start += size
        done += size
        if terms[-1] < rel_tol * partial:
            break
    # sum_{i >= start} f(i) <= int_{start-1}^inf f, f decreasing there
    last = start - 1
    remainder = float(special.gammaincc(m + 1.0, k * math.log(last))
                      * special.gamma(m + 1.0) / k ** (m + 1.0))
    bound = (1.0 / N + 2.0 / k) * math.log(N) ** m * float(N) ** (-k)
    return TailSum(partial + remainder / 2.0, bound, remainder / 2.0)


def _log_f(alpha: float, n: float) -> float:
    """log f_n(alpha) for f_n(alpha) = n^(-2 alpha/(1+2 alpha)); nan when undefined."""
    if 1.0 + 2.0 * alpha <= 0:
        return math.nan
    return -2.0 * alpha / (1.0 + 2.0 * alpha) * math.log(n)


def f_n_shift_margins(alpha: float, n: float, K: float, D: float):
    """Slack of the four shift inequalities on the log scale (>= 0 means it holds)."""
    h = K / math.log(n)
    f0 = _log_f(alpha, n)
    fm = _log_f(alpha - h, n) - f0
    fp = _log_f(alpha + h, n) - f0
    return (
        fm - 2.0 * K / (1.0 + 4.0 * D) ** 2,
        2.0 * K / (0.5 + 2.0 * D) ** 2 - fm,
        fp + 2.0 * K / (1.0 + 2.0 * D) ** 2,
        -2.0 * K / (1.0 + 4.0 * D) ** 2 - fp,
    )


def f_n_shift_bounds(alpha: float, n: float, K: float, D: float, tol: float = 1e-12) -> bool:
    """True iff f_n(alpha -/+ K/log n) lies between the stated multiples of f_n(alpha)."""
    if not D <= alpha <= 2 * D:
        raise DomainError("alpha must lie in [D, 2D]")
    if not K > 0:
        raise DomainError("K must be positive")
    if n < math.exp(K / 4.0):
        raise DomainError("need n >= exp(K/4)")
    margins = f_n_shift_margins(alpha, n, K, D)
    return all(mg >= -tol * (1.0 + K) for mg in margins)
