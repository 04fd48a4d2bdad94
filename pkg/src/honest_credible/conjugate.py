"""Fixed-alpha conjugate computations for the prior N(0, i^(-1-2 alpha)).

Given alpha, the posterior is Gaussian with coordinates

    mean_i = n X_i / (i^(1+2 alpha) + n),   var_i = 1 / (i^(1+2 alpha) + n).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .rng import as_generator
from .sequence_model import Observation, TruthSequence


def prior_precisions(alpha: float, N: int) -> np.ndarray:
    """i^(1+2 alpha) for i = 1..N."""
    return np.arange(1, int(N) + 1, dtype=float) ** (1.0 + 2.0 * alpha)


def posterior_variances(alpha: float, n: float, N: int) -> np.ndarray:
    return 1.0 / (prior_precisions(alpha, N) + n)


def bias_weights(alpha: float, n: float, N: int) -> np.ndarray:
    """(i^(1+2a) / (i^(1+2a) + n))^2 = i^(2+4a) / (i^(1+2a) + n)^2, each in (0, 1)."""
    p = prior_precisions(alpha, N)
    return (p / (p + n)) ** 2


@dataclass(frozen=True, eq=False)
class FixedAlphaPosterior:
    alpha: float
    n: float
    means: np.ndarray
    variances: np.ndarray

    @property
    def N(self) -> int:
        return int(self.means.size)


def posterior_params(X: Observation, alpha: float) -> FixedAlphaPosterior:
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    p = prior_precisions(alpha, X.N)
    denom = p + X.n
    return FixedAlphaPosterior(float(alpha), X.n, X.n * X.values / denom, 1.0 / denom)


def log_marginal_likelihood(X: Observation, alpha: float) -> float:
    """l_n(alpha) truncated at N, relative to the product of N(0, 1/n) laws."""
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    p = prior_precisions(alpha, X.N)
    n = X.n
    terms = np.log1p(n / p) - n * n * X.values ** 2 / (p + n)
    return float(-0.5 * np.sum(terms))


def log_marginal_likelihood_grid(X: Observation, alphas, chunk: int = 2 ** 22) -> np.ndarray:
    """Vectorised l_n over an array of alphas."""
    alphas = np.atleast_1d(np.asarray(alphas, dtype=float))
    if np.any(alphas <= 0):
        raise DomainError("alpha must be positive")
    logi = np.log(np.arange(1, X.N + 1, dtype=float))
    x2 = X.n * X.n * X.values ** 2
    out = np.empty(alphas.size)
    rows = max(1, chunk // max(X.N, 1))
    for s in range(0, alphas.size, rows):
        a = alphas[s:s + rows, None]
        p = np.exp((1.0 + 2.0 * a) * logi)
        out[s:s + rows] = -0.5 * np.sum(np.log1p(X.n / p) - x2 / (p + X.n), axis=1)
    return out


def likelihood_tail_bound(n: float, alpha: float, N: int) -> float:
    """Upper bound n N^(-2 alpha) / (2 alpha) on the neglected sum over i > N."""
    return float(n * float(N) ** (-2.0 * alpha) / (2.0 * alpha))


def posterior_mean_bias(theta: TruthSequence, alpha: float, n: float, N: int):
    """Squared bias ||E theta_hat - theta_0||^2 of the posterior mean truncated at N.

    Returns ``(bias_sq, per_index)`` where ``per_index`` holds the i <= N terms.
    Truth coefficients beyond N enter with weight one.
    """
    if not (alpha > 0 and n > 0):
        raise DomainError("alpha and n must be positive")
    per_index = bias_weights(alpha, n, N) * theta.head(N) ** 2
    return float(np.sum(per_index) + theta.tail_sq(N)), per_index


def expected_posterior_mean(theta: TruthSequence, alpha: float, n: float, N: int) -> np.ndarray:
    p = prior_precisions(alpha, N)
    return n * theta.head(N) / (p + n)


def sample_posterior(post: FixedAlphaPosterior, m: int, rng_stream) -> np.ndarray:
    """``m`` independent draws, shape (m, N)."""
    if m < 1:
        raise DomainError("need at least one draw")
    gen = as_generator(rng_stream)
    z = gen.standard_normal((int(m), post.N))
    return post.means + z * np.sqrt(post.variances)
