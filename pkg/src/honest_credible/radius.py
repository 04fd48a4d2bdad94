"""Deterministic credible-ball radius for a fixed regularity.

Under the fixed-alpha posterior, ||theta - theta_hat||^2 is distributed as
sum_i s_i W_i with s_i = 1/(i^(1+2 alpha) + n) and W_i iid chi-square(1).
The radius is the square root of its (1 - gamma)-quantile.
"""

from __future__ import annotations

import math
from collections import OrderedDict
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import stats

from .conjugate import posterior_variances
from .errors import DomainError, ResourceError
from .rng import Stream, as_generator

METHODS = ("monte_carlo", "cumulant_approx")
DEFAULT_DRAWS = 20_000
DEFAULT_STREAM = Stream(0, "radius")

# Coordinates whose combined share of the variance of the weighted sum is
# below this are replaced by their exact mean.
TAIL_VARIANCE_SHARE = 1e-4
_BLOCK = 256
_CACHE_BYTES = 256 * 2 ** 20
# Refuse Monte-Carlo work beyond this many chi-square cells (draws x head).
MAX_DRAW_CELLS = 2 ** 28


@dataclass(frozen=True)
class RadiusQuery:
    alpha: float
    n: float
    gamma: float
    N: int
    method: str = "monte_carlo"
    mc_draws: int = DEFAULT_DRAWS
    rng_stream: object = field(default=DEFAULT_STREAM)

    def __post_init__(self):
        if not (self.alpha > 0 and self.n > 0):
            raise DomainError("need alpha > 0 and n > 0")
        if not 0 < self.gamma < 1:
            raise DomainError("gamma must lie in (0, 1)")
        if self.method not in METHODS:
            raise DomainError(f"unknown radius method {self.method!r}")
        if self.method == "monte_carlo" and self.mc_draws < 1000:
            raise DomainError("monte_carlo needs at least 1000 draws")


def order_statistic_index(gamma: float, m: int) -> int:
    """1-based index ceil((1 - gamma) m) of the conservative empirical quantile."""
    return max(1, min(m, math.ceil(round((1.0 - gamma) * m, 9))))


class _ChiSquareBlocks:
    """Column blocks of chi-square(1) draws, cached per stream.

    Block b is generated from its own child stream, so the first k columns are
    the same no matter how many columns a caller asks for.  This is what makes
    repeated radius evaluations at different alphas use common random numbers.
    """

    def __init__(self, max_bytes: int = _CACHE_BYTES):
        self.max_bytes = max_bytes
        self._store: OrderedDict = OrderedDict()
        self._bytes = 0

    def block(self, stream: Stream, draws: int, b: int) -> np.ndarray:
        key = (stream.key, draws, b)
        arr = self._store.get(key)
        if arr is not None:
            self._store.move_to_end(key)
            return arr
        arr = stream.child(f"chi2-block-{b}").generator().standard_normal((draws, _BLOCK))
        np.square(arr, out=arr)
        arr.setflags(write=False)
        self._store[key] = arr
        self._bytes += arr.nbytes
        while self._bytes > self.max_bytes and len(self._store) > 1:
            _, old = self._store.popitem(last=False)
            self._bytes -= old.nbytes
        return arr

    def clear(self):
        self._store.clear()
        self._bytes = 0


_blocks = _ChiSquareBlocks()


def head_size(weights: np.ndarray, share: float = TAIL_VARIANCE_SHARE) -> int:
    """Smallest m such that coordinates past m carry at most ``share`` of the variance."""
    w2 = np.asarray(weights, float) ** 2
    total = w2.sum()
    if total == 0.0:
        return 0
    tail = total - np.cumsum(w2)
    return int(np.argmax(tail <= share * total)) + 1


def weighted_sum_draws(weights, mc_draws: int, rng_stream=DEFAULT_STREAM,
                       m: int | None = None) -> np.ndarray:
    """Realisations of sum_i w_i W_i with the tail past ``m`` set to its mean."""
    w = np.asarray(weights, dtype=float)
    if m is None:
        m = head_size(w)
    m = min(int(m), w.size)
    tail_mean = float(w[m:].sum())
    out = np.full(int(mc_draws), tail_mean)
    if m == 0:
        return out
    if m * int(mc_draws) > MAX_DRAW_CELLS:
        raise ResourceError(f"{mc_draws} draws x {m} coordinates exceeds the Monte-Carlo budget")
    if isinstance(rng_stream, Stream):
        for b in range(-(-m // _BLOCK)):
            lo, hi = b * _BLOCK, min((b + 1) * _BLOCK, m)
            out += _blocks.block(rng_stream, int(mc_draws), b)[:, : hi - lo] @ w[lo:hi]
    else:
        gen = as_generator(rng_stream)
        out += np.square(gen.standard_normal((int(mc_draws), m))) @ w[:m]
    return out


def cumulant_quantile(weights, gamma: float) -> float:
    """(1-gamma)-quantile of sum w_i W_i from a three-cumulant shifted-gamma fit."""
    w = np.asarray(weights, dtype=float)
    k1 = w.sum()
    k2 = 2.0 * np.sum(w ** 2)
    k3 = 8.0 * np.sum(w ** 3)
    if k2 == 0.0:
        return float(k1)
    scale = k3 / (2.0 * k2)
    shape = 4.0 * k2 ** 3 / k3 ** 2
    shift = k1 - shape * scale
    return float(shift + scale * stats.gamma.ppf(1.0 - gamma, shape))


def weighted_chi2_quantile(weights, gamma: float, method: str = "monte_carlo",
                           mc_draws: int = DEFAULT_DRAWS, rng_stream=DEFAULT_STREAM) -> float:
    if not 0 < gamma < 1:
        raise DomainError("gamma must lie in (0, 1)")
    w = np.asarray(weights, dtype=float)
    if w.size == 0 or not np.any(w):
        return 0.0
    if method == "cumulant_approx":
        return cumulant_quantile(w, gamma)
    if method != "monte_carlo":
        raise DomainError(f"unknown radius method {method!r}")
    s = weighted_sum_draws(w, mc_draws, rng_stream)
    k = order_statistic_index(gamma, s.size)
    return float(np.partition(s, k - 1)[k - 1])


@lru_cache(maxsize=65536)
def _radius_cached(alpha, n, gamma, N, method, mc_draws, stream):
    w = posterior_variances(alpha, n, N)
    return math.sqrt(weighted_chi2_quantile(w, gamma, method, mc_draws, stream))


def credible_radius(q: RadiusQuery) -> float:
    """r_{n,gamma}(alpha): posterior mass 1-gamma within this distance of the mean."""
    if q.N <= 0:
        return 0.0
    if isinstance(q.rng_stream, Stream) or q.method == "cumulant_approx":
        stream = q.rng_stream if isinstance(q.rng_stream, Stream) else None
        return _radius_cached(float(q.alpha), float(q.n), float(q.gamma), int(q.N),
                              q.method, int(q.mc_draws), stream)
    w = posterior_variances(q.alpha, q.n, q.N)
    return math.sqrt(weighted_chi2_quantile(w, q.gamma, q.method, q.mc_draws, q.rng_stream))


def radius(alpha: float, n: float, gamma: float, N: int, method: str = "monte_carlo",
           mc_draws: int = DEFAULT_DRAWS, rng_stream=DEFAULT_STREAM) -> float:
    return credible_radius(RadiusQuery(alpha, n, gamma, N, method, mc_draws, rng_stream))


def radius_sweep(alphas, n: float, gamma: float, N: int, mc_draws: int = DEFAULT_DRAWS,
                 rng_stream=DEFAULT_STREAM) -> np.ndarray:
    """Monte-Carlo radii over many alphas sharing one matrix of chi-square draws.

    The explicit head length is fixed by the smallest alpha, so every sample
    path is nonincreasing in alpha and so is the returned sequence.
    """
    alphas = np.asarray(alphas, dtype=float)
    m = head_size(posterior_variances(float(alphas.min()), n, N))
    if not isinstance(rng_stream, Stream):
        gen = as_generator(rng_stream)
        W = np.square(gen.standard_normal((int(mc_draws), m)))
    k = order_statistic_index(gamma, int(mc_draws))
    out = np.empty(alphas.size)
    for j, a in enumerate(alphas):
        w = posterior_variances(a, n, N)
        if isinstance(rng_stream, Stream):
            s = weighted_sum_draws(w, mc_draws, rng_stream, m=m)
        else:
            s = W @ w[:m] + w[m:].sum()
        out[j] = math.sqrt(np.partition(s, k - 1)[k - 1])
    return out


def radius_bounds(alpha1: float, alpha2: float, n: float, gamma: float):
    """Deterministic bracket for r_{n,gamma} over [alpha1, alpha2].

    Returns ``(lower, upper, n_min)``; the bracket is guaranteed for n >= n_min.
    """
    if not 0 < alpha1 <= alpha2:
        raise DomainError("need 0 < alpha1 <= alpha2")
    c = (1.0 + 3.0 ** (1.0 + 2.0 * alpha2)) ** -0.5 / math.sqrt(2.0)
    C = math.sqrt(3.0 + 2.0 / alpha1)
    lower = c * n ** (-alpha2 / (1.0 + 2.0 * alpha2))
    upper = C * n ** (-alpha1 / (1.0 + 2.0 * alpha1))
    n_min = (10.0 * (1.0 + 3.0 ** (1.0 + 2.0 * alpha2)) / (1.0 - gamma)) ** (1.0 + 2.0 * alpha2)
    return lower, upper, n_min


@dataclass(frozen=True)
class RadiusSettings:
    """How to evaluate radii inside ball constructions."""

    method: str = "monte_carlo"
    mc_draws: int = DEFAULT_DRAWS
    rng_stream: object = field(default=DEFAULT_STREAM)

    def query(self, alpha: float, n: float, gamma: float, N: int) -> RadiusQuery:
        return RadiusQuery(alpha, n, gamma, N, self.method, self.mc_draws, self.rng_stream)
