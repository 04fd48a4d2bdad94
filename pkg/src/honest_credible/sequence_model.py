"""Truth sequences, Sobolev norms and observations of the Gaussian sequence model.

Coefficients are indexed from 1 in the mathematics and stored 0-based, so
``coefficients[i - 1]`` is the i-th coefficient.  A truth has finite support;
every coefficient past the stored array is exactly zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, InvalidInputError, TruncationError
from .rng import Stream, as_generator

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class TruthSequence:
    coefficients: np.ndarray
    label: str = "truth"
    beta_nominal: float | None = None

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=float).ravel()
        if not np.all(np.isfinite(c)):
            raise InvalidInputError("truth coefficients must be finite")
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else c[:0]
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @property
    def support(self) -> int:
        """Largest index carrying a nonzero coefficient (0 for the zero sequence)."""
        return int(self.coefficients.size)

    def padded(self, N: int) -> np.ndarray:
        """Coefficients 1..N; raises if the support does not fit."""
        if N < self.support:
            raise TruncationError(f"truncation N={N} is below the truth support {self.support}")
        out = np.zeros(int(N))
        out[: self.support] = self.coefficients
        return out

    def head(self, N: int) -> np.ndarray:
        """Coefficients 1..N, silently dropping anything beyond N."""
        out = np.zeros(int(N))
        m = min(int(N), self.support)
        out[:m] = self.coefficients[:m]
        return out

    def tail_sq(self, N: int) -> float:
        """Exact squared norm of the coefficients with index > N."""
        return float(np.sum(self.coefficients[int(N):] ** 2))

    def norm_sq(self) -> float:
        return float(np.sum(self.coefficients ** 2))

    def __eq__(self, other):
        if not isinstance(other, TruthSequence):
            return NotImplemented
        return (self.label == other.label and self.beta_nominal == other.beta_nominal
                and np.array_equal(self.coefficients, other.coefficients))

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Observation:
    values: np.ndarray
    n: float
    seed_info: str = ""

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).ravel()
        if self.n <= 0:
            raise DomainError("noise level n must be positive")
        if not np.all(np.isfinite(v)):
            raise InvalidInputError("observation values must be finite")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "n", float(self.n))

    @property
    def N(self) -> int:
        return int(self.values.size)


@dataclass(frozen=True)
class SobolevBallSpec:
    beta: float
    M: float

    def __post_init__(self):
        if not (self.beta > 0 and self.M > 0):
            raise DomainError("Sobolev ball needs beta > 0 and M > 0")

    def contains(self, theta: TruthSequence) -> bool:
        return sobolev_norm_sq(theta, self.beta) <= self.M


def _indices(m: int) -> np.ndarray:
    return np.arange(1, m + 1, dtype=float)


def sobolev_norm_sq(theta, beta: float) -> float:
    """Sum of theta_i^2 i^(2 beta) over the support."""
    if not beta > 0:
        raise DomainError("beta must be positive")
    c = theta.coefficients if isinstance(theta, TruthSequence) else np.asarray(theta, float)
    if not np.all(np.isfinite(c)):
        raise InvalidInputError("coefficients must be finite")
    i = _indices(c.size)
    return float(np.sum(c ** 2 * i ** (2.0 * beta)))


def scale_to_ball(theta: TruthSequence, beta: float, M: float) -> TruthSequence:
    """Rescale so that the S^beta norm is at most M (largest such multiple)."""
    norm = sobolev_norm_sq(theta, beta)
    if norm == 0.0:
        return theta
    c = theta.coefficients * math.sqrt(M / norm)
    while sobolev_norm_sq(c, beta) > M:
        c = c * (1.0 - 1e-15)
    return TruthSequence(c, theta.label, theta.beta_nominal)


def sample_observation(theta: TruthSequence, n: float, N: int, rng_stream) -> Observation:
    """Draw X_i = theta_i + Z_i / sqrt(n) for i = 1..N."""
    if not n > 0:
        raise DomainError("n must be positive")
    mean = theta.padded(N)
    gen = as_generator(rng_stream)
    z = gen.standard_normal(int(N))
    tag = rng_stream.tag if isinstance(rng_stream, Stream) else ""
    return Observation(mean + z / math.sqrt(n), n, tag)


class Counterexample(NamedTuple):
    truth: TruthSequence
    schedule: list
    K: float
    blocks: list


def growth_schedule(J: int, D: float, n1: int = 2, c_grow: float = 2.0) -> list:
    """n_1 = n1, n_j = ceil(c_grow * n_{j-1}^(1+4D)); exact integers when possible."""
    e = 1.0 + 4.0 * D
    out = [int(n1)]
    for _ in range(1, J):
        prev = out[-1]
        if float(e).is_integer() and float(c_grow).is_integer():
            out.append(int(c_grow) * prev ** int(e))
        else:
            try:
                out.append(math.ceil(c_grow * float(prev) ** e))
            except OverflowError as exc:
                raise DomainError("schedule overflows; reduce J") from exc
    return out


def counterexample_blocks(schedule, beta: float) -> list:
    """Index ranges [lo, hi] with n_j^(1/(1+2 beta)) <= i < 2 n_j^(1/(1+2 beta))."""
    blocks = []
    for nj in schedule:
        x = float(nj) ** (1.0 / (1.0 + 2.0 * beta))
        lo = math.ceil(x)
        hi = math.ceil(2.0 * x) - 1
        blocks.append((lo, hi))
    return blocks


def make_counterexample(beta: float, K: float, D: float, J: int, N: int,
                        target: tuple | None = None, c_grow: float = 2.0,
                        n1: int = 2) -> Counterexample:
    """Sparse-block truth on which marginal-likelihood empirical Bayes undercovers.

    theta_i^2 = K i^(-1-2 beta) on the block attached to each n_j of the growth
    schedule and zero elsewhere.  With ``target=(beta_prime, M)`` the constant
    K is lowered, if needed, so the truth lies in S^beta_prime(M).
    """
    if not D <= beta < 2 * D:
        raise DomainError("counterexample needs D <= beta < 2D")
    if K < 0 or J < 1:
        raise DomainError("need K >= 0 and J >= 1")
    schedule = growth_schedule(J, D, n1, c_grow)
    blocks = counterexample_blocks(schedule, beta)
    if blocks[-1][1] > N:
        raise TruncationError(f"block {J} ends at {blocks[-1][1]} > N={N}")
    sq = np.zeros(blocks[-1][1])
    for lo, hi in blocks:
        i = np.arange(lo, hi + 1, dtype=float)
        sq[lo - 1:hi] = i ** (-1.0 - 2.0 * beta)
    unit = TruthSequence(np.sqrt(sq), "counterexample", beta)
    if target is not None:
        beta_p, M = target
        norm1 = sobolev_norm_sq(unit, beta_p)
        if K * norm1 > M:
            K = M / norm1
            while K * norm1 > M or sobolev_norm_sq(unit.coefficients * math.sqrt(K), beta_p) > M:
                K = math.nextafter(K, 0.0)
    truth = TruthSequence(unit.coefficients * math.sqrt(K), f"counterexample(beta={beta})", beta)
    return Counterexample(truth, schedule, float(K), blocks)


def make_sim_truth(cap: int = 10 ** 6) -> TruthSequence:
    """The irregular truth of the simulation study, truncated at index ``cap``."""
    top = min(int(cap), 150)
    c = np.zeros(top)
    i = _indices(top)
    a = (i >= 10) & (i <= 20)
    c[a] = np.sin(i[a]) * 10 ** -1.7
    b = (i >= 100) & (i <= 150)
    c[b] = 3.0 * np.sin(i[b]) * 100 ** -1.7
    j = 2
    while 4 ** (4 ** j) <= cap:
        lo, hi = 4 ** (4 ** j), min(2 * 4 ** (4 ** j), int(cap))
        if hi > c.size:
            c = np.concatenate([c, np.zeros(hi - c.size)])
        k = np.arange(lo, hi + 1, dtype=float)
        c[lo - 1:hi] = k ** -1.2
        j += 1
    return TruthSequence(c, "sim_truth", 1.2)


def make_polynomial_truth(beta: float, M: float = 1.0, support: int = 4096,
                          excess: float = 0.01) -> TruthSequence:
    """theta_i proportional to i^(-1/2 - beta - excess), scaled into S^beta(M)."""
    i = _indices(int(support))
    t = TruthSequence(i ** (-0.5 - beta - excess), f"poly(beta={beta})", beta)
    return scale_to_ball(t, beta, M)


def make_block_truth(beta: float, starts=(5, 50, 500), M: float = 1.0) -> TruthSequence:
    """theta_i^2 proportional to i^(-1-2 beta) on blocks [s, 2s), scaled into S^beta(M)."""
    top = 2 * max(starts)
    sq = np.zeros(top)
    for s in starts:
        i = np.arange(s, 2 * s, dtype=float)
        sq[s - 1:2 * s - 1] = i ** (-1.0 - 2.0 * beta)
    t = TruthSequence(np.sqrt(sq), f"blocks(beta={beta})", beta)
    return scale_to_ball(t, beta, M)


def basis_matrix(t_grid, N: int) -> np.ndarray:
    """phi_i(t) = sqrt(2) cos((i - 1/2) pi t), shape (len(t), N)."""
    t = np.asarray(t_grid, dtype=float)
    freq = (_indices(int(N)) - 0.5) * math.pi
    return SQRT2 * np.cos(np.outer(t, freq))


def coefficients_to_function(coefs, t_grid) -> np.ndarray:
    """Evaluate sum_i c_i phi_i(t); ``coefs`` may be 1-d or a stack of rows."""
    c = np.asarray(coefs, dtype=float)
    B = basis_matrix(t_grid, c.shape[-1])
    return c @ B.T


def truth_function_values(theta: TruthSequence, t_grid) -> np.ndarray:
    t = np.asarray(t_grid, dtype=float)
    if np.any((t < 0) | (t > 1)):
        raise DomainError("grid points must lie in [0, 1]")
    if theta.support == 0:
        return np.zeros(t.shape)
    return coefficients_to_function(theta.coefficients, t)


def write_truth(theta: TruthSequence, fh) -> None:
    """Text format: header ``# label beta_nominal`` then ``index value`` per nonzero."""
    beta = "nan" if theta.beta_nominal is None else repr(float(theta.beta_nominal))
    fh.write(f"# {theta.label.replace(' ', '_')} {beta}\n")
    for idx in np.flatnonzero(theta.coefficients):
        fh.write(f"{idx + 1} {float(theta.coefficients[idx])!r}\n")


def read_truth(fh) -> TruthSequence:
    header = fh.readline()
    if not header.startswith("#"):
        raise InvalidInputError("truth file must start with '# label beta_nominal'")
    parts = header[1:].split()
    label = parts[0] if parts else "truth"
    beta = float(parts[1]) if len(parts) > 1 else float("nan")
    idx, val = [], []
    for line in fh:
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        a, b = line.split()
        idx.append(int(a))
        val.append(float(b))
    c = np.zeros(max(idx) if idx else 0)
    for a, b in zip(idx, val):
        if a < 1:
            raise InvalidInputError("indices start at 1")
        c[a - 1] = b
    return TruthSequence(c, label, None if math.isnan(beta) else beta)
