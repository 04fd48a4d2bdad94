"""Hierarchical Bayes over alpha by Metropolis-within-Gibbs.

The sampler alternates an exact Gaussian draw of theta^N given (alpha, X) and
an independence Metropolis-Hastings move for alpha given theta^N with a
uniform proposal on [D, 2D].  Given theta, X carries no information about
alpha, so the acceptance ratio involves only the hyperprior and the prior
density of theta^N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .conjugate import posterior_params
from .errors import DomainError, PrecisionError, TruncationError
from .rng import Stream, as_generator
from .sequence_model import Observation


@dataclass(frozen=True, eq=False)
class HyperPrior:
    kind: str = "uniform"
    alpha0: float | None = None
    grid: np.ndarray | None = None
    density: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in ("uniform", "point_mass", "custom_density"):
            raise DomainError(f"unknown hyperprior kind {self.kind!r}")
        if self.kind == "point_mass" and self.alpha0 is None:
            raise DomainError("point_mass needs alpha0")
        if self.kind == "custom_density":
            g = np.asarray(self.grid, float)
            d = np.asarray(self.density, float)
            if g.shape != d.shape or g.size < 2 or np.any(np.diff(g) <= 0):
                raise DomainError("density must be tabulated on an increasing grid")
            if np.any(d < 0):
                raise DomainError("density must be nonnegative")
            if abs(np.trapezoid(d, g) - 1.0) > 1e-6:
                raise DomainError("tabulated density must integrate to one")
            object.__setattr__(self, "grid", g)
            object.__setattr__(self, "density", d)

    @classmethod
    def uniform(cls):
        return cls("uniform")

    @classmethod
    def point_mass(cls, alpha0: float):
        return cls("point_mass", alpha0=float(alpha0))

    @classmethod
    def tabulated(cls, grid, density):
        return cls("custom_density", grid=grid, density=density)

    def check_support(self, D: float):
        lo, hi = D - 1e-12, 2 * D + 1e-12
        if self.kind == "point_mass" and not lo <= self.alpha0 <= hi:
            raise DomainError("point mass must lie in [D, 2D]")
        if self.kind == "custom_density" and (self.grid[0] < lo or self.grid[-1] > hi):
            raise DomainError("tabulated density must live on [D, 2D]")

    def log_density(self, alpha: float, D: float) -> float:
        if self.kind == "uniform":
            return -math.log(D) if D <= alpha <= 2 * D else -math.inf
        if self.kind == "custom_density":
            if not self.grid[0] <= alpha <= self.grid[-1]:
                return -math.inf
            v = float(np.interp(alpha, self.grid, self.density))
            return math.log(v) if v > 0 else -math.inf
        return 0.0 if alpha == self.alpha0 else -math.inf


@dataclass(frozen=True)
class McmcConfig:
    D: float = 1.0
    burn_in: int = 3200
    draws: int = 800
    N_theta: int | None = None
    rng_stream: object = field(default_factory=lambda: Stream(0, "mcmc"))

    def __post_init__(self):
        if self.burn_in < 0 or self.draws < 1:
            raise DomainError("need burn_in >= 0 and draws >= 1")

    def n_theta(self, n: float) -> int:
        if self.N_theta is not None:
            return int(self.N_theta)
        return int(math.ceil(round(n ** (2.0 / (1.0 + 4.0 * self.D)), 9)))


@dataclass(frozen=True, eq=False)
class HierChain:
    alpha_draws: np.ndarray
    theta_draws: np.ndarray
    acceptance_rate: float

    @property
    def draws(self) -> int:
        return int(self.alpha_draws.size)


def run_mcmc(X: Observation, hp: HyperPrior, cfg: McmcConfig) -> HierChain:
    D = cfg.D
    hp.check_support(D)
    N = cfg.n_theta(X.n)
    if N > X.N:
        raise TruncationError(f"N_theta={N} exceeds the observation length {X.N}")
    Xn = Observation(X.values[:N], X.n, X.seed_info)
    logi = np.log(np.arange(1, N + 1, dtype=float))
    sum_logi = float(logi.sum())
    total = cfg.burn_in + cfg.draws

    gen = as_generator(cfg.rng_stream)
    z = gen.standard_normal((total, N))
    prop = D + D * gen.random(total)
    logu = np.log(gen.random(total))

    if hp.kind == "point_mass":
        alpha = hp.alpha0
    elif hp.kind == "custom_density":
        alpha = float(hp.grid[np.argmax(hp.density)])
    else:
        alpha = float(D + D * gen.random())
    fixed = hp.kind == "point_mass"

    def conditional(a):
        post = posterior_params(Xn, a)
        return post.means, np.sqrt(post.variances), np.exp((1.0 + 2.0 * a) * logi)

    mean, sd, prec = conditional(alpha)
    log_lam = hp.log_density(alpha, D)
    alphas = np.empty(cfg.draws)
    thetas = np.empty((cfg.draws, N))
    accepted = 0
    for t in range(total):
        theta = mean + sd * z[t]
        if not fixed:
            a_new = float(prop[t])
            lam_new = hp.log_density(a_new, D)
            prec_new = np.exp((1.0 + 2.0 * a_new) * logi)
            th2 = theta * theta
            log_r = (lam_new - log_lam + (a_new - alpha) * sum_logi
                     + 0.5 * float(np.dot(prec - prec_new, th2)))
            if logu[t] < log_r:
                alpha, log_lam = a_new, lam_new
                mean, sd, prec = conditional(alpha)
                accepted += 1
        if t >= cfg.burn_in:
            alphas[t - cfg.burn_in] = alpha
            thetas[t - cfg.burn_in] = theta
    rate = math.nan if fixed else accepted / total
    return HierChain(alphas, thetas, rate)


def hier_posterior_mean(chain: HierChain) -> np.ndarray:
    if chain.draws < 1:
        raise PrecisionError("empty chain")
    return chain.theta_draws.mean(axis=0)


def draw_distances(chain: HierChain) -> np.ndarray:
    return np.sqrt(np.sum((chain.theta_draws - hier_posterior_mean(chain)) ** 2, axis=1))


def hier_radius(chain: HierChain, gamma: float) -> float:
    """ceil((1-gamma) draws)-th smallest distance of a draw to the chain mean."""
    if not 0 < gamma < 1:
        raise DomainError("gamma must lie in (0, 1)")
    if chain.draws < math.ceil(round(1.0 / gamma, 9)):
        raise PrecisionError(f"{chain.draws} draws are too few for gamma={gamma}")
    d = np.sort(draw_distances(chain))
    k = math.ceil(round((1.0 - gamma) * chain.draws, 9))
    return float(d[k - 1])


def closest_draws(chain: HierChain, gamma: float) -> np.ndarray:
    """The ceil((1-gamma) draws) draws nearest to the chain mean."""
    d = draw_distances(chain)
    k = math.ceil(round((1.0 - gamma) * chain.draws, 9))
    return chain.theta_draws[np.argsort(d, kind="stable")[:k]]


def write_chain_csv(chain: HierChain, fh) -> None:
    fh.write("iter,alpha\n")
    for t, a in enumerate(chain.alpha_draws):
        fh.write(f"{t},{float(a)!r}\n")


def write_theta_dump(chain: HierChain, fh) -> None:
    """Binary dump: one ASCII header line, then little-endian float64 row-major."""
    rows, cols = chain.theta_draws.shape
    fh.write(f"# rows={rows} cols={cols} dtype=<f8 order=C\n".encode())
    fh.write(np.ascontiguousarray(chain.theta_draws, dtype="<f8").tobytes())


def read_theta_dump(fh) -> np.ndarray:
    header = fh.readline().decode().split()
    fields = dict(h.split("=", 1) for h in header[1:])
    rows, cols = int(fields["rows"]), int(fields["cols"])
    data = np.frombuffer(fh.read(rows * cols * 8), dtype="<f8")
    return data.reshape(rows, cols).copy()
