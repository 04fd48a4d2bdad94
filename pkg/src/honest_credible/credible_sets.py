"""Credible balls of the three adaptive methods and containment checks."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .conjugate import posterior_params
from .errors import DomainError
from .estimators import EstimatorConfig, mle_alpha, risk_alpha
from .hierarchical import HierChain, hier_posterior_mean, hier_radius
from .radius import RadiusSettings, credible_radius
from .sequence_model import Observation, TruthSequence

METHODS = ("eb_mle", "hierarchical", "eb_risk", "fixed_alpha")


@dataclass(frozen=True, eq=False)
class CredibleBall:
    center: np.ndarray
    radius: float
    L: float
    method: str
    gamma: float
    alpha_used: float | None = None
    n: float | None = None

    def __post_init__(self):
        if self.radius < 0 or not self.L > 0:
            raise DomainError("need radius >= 0 and L > 0")

    @property
    def effective_radius(self) -> float:
        return self.L * self.radius

    def inflate(self, L: float) -> "CredibleBall":
        return CredibleBall(self.center, self.radius, L, self.method, self.gamma,
                            self.alpha_used, self.n)


def fixed_alpha_ball(X: Observation, alpha: float, gamma: float, L: float = 1.0,
                     radius_q: RadiusSettings | None = None, method: str = "fixed_alpha"):
    radius_q = radius_q or RadiusSettings()
    post = posterior_params(X, alpha)
    r = credible_radius(radius_q.query(alpha, X.n, gamma, X.N))
    return CredibleBall(post.means, r, L, method, gamma, float(alpha), X.n)


def eb_credible_ball(X: Observation, cfg: EstimatorConfig, gamma: float, L: float = 1.0,
                     radius_q: RadiusSettings | None = None) -> CredibleBall:
    """Ball around the posterior mean at the marginal-likelihood alpha."""
    sel = mle_alpha(X, cfg)
    return fixed_alpha_ball(X, sel.alpha, gamma, L, radius_q, "eb_mle")


def risk_credible_ball(X: Observation, cfg: EstimatorConfig, gamma: float, L: float = 1.0,
                       radius_q: RadiusSettings | None = None) -> CredibleBall:
    """Ball around the posterior mean at the risk-based alpha."""
    sel = risk_alpha(X, cfg)
    return fixed_alpha_ball(X, sel.alpha, gamma, L, radius_q, "eb_risk")


def hier_credible_ball(chain: HierChain, gamma: float, L: float = 1.0,
                       n: float | None = None) -> CredibleBall:
    return CredibleBall(hier_posterior_mean(chain), hier_radius(chain, gamma), L,
                        "hierarchical", gamma, float(np.mean(chain.alpha_draws)), n)


def ball_distance(center: np.ndarray, theta: TruthSequence) -> float:
    """l2 distance including the truth's coefficients beyond the center's length."""
    center = np.asarray(center, dtype=float)
    d2 = np.sum((center - theta.head(center.size)) ** 2) + theta.tail_sq(center.size)
    return math.sqrt(float(d2))


def contains(ball: CredibleBall, theta: TruthSequence):
    """Returns ``(hit, distance)`` with hit iff distance <= L * radius."""
    d = ball_distance(ball.center, theta)
    return bool(d <= ball.effective_radius), d


def write_ball_summary(balls, fh) -> None:
    fh.write("method,n,gamma,L,alpha_used,radius,effective_radius\n")
    for b in balls:
        a = "" if b.alpha_used is None else repr(float(b.alpha_used))
        n = "" if b.n is None else repr(float(b.n))
        fh.write(f"{b.method},{n},{float(b.gamma)!r},{float(b.L)!r},{a},"
                 f"{float(b.radius)!r},{float(b.effective_radius)!r}\n")
