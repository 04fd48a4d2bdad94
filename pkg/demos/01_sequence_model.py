"""Truths, Sobolev norms and simulated observations.

The Gaussian sequence model observes X_i = theta_i + Z_i / sqrt(n).  A truth
is a finite coefficient sequence; its S^beta norm is sum theta_i^2 i^(2 beta).
"""

import numpy as np

from honest_credible import sequence_model as sm
from honest_credible.rng import derive

sim = sm.make_sim_truth()
print(f"simulation truth: support {sim.support}, theta_10 = {sim.coefficients[9]:.6f}")
for beta in (0.5, 1.0, 1.1):
    print(f"  S^{beta} norm^2 = {sm.sobolev_norm_sq(sim, beta):.4g}")

# The counterexample puts mass on blocks [n_j^(1/(1+2b)), 2 n_j^(1/(1+2b))) along a
# rapidly growing schedule; K is lowered if needed to keep it inside S^1(1).
ce = sm.make_counterexample(beta=1.2, K=1.0, D=1.0, J=3, N=10 ** 7, target=(1.0, 1.0))
print(f"counterexample schedule {ce.schedule}, blocks {ce.blocks}, K = {ce.K:g}")

# One observation at n = 1e4.  Streams are keyed by (seed, purpose, n, replicate),
# so the same call always gives the same data.
X = sm.sample_observation(sim, 1e4, 4096, derive(0, "observation", 1e4, 0))
print(f"observation: N = {X.N}, |X - theta| over the first 20 = "
      f"{np.linalg.norm(X.values[:20] - sim.head(20)):.4f} (noise scale {20 ** 0.5 / 100:.4f})")

t = np.linspace(0.3, 0.35, 6)
print("truth as a function on [0.3, 0.35]:", np.round(sm.truth_function_values(sim, t), 4))
