"""Hierarchical Bayes over alpha by Metropolis-within-Gibbs.

theta | alpha, X is Gaussian; alpha | theta is updated by an independence
Metropolis-Hastings step with a uniform proposal on [D, 2D].
"""

import io

import numpy as np

from honest_credible import sequence_model as sm
from honest_credible.credible_sets import contains, hier_credible_ball
from honest_credible.hierarchical import HyperPrior, McmcConfig, run_mcmc, write_chain_csv
from honest_credible.rng import derive

truth = sm.make_sim_truth()
n = 1e4
X = sm.sample_observation(truth, n, 4096, derive(0, "observation", n, 0))
cfg = McmcConfig(D=1.0, burn_in=3200, draws=800, rng_stream=derive(0, "mcmc", n, 0))
chain = run_mcmc(X, HyperPrior.uniform(), cfg)
print(f"N_theta = {cfg.n_theta(n)}, acceptance rate {chain.acceptance_rate:.3f}")
print(f"alpha posterior: mean {chain.alpha_draws.mean():.3f}, "
      f"5-95% [{np.quantile(chain.alpha_draws, 0.05):.3f}, {np.quantile(chain.alpha_draws, 0.95):.3f}]")

ball = hier_credible_ball(chain, gamma=0.05, n=n)
hit, dist = contains(ball, truth)
print(f"radius {ball.radius:.4f}, distance to truth {dist:.4f}, covered: {hit}")

buf = io.StringIO()
write_chain_csv(chain, buf)
print("chain csv head:", buf.getvalue().splitlines()[:3])
