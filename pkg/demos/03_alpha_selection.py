"""Marginal likelihood versus risk-based choice of the prior regularity.

On the irregular simulation truth the marginal likelihood tends to pick a large
alpha (oversmoothing); the risk-based estimator stops at the first alpha where
the estimated squared bias reaches C1^2 n^(-2a/(1+2a)).
"""

from honest_credible import sequence_model as sm
from honest_credible.estimators import EstimatorConfig, compute_C0, mle_alpha, risk_alpha
from honest_credible.experiments import truncation
from honest_credible.rng import derive

truth = sm.make_sim_truth()
default = EstimatorConfig()
operating = EstimatorConfig(C0_override=0.0)
print(f"C0 for D=1, C1=1/3, gamma=0.05: {compute_C0(default):.2f} "
      f"(so the default cap is D for any practical n)")

for n in (1e2, 1e4, 1e6, 5e6):
    X = sm.sample_observation(truth, n, truncation(n, 1.0), derive(0, "observation", n, 0))
    print(f"n={n:8.0e}  mle {mle_alpha(X, default).alpha:.3f}   "
          f"risk(C0=0) {risk_alpha(X, operating).alpha:.3f}   "
          f"risk(default) {risk_alpha(X, default).alpha:.3f}")
