"""Adaptive Bayesian credible balls in the Gaussian sequence model.

Three constructions are provided: marginal-likelihood empirical Bayes,
hierarchical Bayes and risk-based empirical Bayes, together with the
Monte-Carlo machinery to measure their frequentist coverage.
"""

from .conjugate import (FixedAlphaPosterior, log_marginal_likelihood, posterior_mean_bias,
                        posterior_params, sample_posterior)
from .credible_sets import (CredibleBall, contains, eb_credible_ball, fixed_alpha_ball,
                            hier_credible_ball, risk_credible_ball)
from .estimators import (AlphaSelection, EstimatorConfig, adaptivity_K_constant,
                         bias_estimator, compute_C0, honesty_L_threshold, mle_alpha, risk_alpha)
from .hierarchical import HierChain, HyperPrior, McmcConfig, hier_posterior_mean, hier_radius, run_mcmc
from .radius import RadiusQuery, RadiusSettings, credible_radius, radius_bounds
from .rng import Stream, derive
from .sequence_model import (Observation, SobolevBallSpec, TruthSequence, make_counterexample,
                             make_sim_truth, sample_observation, sobolev_norm_sq,
                             truth_function_values)

__version__ = "0.1.0"
