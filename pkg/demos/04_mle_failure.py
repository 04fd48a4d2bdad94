"""Coverage of the marginal-likelihood ball on the counterexample.

The failure needs the growth schedule to reach its third point n_3 = 2 * 64^5;
at n_2 = 64 the bias has not yet separated from the posterior spread.
"""

from honest_credible import sequence_model as sm
from honest_credible.experiments import ExperimentConfig, coverage_experiment

ce = sm.make_counterexample(beta=1.2, K=1.0, D=1.0, J=3, N=10 ** 7, target=(1.0, 1.0))
for n in ce.schedule[1:]:
    for method in ("eb_mle", "eb_risk"):
        cfg = ExperimentConfig(truth_spec={"builder": "counterexample"}, method=method,
                               n_list=(n,), replicates=100, L=1.0, master_seed=1,
                               C0_override=0.0 if method == "eb_risk" else None)
        rep = coverage_experiment(cfg, truth=ce.truth)
        a = rep.aggregates[float(n)]
        mean_alpha = sum(r.alpha_used for r in rep.rows) / len(rep.rows)
        print(f"n={n:>12g} {method:8s} coverage {a.coverage:.2f} +/- {a.se:.2f}, "
              f"mean alpha {mean_alpha:.3f}")
