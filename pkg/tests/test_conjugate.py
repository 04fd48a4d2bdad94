import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from honest_credible import conjugate as cj
from honest_credible import sequence_model as sm
from honest_credible.errors import DomainError
from honest_credible.rng import Stream


def obs(values, n):
    return sm.Observation(np.asarray(values, float), n)


class TestPosteriorParams:
    def test_first_coordinate(self):
        p = cj.posterior_params(obs([2.0], 1.0), 1.0)
        assert p.means[0] == 1.0 and p.variances[0] == 0.5

    def test_second_coordinate(self):
        p = cj.posterior_params(obs([0.0, 5.0], 1.0), 0.5)
        assert p.means[1] == pytest.approx(1.0) and p.variances[1] == pytest.approx(0.2)

    def test_zero_data(self):
        assert np.all(cj.posterior_params(obs(np.zeros(10), 50.0), 1.3).means == 0)

    def test_alpha_positive(self):
        with pytest.raises(DomainError):
            cj.posterior_params(obs([1.0], 1.0), 0.0)

    @given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=40),
           st.floats(0.01, 4), st.floats(1e-2, 1e8))
    def test_shrinkage(self, x, alpha, n):
        X = obs(x, n)
        m = cj.posterior_params(X, alpha).means
        assert np.all(np.abs(m) <= np.abs(X.values))
        nz = np.abs(X.values) > 1e-250  # avoid subnormal rounding
        assert np.all(np.abs(m[nz]) < np.abs(X.values[nz]))


class TestBiasWeights:
    @given(st.floats(0.05, 4), st.floats(0, 1), st.floats(1, 1e7))
    def test_identity_range_and_monotone(self, alpha, da, n):
        N = 200
        i = np.arange(1, N + 1, dtype=float)
        w = cj.bias_weights(alpha, n, N)
        direct = i ** (2 + 4 * alpha) / (i ** (1 + 2 * alpha) + n) ** 2
        assert np.allclose(w, direct, rtol=1e-10)
        assert np.all((w > 0) & (w <= 1))  # rounds to 1 for large i
        assert np.all(cj.bias_weights(alpha + da, n, N) >= w * (1 - 1e-12))


class TestMarginalLikelihood:
    def test_single_term_zero(self):
        assert cj.log_marginal_likelihood(obs([0.0], 1.0), 1.0) == pytest.approx(-0.5 * math.log(2))

    def test_single_term_cancels(self):
        x = math.sqrt(2 * math.log(2))
        assert cj.log_marginal_likelihood(obs([x], 1.0), 1.0) == pytest.approx(0.0, abs=1e-15)

    def test_increasing_when_data_zero(self):
        X = obs(np.zeros(300), 1e4)
        vals = cj.log_marginal_likelihood_grid(X, np.linspace(1, 2, 101))
        assert np.all(np.diff(vals) > 0)

    def test_matches_bruteforce(self):
        X = sm.sample_observation(sm.make_sim_truth(), 1e4, 500, Stream(0, "t"))
        for a in (1.0, 1.37, 2.0):
            brute = 0.0
            for i, x in enumerate(X.values, start=1):
                p = i ** (1 + 2 * a)
                brute += -0.5 * (math.log(1 + X.n / p) - X.n ** 2 * x * x / (p + X.n))
            assert cj.log_marginal_likelihood(X, a) == pytest.approx(brute, rel=1e-12)
            assert cj.log_marginal_likelihood_grid(X, [a])[0] == pytest.approx(brute, rel=1e-12)

    def test_tail_bound_dominates_neglected_terms(self):
        n, a, N = 1e4, 1.0, 500
        i = np.arange(N + 1, 10 ** 6, dtype=float)
        neglected = 0.5 * np.sum(np.log1p(n / i ** (1 + 2 * a)))
        assert neglected <= cj.likelihood_tail_bound(n, a, N)


class TestBias:
    def test_e1(self):
        b, _ = cj.posterior_mean_bias(sm.TruthSequence([1.0]), 1.7, 1.0, 1)
        assert b == pytest.approx(0.25)

    def test_zero(self):
        assert cj.posterior_mean_bias(sm.TruthSequence([]), 1.0, 10.0, 20)[0] == 0.0

    def test_counterexample_block_lower_bound(self):
        # holds for prior regularity above the truth's beta = 1.2
        ce = sm.make_counterexample(1.2, 1.0, 1.0, J=3, N=10 ** 7)
        for nj, (lo, hi) in zip(ce.schedule, ce.blocks):
            block = float(np.sum(ce.truth.coefficients[lo - 1:hi] ** 2))
            for a in (1.25, 1.5, 2.0):
                b, _ = cj.posterior_mean_bias(ce.truth, a, nj, ce.truth.support)
                assert b >= block / 4

    def test_tail_enters_with_weight_one(self):
        t = sm.TruthSequence([0.0, 0.0, 0.0, 2.0])
        assert cj.posterior_mean_bias(t, 1.0, 1e6, 2)[0] == 4.0

    def test_expected_mean_matches_mc(self):
        t = sm.make_block_truth(1.5, starts=(3, 8))
        n, a, N, R = 100.0, 1.2, 20, 4000
        est = np.array([cj.posterior_params(sm.sample_observation(t, n, N, Stream(5, "m", n, r)), a).means
                        for r in range(R)])
        exp = cj.expected_posterior_mean(t, a, n, N)
        se = est.std(axis=0, ddof=1) / math.sqrt(R)
        assert np.all(np.abs(est.mean(axis=0) - exp) <= 3.5 * se + 1e-15)


class TestSamplePosterior:
    def test_zero_variance(self):
        p = cj.FixedAlphaPosterior(1.0, 1.0, np.array([1.0, -2.0]), np.zeros(2))
        assert np.all(cj.sample_posterior(p, 5, Stream(0, "p")) == p.means)

    def test_moments(self):
        X = obs(np.linspace(-1, 1, 8), 10.0)
        p = cj.posterior_params(X, 1.0)
        d = cj.sample_posterior(p, 10_000, Stream(1, "p"))
        assert d.shape == (10_000, 8)
        assert np.all(np.abs(d.var(axis=0, ddof=1) - p.variances) <= 3 * math.sqrt(2 / 1e4) * p.variances)

    def test_deterministic(self):
        p = cj.posterior_params(obs([1.0, 2.0], 3.0), 1.0)
        assert np.array_equal(cj.sample_posterior(p, 4, Stream(2, "p")),
                              cj.sample_posterior(p, 4, Stream(2, "p")))
