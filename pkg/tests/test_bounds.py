import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from honest_credible import bounds as bd
from honest_credible import sequence_model as sm
from honest_credible import sweeps
from honest_credible.errors import DomainError
from honest_credible.estimators import EstimatorConfig, bias_estimator_grid
from honest_credible.rng import Stream

SUITE = ([sm.make_polynomial_truth(b) for b in (1.0, 1.5, 2.0)]
         + [sm.make_block_truth(b) for b in (1.0, 1.5, 2.0)])


class TestBracket:
    @pytest.mark.parametrize("C0", [None, 0.0, 3.0])
    def test_zero_truth_clamps(self, C0):
        cfg = EstimatorConfig(C0_override=C0)
        br = bd.alpha_bracket(sm.TruthSequence([]), 1e4, cfg)
        assert br.alpha_lower == br.alpha_upper == pytest.approx(cfg.cap(1e4))

    @pytest.mark.parametrize("truth", SUITE, ids=lambda t: t.label)
    @pytest.mark.parametrize("n", [1e3, 1e4, 1e6])
    def test_ordered(self, truth, n):
        br = bd.alpha_bracket(truth, n, EstimatorConfig(C0_override=0.0))
        assert br.alpha_lower <= br.alpha_upper

    @pytest.mark.parametrize("C0", [None, 0.0])
    @pytest.mark.parametrize("truth", SUITE, ids=lambda t: t.label)
    @pytest.mark.parametrize("n", [1e4, 1e6])
    def test_alpha_lower_bound(self, C0, truth, n):
        cfg = EstimatorConfig(C0_override=C0)
        br = bd.alpha_bracket(truth, n, cfg)
        assert br.alpha_lower > bd.alpha_lower_bound(truth.beta_nominal, 1.0, n, cfg)

    def test_contains(self):
        br = bd.BracketResult(1.0, 1.0)
        assert br.contains(1.0) and not br.contains(1.0, strict=True)


class TestHn:
    def test_zero_and_e1(self):
        assert bd.h_n_diagnostic(sm.TruthSequence([]), 1.5, 100.0) == 0.0
        assert bd.h_n_diagnostic(sm.TruthSequence([1.0]), 1.5, 100.0) == 0.0

    def test_counterexample_small_K(self):
        K = 1.0
        while True:
            ce = sm.make_counterexample(1.2, K, 1.0, J=3, N=10 ** 7)
            worst = max(bd.h_n_diagnostic(ce.truth, a, nj)
                        for nj in ce.schedule[1:] for a in np.linspace(1, 2, 101)[:-1])
            if worst < 1 / 16:
                break
            K /= 2
            assert K > 1e-6
        assert K > 0

    def test_domain(self):
        with pytest.raises(DomainError):
            bd.h_n_diagnostic(sm.TruthSequence([1.0]), 1.0, 2.0)


class TestBiasEstimatorVariance:
    def test_single_term(self):
        assert bd.bias_estimator_variance(sm.TruthSequence([]), 1.7, 1.0, 1) == pytest.approx(1 / 8)

    @given(st.lists(st.floats(-1, 1), max_size=30), st.floats(1, 2), st.floats(1, 1e6),
           st.integers(1, 30))
    def test_nonnegative(self, c, a, n, k):
        assert bd.bias_estimator_variance(sm.TruthSequence(c), a, n, k) >= 0

    def test_monte_carlo(self):
        t = sm.make_polynomial_truth(1.5)
        n, a, R = 1e4, 1.3, 100_000
        k = EstimatorConfig().k_n(n)
        z = Stream(11, "var").generator().standard_normal((R, k))
        X = t.head(k) + z / math.sqrt(n)
        i = np.arange(1, k + 1, dtype=float)
        w = (i ** (1 + 2 * a) / (i ** (1 + 2 * a) + n)) ** 2
        vals = (X ** 2 - 1 / n) @ w
        # same computation through the estimator for one row
        obs = sm.Observation(X[0], n)
        assert bias_estimator_grid(obs, [a], k)[0] == pytest.approx(vals[0], rel=1e-12)
        gauss = bd.bias_estimator_variance(t, a, n, k)
        printed = bd.bias_estimator_variance(t, a, n, k, identity="as_printed")
        assert vals.var(ddof=1) == pytest.approx(gauss, rel=0.05)
        assert abs(vals.var(ddof=1) / printed - 1) > 0.05


class TestTailSum:
    def test_k1_m0(self):
        res = bd.tail_sum_bound(10, 1.0, 0.0)
        oracle = math.pi ** 2 / 6 - sum(1 / i ** 2 for i in range(1, 11))
        assert oracle == pytest.approx(0.09516, abs=1e-5)
        assert abs(res.exact - oracle) <= res.halfwidth + 1e-12
        assert res.bound == pytest.approx(0.21)
        assert res.holds

    def test_formula(self):
        assert bd.tail_sum_bound(100, 2.0, 0.0).bound == pytest.approx(1.01e-4)

    def test_domain(self):
        with pytest.raises(DomainError):
            bd.tail_sum_bound(2, 1.0, 3.0)
        with pytest.raises(DomainError):
            bd.tail_sum_bound(10, 0.0, 0.0)

    def test_sweep(self):
        res = sweeps.tail_sum_sweep()
        assert res.passed, res.violations


class TestShift:
    def test_small_K(self):
        assert bd.f_n_shift_bounds(1.5, 1e4, 1e-9, 1.0)

    def test_moderate_K(self):
        assert bd.f_n_shift_bounds(1.5, 1e4, 1.0, 1.0)

    def test_sweep_on_provable_domain(self):
        res = sweeps.f_n_shift_sweep()
        assert res.passed, res.violations[:5]

    def test_literal_domain_counterexample(self):
        # n = 10 >= e^(K/4) but the shift K/log n = 0.87 exceeds 1/4:
        # f_n(alpha - K/log n) exceeds the stated upper multiple.
        assert 10 >= math.exp(2 / 4)
        margins = bd.f_n_shift_margins(1.0, 10.0, 2.0, 1.0)
        assert margins[1] < 0
        assert not bd.f_n_shift_bounds(1.0, 10.0, 2.0, 1.0)

    @given(st.floats(1, 2), st.floats(1e-3, 3), st.floats(0, 30))
    def test_property_on_provable_domain(self, a, K, extra):
        n = math.exp(4 * K + extra)
        if a + K / math.log(n) > 2:
            return
        assert bd.f_n_shift_bounds(a, n, K, 1.0)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            bd.f_n_shift_bounds(1.5, 1.1, 4.0, 1.0)
        with pytest.raises(DomainError):
            bd.f_n_shift_bounds(2.5, 1e4, 1.0, 1.0)
