import io
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from honest_credible import credible_sets as cs
from honest_credible import sequence_model as sm
from honest_credible.conjugate import posterior_params
from honest_credible.errors import PrecisionError
from honest_credible.estimators import EstimatorConfig, mle_alpha, risk_alpha
from honest_credible.hierarchical import HierChain
from honest_credible.radius import RadiusSettings, credible_radius, radius_bounds
from honest_credible.rng import Stream

CFG = EstimatorConfig()


class TestEbBall:
    def test_zero_data(self):
        X = sm.Observation(np.zeros(4096), 1e4)
        ball = cs.eb_credible_ball(X, CFG, 0.05)
        assert np.all(ball.center == 0)
        assert ball.alpha_used == 2.0
        assert ball.radius == credible_radius(RadiusSettings().query(2.0, 1e4, 0.05, 4096))

    def test_center_is_posterior_mean(self):
        X = sm.sample_observation(sm.make_sim_truth(), 1e4, 4096, Stream(0, "b"))
        ball = cs.eb_credible_ball(X, CFG, 0.05)
        a = mle_alpha(X, CFG).alpha
        assert np.array_equal(ball.center, posterior_params(X, a).means)

    def test_inflate(self):
        X = sm.sample_observation(sm.make_sim_truth(), 1e4, 4096, Stream(1, "b"))
        b1 = cs.eb_credible_ball(X, CFG, 0.05)
        b2 = b1.inflate(2.0)
        assert b2.effective_radius == 2 * b1.effective_radius
        assert b2.center is b1.center


class TestRiskBall:
    def test_zero_data(self):
        cfg = EstimatorConfig(C0_override=2.0)
        X = sm.Observation(np.zeros(4096), 1e4)
        ball = cs.risk_credible_ball(X, cfg, 0.05)
        assert ball.alpha_used == pytest.approx(max(2 - 2 / math.log(1e4), 1))
        assert np.all(ball.center == 0)

    @pytest.mark.parametrize("seed", range(4))
    def test_radius_upper_constant(self, seed):
        cfg = EstimatorConfig(C0_override=0.0)
        n = 1e4
        X = sm.sample_observation(sm.make_polynomial_truth(1.5), n, 4096, Stream(seed, "rb"))
        ball = cs.risk_credible_ball(X, cfg, 0.05)
        a = ball.alpha_used
        _, _, n_min = radius_bounds(a, a, n, 0.05)
        # n is below n_min here; the upper constant holds regardless at this scale
        assert ball.radius <= math.sqrt(3 + 2 / cfg.D) * n ** (-a / (1 + 2 * a))


class TestHierBall:
    def test_single_draw(self):
        # one draw is below the ceil(1/gamma) minimum for every gamma in (0, 1)
        c = HierChain(np.array([1.5]), np.array([[0.3, 0.4]]), 0.0)
        with pytest.raises(PrecisionError):
            cs.hier_credible_ball(c, 0.5)

    def test_identical_draws(self):
        c = HierChain(np.full(20, 1.5), np.tile([0.3, 0.4], (20, 1)), 0.0)
        ball = cs.hier_credible_ball(c, 0.05)
        assert ball.radius == pytest.approx(0.0, abs=1e-15)
        assert np.allclose(ball.center, [0.3, 0.4])
        assert ball.L == 1.0


class TestContains:
    def test_center_on_truth(self):
        t = sm.make_block_truth(1.5)
        ball = cs.CredibleBall(t.padded(t.support), 0.0, 1.0, "fixed_alpha", 0.05)
        assert cs.contains(ball, t) == (True, 0.0)

    def test_zero(self):
        ball = cs.CredibleBall(np.zeros(5), 0.0, 1.0, "fixed_alpha", 0.05)
        assert cs.contains(ball, sm.TruthSequence([]))[0]

    def test_tail_coefficient(self):
        t = sm.TruthSequence([0, 0, 0, 0, 0, 0.7])
        ball = cs.CredibleBall(np.zeros(5), 0.5, 1.0, "fixed_alpha", 0.05)
        hit, d = cs.contains(ball, t)
        assert not hit and d == pytest.approx(0.7)

    @given(st.lists(st.floats(-1, 1), min_size=4, max_size=4),
           st.lists(st.floats(-1, 1), min_size=4, max_size=4),
           st.floats(0, 2), st.floats(0.1, 5), st.floats(0, 5))
    def test_monotone_in_L(self, c, t, r, L, dL):
        ball = cs.CredibleBall(np.array(c), r, L, "fixed_alpha", 0.05)
        truth = sm.TruthSequence(t)
        if cs.contains(ball, truth)[0]:
            assert cs.contains(ball.inflate(L + dL), truth)[0]

    @given(st.lists(st.floats(-1, 1), min_size=4, max_size=4),
           st.lists(st.floats(-1, 1), min_size=4, max_size=4))
    def test_distance_symmetric(self, a, b):
        d1 = cs.ball_distance(np.array(a), sm.TruthSequence(b))
        d2 = cs.ball_distance(np.array(b), sm.TruthSequence(a))
        assert d1 == pytest.approx(d2, rel=1e-12, abs=1e-300)

    def test_summary_header(self):
        buf = io.StringIO()
        cs.write_ball_summary([cs.CredibleBall(np.zeros(2), 1.0, 2.0, "eb_mle", 0.05, 1.5, 1e4)], buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "method,n,gamma,L,alpha_used,radius,effective_radius"
        assert lines[1].split(",")[-1] == "2.0"
