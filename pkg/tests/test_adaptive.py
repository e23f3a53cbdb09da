import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from skirental.adaptive import (
    AdaptiveState,
    ContextModel,
    adaptive_round,
    constant_rate,
    contextual_prior,
    ema_update,
    learning_rate,
    run_adaptive,
)
from skirental.errors import DimensionMismatch, InvalidParams, OutOfRange
from skirental.priors import PointMass, TruncatedGaussian, Uniform, build_prior


class TestEMA:
    def test_hand_arithmetic(self):
        out = ema_update(build_prior(Uniform(500), 500), 100, 0.5)
        assert out.mass[99] == pytest.approx(0.501)
        assert out.mass[0] == pytest.approx(0.001)

    def test_full_replacement(self):
        out = ema_update(build_prior(Uniform(20), 20), 7, 1.0)
        np.testing.assert_array_equal(out.mass, build_prior(PointMass(7), 20).mass)

    def test_zero_rate_keeps_prior(self):
        p = build_prior(Uniform(20), 20)
        assert ema_update(p, 7, 0.0) is p


class TestLearningRate:
    def test_first_round(self):
        assert learning_rate(1, 500) == 1.0

    def test_round_100(self):
        assert learning_rate(100, 500) == pytest.approx(math.sqrt(math.log(500) / 100))
        assert learning_rate(100, 500) == pytest.approx(0.2493, abs=1e-4)

    def test_decays(self):
        assert learning_rate(10 ** 8, 500) < 1e-3

    @pytest.mark.parametrize("r, m", [(0, 500), (1, 1)])
    def test_invalid(self, r, m):
        with pytest.raises(InvalidParams):
            learning_rate(r, m)

    def test_constant(self):
        assert constant_rate(0.3)(7, 500) == 0.3
        with pytest.raises(InvalidParams):
            constant_rate(1.5)


class TestRounds:
    def test_single_round(self):
        state = AdaptiveState.start(500)
        outcome, nxt = adaptive_round(state, 40, 100)
        rec = nxt.last
        assert outcome.purchase_day == 1  # E_rent(1) = 250.5 under the uniform start
        assert rec.cost == 100 and rec.opt == 40 and rec.regret == 60
        assert rec.regret >= 0 and nxt.cumulative_regret == 60
        assert nxt.round == 2
        # alpha_1 = 1 replaces the prior by a point mass at the observation
        assert nxt.prior.mass[39] == 1.0

    def test_horizon_out_of_range(self):
        with pytest.raises(OutOfRange):
            adaptive_round(AdaptiveState.start(50), 51, 100)

    def test_point_mass_below_cost_stops_buying(self):
        traj = run_adaptive(50, PointMass(30), 100, seed=1, horizon_bound=200)
        assert traj.records[0].regret > 0
        assert all(r.regret == 0 for r in traj.records[1:])
        assert all(r.purchase_day == 201 for r in traj.records[1:])

    @given(st.integers(0, 10 ** 6))
    def test_regret_nonnegative(self, seed):
        traj = run_adaptive(5, TruncatedGaussian(100, 30), 100, seed=seed)
        assert np.all(traj.regret >= 0)
        np.testing.assert_allclose(traj.cum_regret, np.cumsum(traj.regret))

    def test_seeded(self):
        a = run_adaptive(100, TruncatedGaussian(100, 30), 100, seed=3)
        b = run_adaptive(100, TruncatedGaussian(100, 30), 100, seed=3)
        assert a.records == b.records

    def test_normalized_statistic(self):
        traj = run_adaptive(100, TruncatedGaussian(100, 30), 100, seed=3)
        r = np.arange(1, 101)
        np.testing.assert_allclose(traj.normalized(), traj.cum_regret / np.sqrt(r * math.log(500)))
        assert traj.fitted_constant == traj.normalized().max()

    def test_csv(self, tmp_path):
        traj = run_adaptive(10, TruncatedGaussian(100, 30), 100, seed=3)
        traj.write_csv(tmp_path / "regret.csv")
        lines = (tmp_path / "regret.csv").read_text().splitlines()
        assert lines[0] == "round,alpha,cost,opt,regret,cum_regret"
        assert len(lines) == 11

    def test_no_rounds(self):
        with pytest.raises(InvalidParams):
            run_adaptive(0, Uniform(), 100, seed=1)


class TestContextual:
    def test_zero_parameters_uniform(self):
        p = contextual_prior(ContextModel(np.zeros((50, 3))), [1.0, -2.0, 0.5])
        np.testing.assert_allclose(p.mass, 1 / 50)

    @given(st.floats(-50, 50))
    def test_shift_invariance(self, c):
        rng = np.random.default_rng(0)
        theta = rng.normal(size=(40, 2))
        x = [0.3, -1.2]
        a = contextual_prior(ContextModel(theta), x)
        b = contextual_prior(ContextModel(theta + c), x)
        np.testing.assert_allclose(a.mass, b.mass, rtol=1e-9, atol=1e-15)

    def test_tilt_monotone(self):
        model = ContextModel(np.arange(1, 101, dtype=float) / 100)
        modes = [int(np.argmax(contextual_prior(model, x).mass)) for x in (-5.0, 0.0, 5.0)]
        means = [contextual_prior(model, x).mean() for x in (-5.0, 0.0, 5.0)]
        assert modes == sorted(modes)
        assert means[0] < means[1] < means[2]

    def test_feature_map(self):
        model = ContextModel(np.ones((10, 2)), feature_map=lambda x: [x, x ** 2])
        np.testing.assert_allclose(contextual_prior(model, 3.0).mass, 0.1)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            contextual_prior(ContextModel(np.zeros((10, 3))), [1.0, 2.0])
