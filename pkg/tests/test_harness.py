import json

import numpy as np
import pytest

from skirental import harness
from skirental.errors import EmptyBatch, InvalidParams
from skirental.harness import (
    ExperimentConfig,
    PolicySpec,
    draw_trials,
    nearest_rank,
    run_trials,
    summarize,
    summarize_costs,
)
from skirental.priors import PointMass, TruncatedGaussian, Uniform, build_prior

SMALL = ExperimentConfig(trials=200)


class TestDraws:
    def test_per_trial_seeds(self):
        truth = build_prior(Uniform(500), 500)
        d = draw_trials(truth, 5, 42)
        np.testing.assert_array_equal(d.seeds, [42, 43, 44, 45, 46])
        rng = np.random.default_rng(44)
        a, u = rng.random(2)
        assert d.uniform[2] == u
        assert d.normal[2] == rng.standard_normal()
        assert d.horizon[2] == int(a * 500) + 1

    def test_prefix_stable(self):
        truth = build_prior(TruncatedGaussian(100, 30), 500)
        a = draw_trials(truth, 50, 7)
        b = draw_trials(truth, 10, 7)
        np.testing.assert_array_equal(a.horizon[:10], b.horizon)

    def test_horizons_inside_support(self):
        truth = build_prior(Uniform(20), 500)
        d = draw_trials(truth, 2000, 0)
        assert d.horizon.min() >= 1 and d.horizon.max() <= 20

    def test_no_trials(self):
        with pytest.raises(InvalidParams):
            draw_trials(build_prior(Uniform(5), 5), 0, 1)


class TestRunTrials:
    def test_concentrated_bayesian(self):
        batch = run_trials(PointMass(5), "bayesian", 3, 100, 42, 500)
        np.testing.assert_array_equal(batch.ratio("bayesian"), 1.0)

    def test_deterministic_point_mass(self):
        batch = run_trials(PointMass(100), "deterministic", 100, 100, 42, 500)
        np.testing.assert_allclose(batch.ratio("deterministic"), 1.99)
        s = summarize(batch)["deterministic"]
        assert s.mean_cr == pytest.approx(1.99)
        assert s.success_rate == 0.0

    def test_uniform_ecr_near_theory(self):
        batch = run_trials(Uniform(500), "bayesian", 100, 10_000, 42, 500)
        s = summarize(batch)["bayesian"]
        assert abs(s.ecr_empirical - 1000 / 901) < 0.01
        assert abs(s.ecr_empirical - 1000 / 901) < 3 * s.ecr_stderr

    def test_assumed_prior(self):
        spec = PolicySpec("bayesian", assumed=Uniform(50), label="wrong")
        batch = run_trials(Uniform(500), [spec], 100, 50, 1, 500)
        np.testing.assert_array_equal(batch.t_star["wrong"], 501)

    def test_policies_share_draws(self):
        batch = run_trials(TruncatedGaussian(100, 30), harness.STANDARD_POLICIES, 100, 300, 5, 500)
        assert batch.policies == ["bayesian", "point_prediction", "augmented_lambda_threshold",
                                  "randomized", "deterministic"]
        for p in batch.policies:
            assert np.all(batch.cost[p] >= batch.opt)

    def test_duplicate_labels(self):
        with pytest.raises(InvalidParams):
            run_trials(Uniform(10), ["bayesian", "bayesian"], 5, 10, 1, 10)

    def test_unknown_policy(self):
        with pytest.raises(InvalidParams):
            PolicySpec("oracle")

    def test_randomized_matches_exact_expectation(self):
        batch = run_trials(PointMass(150), "randomized", 100, 20_000, 0, 500)
        assert batch.ratio("randomized").mean() == pytest.approx(1.5774, abs=0.01)

    def test_trials_csv(self, tmp_path):
        batch = run_trials(Uniform(500), ["bayesian", "deterministic"], 100, 3, 42, 500)
        batch.write_trials_csv(tmp_path / "t.csv")
        lines = (tmp_path / "t.csv").read_text().splitlines()
        assert lines[0] == "trial,seed,T,policy,t_star,cost,opt,ratio"
        assert len(lines) == 1 + 6
        assert lines[1].startswith("0,42,")


class TestMetrics:
    def test_all_ones(self):
        s = summarize_costs("p", np.full(10, 5.0), np.full(10, 5.0))
        assert (s.mean_cr, s.p95, s.success_rate, s.ci_lo, s.ci_hi) == (1.0, 1.0, 1.0, 1.0, 1.0)

    def test_nearest_rank_tail(self):
        ratios = np.array([1.0] * 99 + [3.0])
        s = summarize_costs("p", ratios, np.ones(100), rho=1.5)
        assert s.p95 == 1.0
        assert s.success_rate == pytest.approx(0.99)

    @pytest.mark.parametrize("q, expected", [(0.5, 2.0), (0.95, 4.0), (1.0, 4.0), (0.25, 1.0)])
    def test_nearest_rank(self, q, expected):
        assert nearest_rank([4.0, 1.0, 3.0, 2.0], q) == expected

    def test_ci_normal_approx(self):
        ratio = np.array([1.0, 2.0, 3.0, 4.0])
        s = summarize_costs("p", ratio, np.ones(4))
        half = 1.96 * ratio.std(ddof=1) / 2
        assert (s.ci_lo, s.ci_hi) == pytest.approx((2.5 - half, 2.5 + half))

    def test_ecr_is_ratio_of_means(self):
        s = summarize_costs("p", np.array([2.0, 10.0]), np.array([1.0, 10.0]))
        assert s.mean_cr == pytest.approx(1.5)
        assert s.ecr_empirical == pytest.approx(12 / 11)

    def test_empty(self):
        with pytest.raises(EmptyBatch):
            summarize_costs("p", np.array([]), np.array([]))


class TestExperiments:
    def test_q1_tables(self, tmp_path):
        report = harness.experiment_q1(SMALL)
        cells = report.table("q1_cells.csv")
        assert len(cells) == 3 * 13
        unperturbed = [c for c in cells if c["error_type"] == "none"]
        assert all(c["tv"] == 0 and c["cost_increase_pct"] == 0 for c in unperturbed)
        # the true prior is Bayes-optimal among fixed purchase days
        assert all(c["cost_increase_pct"] >= -1e-9 for c in cells)
        assert {r["error_type"] for r in report.table("q1_error_types.csv")} == {"mean", "variance", "shape"}
        written = report.write(tmp_path)
        assert {p.name for p in written} == {"q1_cells.csv", "q1_error_types.csv", "q1_tv_bins.csv",
                                             "config.json"}
        assert "worst_cost_increase_pct" in json.loads((tmp_path / "config.json").read_text())["notes"]

    def test_q2_rows(self):
        rows = harness.experiment_q2(SMALL).table("q2_policies.csv")
        assert len(rows) == 4 * 5
        assert {r["family"] for r in rows} == {"uniform", "gaussian", "exponential", "pooled"}
        det = [r for r in rows if r["policy"] == "deterministic" and r["family"] == "uniform"]
        assert det[0]["mean_cr"] > 1

    def test_q3_rows(self):
        rows = harness.experiment_q3(SMALL).table("q3_bias.csv")
        assert [r["alpha"] for r in rows] == list(harness.Q3_BIASES)
        assert all(r["bayesian_cr"] >= 1.0 and r["point_cr"] >= 1.0 for r in rows)

    def test_q4_consistency(self):
        report = harness.experiment_q4(SMALL)
        for row in report.table("q4_summary.csv"):
            assert row["myopic_expected_cost"] >= row["oracle_expected_cost"] - 1e-9
            if row["log_concave"]:
                assert row["myopic_t_star"] == row["oracle_t_star"]
        curves = report.table("q4_curves.csv")
        assert len(curves) == 3 * 501

    def test_q4_small_buy_cost(self):
        # with b below the modes, the myopic rule does buy and can differ from the optimum
        rows = harness.experiment_q4(ExperimentConfig(buy_cost=15)).table("q4_summary.csv")
        assert any(r["oracle_t_star"] <= 500 for r in rows)
        for row in rows:
            assert row["myopic_expected_cost"] >= row["oracle_expected_cost"] - 1e-9
