import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skirental.errors import InvalidParams, ZeroPosterior
from skirental.fusion import Prediction, fuse, fuse_batch, load_predictions, prediction_to_prior
from skirental.policy import purchase_day
from skirental.priors import PointMass, TruncatedGaussian, Uniform, build_prior, tv_distance

FLAT = build_prior(Uniform(500), 500)

predictions = st.lists(
    st.builds(Prediction, st.floats(1, 500), st.floats(2, 200)), min_size=1, max_size=6
)


class TestFuse:
    def test_single_prediction_mode(self):
        post = fuse(FLAT, [Prediction(100, 10)])
        assert int(np.argmax(post.mass)) + 1 == 100

    def test_two_identical_predictions_halve_variance(self):
        post = fuse(FLAT, [Prediction(100, 10), Prediction(100, 10)])
        assert post.mean() == pytest.approx(100, abs=1e-9)
        assert post.variance() == pytest.approx(50, rel=1e-3)

    def test_wide_prediction_barely_moves(self):
        p = build_prior(TruncatedGaussian(80, 20), 500)
        assert tv_distance(fuse(p, [Prediction(300, 1e6)]), p) < 1e-3

    def test_empty_returns_prior(self):
        assert fuse(FLAT, []) is FLAT

    def test_distant_tight_predictions_survive(self):
        # a naive product of likelihoods underflows to zero here
        post = fuse(FLAT, [Prediction(50, 1), Prediction(450, 1)])
        assert post.mass.sum() == pytest.approx(1.0)
        assert int(np.argmax(post.mass)) + 1 == 250

    def test_far_prediction_keeps_point_mass(self):
        post = fuse(build_prior(PointMass(3), 500), [Prediction(450, 1)])
        assert post.mass[2] == 1.0

    def test_zero_posterior(self):
        # the likelihood is exactly zero at every day the prior allows
        with pytest.raises(ZeroPosterior):
            fuse(build_prior(PointMass(3), 500), [Prediction(450, 1e-200)])

    @settings(max_examples=50)
    @given(predictions)
    def test_order_invariant(self, preds):
        a = fuse(FLAT, preds)
        b = fuse(FLAT, preds[::-1])
        np.testing.assert_allclose(a.mass, b.mass, rtol=0, atol=1e-10)

    @settings(max_examples=50)
    @given(predictions)
    def test_batch_matches_sequential(self, preds):
        np.testing.assert_allclose(fuse(FLAT, preds).mass, fuse_batch(FLAT, preds).mass, rtol=0, atol=1e-10)

    @given(st.lists(st.builds(Prediction, st.floats(150, 350), st.floats(3, 20)), min_size=1, max_size=5))
    def test_precision_weighted_mean(self, preds):
        w = np.array([1 / p.sigma ** 2 for p in preds])
        expected = float(w @ [p.value for p in preds] / w.sum())
        assert fuse(FLAT, preds).mean() == pytest.approx(expected, abs=0.5)


class TestPredictionPrior:
    def test_matches_gaussian_builder(self):
        a = prediction_to_prior(100, 0.3, 500)
        b = build_prior(TruncatedGaussian(100, 30), 500)
        np.testing.assert_array_equal(a.mass, b.mass)
        assert purchase_day(a, 100) == purchase_day(b, 100)

    def test_vanishing_width(self):
        p = prediction_to_prior(42.2, 1e-4, 500)
        assert p.mass[41] == pytest.approx(1.0)

    @pytest.mark.parametrize("t_hat, beta", [(0, 0.3), (-5, 0.3), (100, 0), (float("inf"), 0.3)])
    def test_invalid(self, t_hat, beta):
        with pytest.raises(InvalidParams):
            prediction_to_prior(t_hat, beta, 500)

    @pytest.mark.parametrize("value, sigma", [(float("nan"), 1), (10, 0), (10, -1)])
    def test_invalid_prediction(self, value, sigma):
        with pytest.raises(InvalidParams):
            Prediction(value, sigma)


class TestLoadPredictions:
    def test_read(self, tmp_path):
        path = tmp_path / "preds.txt"
        path.write_text("# forecasts\n100,10\n\n120, 15  # second\n")
        assert load_predictions(path) == [Prediction(100, 10), Prediction(120, 15)]

    @pytest.mark.parametrize("body", ["100\n", "a,b\n", "100,0\n"])
    def test_malformed(self, tmp_path, body):
        path = tmp_path / "preds.txt"
        path.write_text(body)
        with pytest.raises(InvalidParams):
            load_predictions(path)
