"""Tests for services.simulator."""

import math

import numpy as np
import pytest

from core.errors import BadDimension, BadLength
from services.random_streams import stream
from services.simulator import SCENARIOS, gen_scenario, mvn_sample, mvt_sample, true_change_points


def _segments(data, T):
    third = T // 3
    return data[:third], data[third:2 * third], data[2 * third:]


class TestTruth:

    def test_change_points_open_each_third(self):
        assert true_change_points(150).to_list() == [51, 101]
        assert true_change_points(3).to_list() == [2, 3]

    @pytest.mark.parametrize("scenario", SCENARIOS)
    def test_every_scenario(self, scenario):
        sample, truth = gen_scenario(scenario, 90, 4, seed=1)
        assert (sample.T, sample.p) == (90, 4)
        assert truth.true_points.to_list() == [31, 61]
        assert truth.to_dict() == {"scenario": scenario, "T": 90, "p": 4, "seed": 1,
                                   "change_points": [31, 61]}

    @pytest.mark.parametrize("scenario", SCENARIOS)
    def test_deterministic(self, scenario):
        a, _ = gen_scenario(scenario, 30, 4, seed=5)
        b, _ = gen_scenario(scenario, 30, 4, seed=5)
        c, _ = gen_scenario(scenario, 30, 4, seed=6)
        assert a == b
        assert a != c


class TestErrors:

    def test_unknown_scenario(self):
        with pytest.raises(ValueError):
            gen_scenario(6, 30, 4, seed=0)

    @pytest.mark.parametrize("T", [0, 100, 2])
    def test_bad_length(self, T):
        with pytest.raises(BadLength):
            gen_scenario(2, T, 4, seed=0)

    def test_bad_dimension(self):
        with pytest.raises(BadDimension):
            gen_scenario(3, 30, 1, seed=0)
        with pytest.raises(BadDimension):
            gen_scenario(1, 30, 3, seed=0)


class TestSamplers:

    def test_zero_cholesky_returns_mean(self):
        mean = np.array([1.0, -2.0, 3.5])
        np.testing.assert_array_equal(mvn_sample(mean, np.zeros((3, 3)), stream(0, "x")), mean)

    def test_student_t_rejects_nonpositive_df(self):
        with pytest.raises(ValueError):
            mvt_sample(np.eye(2), 0.0, stream(0, "x"))

    def test_student_t_scale(self):
        rng = stream(3, "x")
        draws = np.array([mvt_sample(np.eye(2), 10.0, rng) for _ in range(20000)])
        # variance of t_10 is 10 / 8
        assert draws.var(axis=0) == pytest.approx([1.25, 1.25], rel=0.1)

    def test_identity_covariance(self):
        rng = stream(4, "x")
        draws = np.array([mvn_sample(np.zeros(3), np.eye(3), rng) for _ in range(20000)])
        np.testing.assert_allclose(np.cov(draws, rowvar=False), np.eye(3), atol=0.05)
        assert np.abs(draws.mean(axis=0)).max() < 0.05

    def test_student_t_with_huge_df_is_normal(self):
        rng = stream(5, "x")
        draws = np.array([mvt_sample(np.eye(2), 1e6, rng) for _ in range(20000)])
        assert np.abs(np.median(draws, axis=0)).max() < 0.03
        assert draws.var(axis=0) == pytest.approx([1.0, 1.0], abs=0.05)


class TestScenarioMoments:

    def test_mean_shift_on_half_the_coordinates(self):
        sample, _ = gen_scenario(1, 300, 20, seed=2)
        first, middle, last = _segments(sample.data, 300)
        assert middle[:, :10].mean() == pytest.approx(1.0, abs=0.15)
        assert abs(middle[:, 10:].mean()) < 0.15
        assert abs(first.mean()) < 0.15 and abs(last.mean()) < 0.15

    def test_heavy_tailed_small_shift(self):
        sample, _ = gen_scenario(2, 3000, 5, seed=2)
        first, middle, _ = _segments(sample.data, 3000)
        assert middle.mean() == pytest.approx(0.1, abs=0.05)
        assert abs(first.mean()) < 0.05

    def test_correlation_appears_in_the_middle(self):
        sample, _ = gen_scenario(3, 3000, 3, seed=2)
        first, middle, _ = _segments(sample.data, 3000)
        inner = np.cov(middle, rowvar=False)
        outer = np.cov(first, rowvar=False)
        off = ~np.eye(3, dtype=bool)
        # 5 sigma at n = 1000: sd of a unit variance 0.045, of a 0.5 covariance 0.035
        assert inner[off] == pytest.approx(np.full(6, 0.5), abs=0.18)
        assert np.abs(outer[off]).max() < 0.16
        assert np.diag(inner) == pytest.approx(np.ones(3), abs=0.23)

    def test_mixture_matches_the_null_variance(self):
        sample, _ = gen_scenario(4, 3000, 10, seed=2)
        first, middle, _ = _segments(sample.data, 3000)
        assert first.var() == pytest.approx(1.25, abs=0.1)
        assert middle.var() == pytest.approx(1.25, abs=0.1)
        assert np.abs(middle.mean(axis=1)).mean() == pytest.approx(0.5, abs=0.05)
        assert np.abs(first.mean(axis=1)).mean() < 0.4

    def test_arcsine_coordinates_keep_mean_and_variance(self):
        sample, _ = gen_scenario(5, 3000, 4, seed=2)
        first, middle, _ = _segments(sample.data, 3000)
        shaped = middle[:, 2:]
        assert shaped.mean() == pytest.approx(0.5, abs=0.02)
        assert shaped.var() == pytest.approx(1.0 / 12.0, abs=0.01)
        half_width = math.sqrt(1.0 / 6.0)
        assert shaped.min() >= 0.5 - half_width - 1e-12
        assert shaped.max() <= 0.5 + half_width + 1e-12
        # uniform columns everywhere else
        assert first.min() >= 0.0 and first.max() < 1.0
        assert middle[:, :2].var() == pytest.approx(1.0 / 12.0, abs=0.01)
        # arcsine mass piles up at the edges
        edge = np.abs(shaped - 0.5) > 0.8 * half_width
        assert edge.mean() > 0.35
