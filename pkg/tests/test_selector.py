"""Tests for services.selector: KS along projections, BH adjustment and the stopping rule."""

import math

import numpy as np
import pytest

from core.errors import DegenerateSplit, EmptySample, InvalidPValue
from core.models import (
    DetectionRecord, Interval, SelectorConfig, ThresholdPath, validate_sample,
)
import services
from services import selector
from services.random_streams import stream
from services.simulator import gen_scenario


def _brute_ks(a, b):
    best = 0.0
    for x in list(a) + list(b):
        fa = sum(1 for v in a if v <= x) / len(a)
        fb = sum(1 for v in b if v <= x) / len(b)
        best = max(best, abs(fa - fb))
    return best


def _brute_bh(p):
    n = len(p)
    ordered = sorted(p)
    out = []
    for value in p:
        rank = ordered.index(value) + 1
        out.append(min(1.0, min(n * ordered[k - 1] / k for k in range(rank, n + 1))))
    return out


class TestKsStatistic:

    @pytest.mark.parametrize("a,b,expected", [
        ([1, 2, 3], [1, 2, 3], 0.0),
        ([1, 2], [3, 4], 1.0),
        ([1, 2, 3, 4], [3, 4, 5, 6], 0.5),
    ])
    def test_examples(self, a, b, expected):
        assert selector.ks_statistic(a, b) == pytest.approx(expected)

    def test_symmetric_and_monotone_invariant(self, rng):
        a, b = rng.standard_normal(17), rng.standard_normal(23) + 0.3
        d = selector.ks_statistic(a, b)
        assert selector.ks_statistic(b, a) == d
        assert selector.ks_statistic(np.exp(a), np.exp(b)) == pytest.approx(d)

    def test_matches_brute_force(self, rng):
        for _ in range(500):
            n = int(rng.integers(1, 15))
            a = rng.integers(0, 6, size=n).astype(float)
            b = rng.integers(0, 6, size=n).astype(float)
            assert selector.ks_statistic(a, b) == pytest.approx(_brute_ks(a, b))

    def test_matches_brute_force_unequal_lengths(self, rng):
        for _ in range(200):
            a = rng.integers(0, 6, size=int(rng.integers(1, 12))).astype(float)
            b = rng.integers(0, 6, size=int(rng.integers(1, 12))).astype(float)
            assert selector.ks_statistic(a, b) == pytest.approx(_brute_ks(a, b))

    def test_empty_side(self):
        with pytest.raises(EmptySample):
            selector.ks_statistic([], [1.0])


class TestKsPvalue:

    def test_zero_distance(self):
        assert selector.ks_pvalue(0.0, 10, 12) == 1.0

    def test_closed_form(self):
        assert selector.ks_pvalue(0.5, 50, 50) == pytest.approx(math.exp(-12.5), rel=1e-12)

    def test_never_exactly_zero(self):
        assert 0.0 < selector.ks_pvalue(1.0, 10000, 10000) <= 1.0


class TestBhAdjust:

    def test_example(self):
        np.testing.assert_allclose(selector.bh_adjust([0.01, 0.02, 0.04]), [0.03, 0.03, 0.04])

    def test_keeps_input_order(self):
        np.testing.assert_allclose(selector.bh_adjust([0.04, 0.01, 0.02]), [0.04, 0.03, 0.03])

    def test_matches_step_up_oracle(self, rng):
        for _ in range(200):
            p = rng.uniform(0, 1, size=int(rng.integers(1, 30))) ** 3
            adjusted = selector.bh_adjust(p)
            np.testing.assert_allclose(adjusted, _brute_bh(list(p)), rtol=1e-12)
            assert np.all(adjusted >= p - 1e-15)
            assert np.all(adjusted <= 1.0)

    def test_empty(self):
        assert selector.bh_adjust([]).size == 0

    @pytest.mark.parametrize("bad", [-0.1, 1.5, float("nan")])
    def test_invalid(self, bad):
        with pytest.raises(InvalidPValue) as excinfo:
            selector.bh_adjust([0.2, bad])
        assert excinfo.value.position == 1


class TestRandomDirections:

    def test_unit_length(self):
        v = selector.random_directions(5, 40, stream(1, "directions", 1, 10))
        assert v.shape == (40, 5)
        np.testing.assert_allclose(np.linalg.norm(v, axis=1), 1.0, rtol=1e-12)

    def test_one_dimension_gives_signs(self):
        v = selector.random_directions(1, 30, stream(2, "directions", 1, 10))
        assert set(np.abs(v).ravel().tolist()) == {1.0}

    def test_deterministic_per_stream(self):
        a = selector.random_directions(3, 10, stream(4, "directions", 2, 7))
        b = selector.random_directions(3, 10, stream(4, "directions", 2, 7))
        np.testing.assert_array_equal(a, b)

    def test_isotropic(self):
        v = selector.random_directions(5, 10_000, stream(9, "directions", 1, 1))
        assert np.linalg.norm(v.mean(axis=0)) < 0.05


class TestLeadingAxis:

    def test_follows_the_stretched_coordinate(self, rng):
        data = rng.standard_normal((200, 4))
        data[:, 2] *= 5.0
        axis = selector.leading_axis(data)
        assert np.linalg.norm(axis) == pytest.approx(1.0, rel=1e-12)
        assert abs(axis[2]) > 0.99

    def test_single_row(self):
        np.testing.assert_array_equal(selector.leading_axis(np.ones((1, 3))), [1.0, 0.0, 0.0])

    def test_spread_change_along_the_axis(self, rng):
        first = rng.standard_normal((60, 5))
        second = rng.standard_normal((60, 5))
        second[:, 0] *= 4.0
        assert selector.axis_pvalue(first, second) <= 1e-4

    def test_translation_does_not_matter(self, rng):
        first, second = rng.standard_normal((30, 3)), 1.5 * rng.standard_normal((25, 3))
        shift = np.array([7.0, -3.0, 0.5])
        assert selector.axis_pvalue(first + shift, second + shift) == pytest.approx(
            selector.axis_pvalue(first, second), rel=1e-9)

    def test_rarely_small_without_a_change(self, rng):
        small = 0
        for _ in range(200):
            pooled = rng.standard_normal((80, 3))
            small += selector.axis_pvalue(pooled[:40], pooled[40:]) <= 0.05
        assert small <= 40


class TestCandidateTest:

    def test_point_mass_never_declared(self):
        sample = validate_sample(np.zeros((40, 3)))
        declared, min_p = selector.test_candidate(sample, 20, 0, 40, SelectorConfig(), stream(0, "d"))
        assert not declared
        assert min_p == 1.0

    def test_separated_constants_declared(self):
        data = np.vstack([np.full((50, 3), -10.0), np.full((50, 3), 10.0)])
        declared, min_p = selector.test_candidate(validate_sample(data), 50, 0, 100,
                                                  SelectorConfig(), stream(0, "d"))
        assert declared
        assert min_p == pytest.approx(math.exp(-50.0), rel=1e-9)

    def test_exported_from_the_package(self):
        assert services.test_candidate is selector.test_candidate
        assert services.delete_run.__module__ == "services.db_operations"

    def test_covariance_change_declared_through_the_axis(self):
        sample, _ = gen_scenario(3, 300, 10, seed=0)
        declared, min_p = selector.test_candidate(sample, 100, 0, 200, SelectorConfig(), stream(0, "d"))
        assert declared
        _, random_only = selector.test_candidate(sample, 100, 0, 200, SelectorConfig(axis_check=False),
                                                 stream(0, "d"))
        assert min_p <= random_only

    @pytest.mark.parametrize("eta,left,right", [(5, 5, 20), (20, 5, 20), (10, 0, 41)])
    def test_degenerate(self, eta, left, right):
        sample = validate_sample(np.zeros((40, 2)))
        with pytest.raises(DegenerateSplit):
            selector.test_candidate(sample, eta, left, right, SelectorConfig(), stream(0, "d"))


class TestSelection:

    def test_empty_path(self, shifted_sample):
        result = selector.run_selection(shifted_sample, ThresholdPath(), SelectorConfig())
        assert result.change_points.to_list() == []
        assert result.selected_level == 0
        assert result.tests == ()

    def test_stops_at_first_declared_level(self, shifted_sample):
        nested = [frozenset({30}), frozenset({30, 45})]
        result = selector.select_from_sets(shifted_sample, nested, SelectorConfig(seed=3))
        assert result.selected_level == 1
        assert result.change_points.to_list() == [31]
        tested = [(t.level, t.eta, t.left, t.right, t.declared) for t in result.tests]
        assert tested == [(2, 45, 30, 60, False), (1, 30, 1, 60, True)]

    def test_declared_level_keeps_every_split_of_that_level(self, shifted_sample):
        nested = [frozenset({30}), frozenset({10, 30})]
        path = ThresholdPath((
            DetectionRecord(b=30, a=2.0, interval=Interval(0, 60), depth=0),
            DetectionRecord(b=10, a=1.0, interval=Interval(0, 30), depth=1),
        ))
        assert path.nested_sets() == nested
        result = selector.run_selection(shifted_sample, path, SelectorConfig(seed=3))
        # 10 splits {2..10} from {11..30}, both before the shift
        assert result.selected_level in (1, 2)
        assert 31 in result.change_points.to_list()

    def test_nothing_declared_on_noise(self, rng):
        sample = validate_sample(rng.standard_normal((80, 3)))
        nested = [frozenset({40}), frozenset({20, 40}), frozenset({20, 40, 60})]
        assert selector.select_from_sets(sample, nested, SelectorConfig(seed=1)).change_points.to_list() == []

    def test_degenerate_split_counts_as_not_declared(self, shifted_sample):
        # a split at 1 leaves nothing between the left bracket and eta
        result = selector.select_from_sets(shifted_sample, [frozenset({1})], SelectorConfig())
        assert result.tests[0].min_adjusted_p == 1.0
        assert result.change_points.to_list() == []

    def test_auto_select_is_deterministic(self, shifted_sample):
        path = ThresholdPath((DetectionRecord(b=30, a=2.0, interval=Interval(0, 60), depth=0),))
        cfg = SelectorConfig(seed=8)
        assert selector.auto_select(shifted_sample, path, cfg) == selector.auto_select(shifted_sample, path, cfg)
