"""Benchmark-level behaviour of the full method; run with ``pytest -m slow``."""

import time

import pytest

from core.models import SegmenterConfig, SelectorConfig, validate_sample
from services.pipeline import detect_change_points, run_bench
from services.random_streams import stream
from services.segmenter import MNPSegmenter

pytestmark = pytest.mark.slow


def test_detect_runs_within_a_minute_on_one_thread():
    data = stream(5000, "timing").standard_normal((300, 20))
    start = time.perf_counter()
    detect_change_points(validate_sample(data), SegmenterConfig(M=50, seed=0, threads=1),
                         SelectorConfig(seed=0))
    assert time.perf_counter() - start < 60.0


def test_mean_shift_is_localised():
    row, = run_bench([1], [150], [10], reps=20, seed_base=1000,
                     seg_cfg=SegmenterConfig(), sel_cfg=SelectorConfig())
    assert row.mean_count_error <= 0.3
    assert row.median_d_est_given_true <= 6
    assert row.median_d_true_given_est <= 6


def test_covariance_change_is_found_often_enough():
    row, = run_bench([3], [150], [10], reps=20, seed_base=2000,
                     seg_cfg=SegmenterConfig(), sel_cfg=SelectorConfig())
    assert row.mean_count_error <= 1.8
    assert row.median_d_est_given_true <= 60


def test_few_false_alarms_without_a_change():
    empty = 0
    for r in range(20):
        data = stream(3000 + r, "null").standard_normal((150, 10))
        outcome = detect_change_points(validate_sample(data), SegmenterConfig(seed=r),
                                       SelectorConfig(seed=r))
        empty += len(outcome.change_points) == 0
    assert empty >= 19


def test_fixed_threshold_reruns_stay_nested():
    for r in range(20):
        data = stream(4000 + r, "nesting").standard_normal((120, 5))
        seg = MNPSegmenter(validate_sample(data), SegmenterConfig(seed=r))
        exact = seg.exact_tau_sets(seg.path())
        for smaller, larger in zip(exact, exact[1:]):
            assert smaller <= larger
