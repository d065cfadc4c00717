# services/__init__.py
# Re-export the public API

from .kernel import (
    unit_ball_volume, bandwidth_scale, eval_kernel, kde_evaluate, build_gram, build_gram_or_stream,
    KernelGram, StreamingGram,
)
from .cusum import cusum_at, cusum_stat, cusum_profile, cusum_weights
from .segmenter import (
    default_bandwidth, buffer_len, generate_intervals, MNPSegmenter,
    mnp_detect, detection_path, path_discrepancy,
)
from .selector import (
    random_directions, ks_statistic, ks_pvalue, bh_adjust, leading_axis, axis_pvalue,
    test_candidate, select_from_sets, run_selection, auto_select,
)
from .simulator import gen_scenario, mvn_sample, mvt_sample, true_change_points
from .metrics import hausdorff_one_sided, evaluate_run, aggregate
from .pipeline import detect_change_points, run_replicate, run_bench
from .db_operations import (
    create_run, get_run, get_recent_runs, save_replicate, get_replicates, delete_run,
)
from .pdf_generator import BenchReportPDFGenerator

__all__ = [
    # Kernels and Gram
    'unit_ball_volume', 'bandwidth_scale', 'eval_kernel', 'kde_evaluate', 'build_gram', 'build_gram_or_stream',
    'KernelGram', 'StreamingGram',
    # CUSUM
    'cusum_at', 'cusum_stat', 'cusum_profile', 'cusum_weights',
    # Segmentation
    'default_bandwidth', 'buffer_len', 'generate_intervals', 'MNPSegmenter',
    'mnp_detect', 'detection_path', 'path_discrepancy',
    # Selection
    'random_directions', 'ks_statistic', 'ks_pvalue', 'bh_adjust', 'leading_axis', 'axis_pvalue',
    'test_candidate', 'select_from_sets', 'run_selection', 'auto_select',
    # Simulation and metrics
    'gen_scenario', 'mvn_sample', 'mvt_sample', 'true_change_points',
    'hausdorff_one_sided', 'evaluate_run', 'aggregate',
    # Pipeline
    'detect_change_points', 'run_replicate', 'run_bench',
    # Run store and report
    'create_run', 'get_run', 'get_recent_runs', 'save_replicate', 'get_replicates', 'delete_run',
    'BenchReportPDFGenerator',
]
