# metrics.py
# Count error and one-sided Hausdorff distances between change-point sets

import math
from typing import Iterable, List, Sequence

import numpy as np

from core.errors import EmptyList
from core.models import ChangePointSet, EvalResult, EvalSummary


def hausdorff_one_sided(from_set: Iterable[int], to_set: Iterable[int]) -> float:
    """d(from | to) = max over eta in to_set of min over x in from_set of |x - eta|.

    An empty from_set gives +inf, an empty conditioning to_set gives -inf.
    Two empty sets agree exactly and give 0.
    """
    source = np.fromiter(from_set, dtype=np.int64)
    target = np.fromiter(to_set, dtype=np.int64)
    if source.size == 0 and target.size == 0:
        return 0.0
    if source.size == 0:
        return math.inf
    if target.size == 0:
        return -math.inf
    gaps = np.abs(target[:, None] - source[None, :])
    return float(gaps.min(axis=1).max())


def evaluate_run(estimated: ChangePointSet, truth: ChangePointSet) -> EvalResult:
    return EvalResult(
        count_error=abs(len(estimated) - len(truth)),
        d_est_given_true=hausdorff_one_sided(estimated, truth),
        d_true_given_est=hausdorff_one_sided(truth, estimated),
    )


def extended_median(values: Sequence[float]) -> float:
    """Median over the extended reals; the lower-middle element for even counts"""
    if len(values) == 0:
        raise EmptyList("median of an empty list")
    ordered: List[float] = sorted(float(v) for v in values)
    return ordered[(len(ordered) - 1) // 2]


def aggregate(results: Sequence[EvalResult]) -> EvalSummary:
    """Mean count error and medians of both one-sided distances"""
    if not results:
        raise EmptyList("cannot aggregate an empty list of results")
    return EvalSummary(
        n=len(results),
        mean_count_error=sum(r.count_error for r in results) / len(results),
        median_d_est_given_true=extended_median([r.d_est_given_true for r in results]),
        median_d_true_given_est=extended_median([r.d_true_given_est for r in results]),
    )
