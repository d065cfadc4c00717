# selector.py
# Automatic model selection over the nested candidate sets
"""
Starting from the largest nested set S_m, every split new to S_i is tested by
projecting the two adjacent segments onto N random unit directions and
comparing them with the two-sample Kolmogorov-Smirnov statistic. p-values
exp(-2 a^2), with a = sqrt(n1 n2 / (n1 + n2)) * D, are Benjamini-Hochberg
adjusted across directions; a split is declared when the smallest adjusted
p-value is at most alpha. The first level with a declaration is returned.

With ``axis_check`` on, a second family holds one more KS test: both segments
are projected on the leading principal axis of the pooled bracket and folded
about the pooled median of that projection, so a change of spread along the
axis becomes a shift in the folded values. The axis and the median depend on
the pooled values only, hence a split without a change keeps the usual KS
null. Each family is adjusted on its own and a split is declared when either
reaches alpha.
"""

import bisect
import logging
import math
from typing import List, Sequence, Tuple

import numpy as np

from core.errors import DegenerateSplit, EmptySample, InvalidPValue
from core.models import (
    ChangePointSet, Sample, SelectionResult, SelectionTest, SelectorConfig, ThresholdPath,
)
from services.random_streams import stream

_log: logging.Logger = logging.getLogger(__name__)

_SMALLEST_PVALUE = np.finfo(np.float64).tiny


def random_directions(p: int, N: int, rng: np.random.Generator) -> np.ndarray:
    """N x p array of unit vectors, standard normal draws normalised to length one"""
    if p < 1 or N < 1:
        raise ValueError(f"need p >= 1 and N >= 1, got p={p}, N={N}")
    v = rng.standard_normal((N, p))
    norms = np.linalg.norm(v, axis=1)
    # a zero draw has probability zero; redraw it anyway
    while np.any(norms == 0.0):
        zero = norms == 0.0
        v[zero] = rng.standard_normal((int(zero.sum()), p))
        norms = np.linalg.norm(v, axis=1)
    return v / norms[:, None]


def ks_statistic(a: Sequence[float], b: Sequence[float]) -> float:
    """sup_x |F_a(x) - F_b(x)| over pooled points, right-continuous ECDFs"""
    a = np.sort(np.asarray(a, dtype=np.float64))
    b = np.sort(np.asarray(b, dtype=np.float64))
    if a.size == 0 or b.size == 0:
        raise EmptySample("both samples must be nonempty")
    pooled = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, pooled, side="right") / a.size
    cdf_b = np.searchsorted(b, pooled, side="right") / b.size
    return float(np.max(np.abs(cdf_a - cdf_b)))


def ks_pvalue(D: float, n1: int, n2: int) -> float:
    """exp(-2 a^2) with a = sqrt(n1 n2 / (n1 + n2)) * D, clamped to (0, 1]"""
    a = math.sqrt(n1 * n2 / (n1 + n2)) * D
    return min(1.0, max(math.exp(-2.0 * a * a), _SMALLEST_PVALUE))


def bh_adjust(pvalues: Sequence[float]) -> np.ndarray:
    """Benjamini-Hochberg step-up adjusted p-values in the input order"""
    p = np.asarray(pvalues, dtype=np.float64)
    for position, value in enumerate(p):
        if not 0.0 <= value <= 1.0:
            raise InvalidPValue(float(value), position)
    n = p.size
    if n == 0:
        return p.copy()
    order = np.argsort(p, kind="stable")
    ranked = p[order] * n / np.arange(1, n + 1)
    ranked = np.minimum.accumulate(ranked[::-1])[::-1]
    adjusted = np.empty(n)
    adjusted[order] = np.minimum(ranked, 1.0)
    return adjusted


def leading_axis(pooled: np.ndarray) -> np.ndarray:
    """Unit eigenvector of the largest eigenvalue of the pooled sample covariance"""
    if pooled.shape[0] < 2:
        axis = np.zeros(pooled.shape[1])
        axis[0] = 1.0
        return axis
    centred = pooled - pooled.mean(axis=0)
    # eigh sorts eigenvalues ascending
    _, vectors = np.linalg.eigh(centred.T @ centred)
    return vectors[:, -1]


def axis_pvalue(first: np.ndarray, second: np.ndarray) -> float:
    """KS p-value of the two segments folded about the pooled median on the leading axis"""
    pooled = np.concatenate([first, second])
    projected = pooled @ leading_axis(pooled)
    folded = np.abs(projected - np.median(projected))
    n1 = first.shape[0]
    D = ks_statistic(folded[:n1], folded[n1:])
    return ks_pvalue(D, n1, second.shape[0])


def test_candidate(sample: Sample, eta: int, left: int, right: int,
                   cfg: SelectorConfig, rng: np.random.Generator) -> Tuple[bool, float]:
    """KS-test {left+1..eta} against {eta+1..right} along N random directions"""
    if not left < eta < right or left < 0 or right > sample.T:
        raise DegenerateSplit(f"split {eta} in ({left}, {right}] leaves an empty side")
    n1, n2 = eta - left, right - eta
    first_rows = sample.data[left:eta]
    second_rows = sample.data[eta:right]

    directions = random_directions(sample.p, cfg.N, rng)
    first = first_rows @ directions.T
    second = second_rows @ directions.T

    pvalues = np.empty(cfg.N)
    for l in range(cfg.N):
        D = ks_statistic(first[:, l], second[:, l])
        pvalues[l] = ks_pvalue(D, n1, n2)
    min_adjusted = float(np.min(bh_adjust(pvalues)))
    if cfg.axis_check:
        min_adjusted = min(min_adjusted, axis_pvalue(first_rows, second_rows))
    return min_adjusted <= cfg.alpha, min_adjusted


# ========================================
# Top-down stopping rule
# ========================================

def _bracket(eta: int, previous: List[int], T: int) -> Tuple[int, int]:
    """Nearest points of the previous set around eta, 1 and T at the ends"""
    pos = bisect.bisect_left(previous, eta)
    left = previous[pos - 1] if pos > 0 else 1
    right = previous[pos] if pos < len(previous) else T
    return left, right


def select_from_sets(sample: Sample, nested: Sequence[frozenset],
                     cfg: SelectorConfig) -> SelectionResult:
    """Walk S_m, S_{m-1}, ... and stop at the first level with a declared split"""
    tests: List[SelectionTest] = []
    for level in range(len(nested), 0, -1):
        current = nested[level - 1]
        previous = sorted(nested[level - 2]) if level > 1 else []
        new_points = sorted(set(current) - set(previous))

        declared_any = False
        for eta in new_points:
            left, right = _bracket(eta, previous, sample.T)
            rng = stream(cfg.seed, "directions", level, eta)
            try:
                declared, min_p = test_candidate(sample, eta, left, right, cfg, rng)
            except DegenerateSplit as exc:
                _log.debug("level %d: %s", level, exc)
                declared, min_p = False, 1.0
            tests.append(SelectionTest(level=level, eta=eta, left=left, right=right,
                                       min_adjusted_p=min_p, declared=declared))
            _log.info("level %d: split %d in (%d, %d] min adjusted p=%.3g declared=%s",
                      level, eta, left, right, min_p, declared)
            declared_any = declared_any or declared

        if declared_any:
            return SelectionResult(ChangePointSet.from_splits(current), level, tuple(tests))

    return SelectionResult(ChangePointSet(), 0, tuple(tests))


def run_selection(sample: Sample, path: ThresholdPath, cfg: SelectorConfig) -> SelectionResult:
    return select_from_sets(sample, path.nested_sets(), cfg)


def auto_select(sample: Sample, path: ThresholdPath, cfg: SelectorConfig) -> ChangePointSet:
    """Estimated change points chosen from the path; empty when nothing is declared"""
    return run_selection(sample, path, cfg).change_points
