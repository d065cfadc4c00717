# segmenter.py
# Wild binary segmentation over random intervals with the kernel CUSUM statistic
"""
One ``MNPSegmenter`` owns a sample, its Gram and a fixed draw of random
intervals. ``detect(tau)`` is the fixed-threshold recursion; ``path()`` runs the
same recursion accepting every admissible split and records the statistic of
each, which yields the nested candidate sets S(tau) = {b : a > tau}.

Per recursion step the working interval (s, e) is intersected with every
random interval; intersections longer than 2 * buffer + 1 are scanned over
[s_m + buffer, e_m - buffer]. Scans are memoised by intersection, since the
same intersection recurs across steps and across exact-tau reruns.
"""

import logging
import math
from dataclasses import replace
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.errors import ConfigError, Unsatisfiable
from core.models import (
    ChangePointSet, DetectionRecord, Interval, KernelSpec, Sample,
    SegmenterConfig, ThresholdPath,
)
from services.cusum import cusum_profile
from services.kernel import bandwidth_scale, build_gram_or_stream
from services.random_streams import stream

_log: logging.Logger = logging.getLogger(__name__)

# Statistic assigned to intervals too short to scan
_INADMISSIBLE = -1.0


def default_bandwidth(T: int, p: int) -> float:
    """h = 5 * (30 log(T) / T)^(1/p)"""
    if T < 2 or p < 1:
        raise ConfigError(f"need T >= 2 and p >= 1, got T={T}, p={p}")
    return 5.0 * (30.0 * math.log(T) / T) ** (1.0 / p)


def buffer_len(h: float, p: int) -> int:
    """max(1, ceil(h^{-p})): points trimmed at each end of a scanned interval"""
    return max(1, math.ceil(bandwidth_scale(h, p)))


def generate_intervals(T: int, cfg: SegmenterConfig, rng: np.random.Generator) -> List[Interval]:
    """M intervals with endpoints drawn uniformly from {1..T}, redrawn until admissible"""
    min_len = cfg.min_interval_len or 1
    max_len = cfg.max_interval_len or T
    if min_len > T or max_len < min_len:
        raise Unsatisfiable(
            f"no interval in 1..{T} has length between {min_len} and {cfg.max_interval_len}"
        )

    intervals: List[Interval] = []
    batch = max(cfg.M, 64)
    while len(intervals) < cfg.M:
        ends = np.sort(rng.integers(1, T + 1, size=(batch, 2)), axis=1)
        # endpoints alpha <= beta cover {alpha..beta}, i.e. (alpha - 1, beta]
        lengths = ends[:, 1] - ends[:, 0] + 1
        ok = (lengths >= min_len) & (lengths <= max_len)
        for alpha, beta in ends[ok]:
            intervals.append(Interval(int(alpha) - 1, int(beta)))
            if len(intervals) == cfg.M:
                break
    return intervals


class MNPSegmenter:
    """Random-interval binary segmentation on one sample"""

    def __init__(self, sample: Sample, cfg: SegmenterConfig, gram=None):
        self.sample = sample
        self.cfg = cfg
        self.h = cfg.h if cfg.h is not None else default_bandwidth(sample.T, sample.p)
        self.spec = KernelSpec(cfg.kernel, sample.p)
        self.buffer = buffer_len(self.h, sample.p)

        min_len = cfg.min_interval_len if cfg.min_interval_len is not None else 2 * self.buffer + 2
        if min_len < 2 * self.buffer + 2:
            raise ConfigError(
                f"min_interval_len={min_len} is below 2 * buffer + 2 = {2 * self.buffer + 2}"
            )
        if cfg.min_interval_len is not None and min_len > sample.T:
            raise Unsatisfiable(f"min_interval_len={min_len} exceeds T={sample.T}")
        if min_len > sample.T:
            _log.warning("T=%d is shorter than the minimum interval length %d; nothing to scan",
                         sample.T, min_len)
            self.intervals: List[Interval] = []
        else:
            resolved = replace(cfg, min_interval_len=min_len)
            self.intervals = generate_intervals(sample.T, resolved, stream(cfg.seed, "intervals"))
        if cfg.include_full_interval:
            self.intervals.append(Interval(0, sample.T))

        self.gram = gram if gram is not None else build_gram_or_stream(
            sample, self.h, self.spec, budget_bytes=cfg.gram_budget_bytes, threads=cfg.threads
        )
        self._scans: Dict[Tuple[int, int], Tuple[int, float]] = {}

    # ----------------------------------------
    # One recursion step
    # ----------------------------------------

    def _scan(self, iv: Interval) -> Tuple[int, float]:
        key = (iv.s, iv.e)
        if key not in self._scans:
            profile = cusum_profile(self.gram, iv, self.buffer)
            self._scans[key] = (profile.argmax_t, profile.max_value)
        return self._scans[key]

    def best_split(self, s: int, e: int,
                   pool: Optional[ThreadPoolExecutor] = None) -> Tuple[int, float, Optional[Interval]]:
        """(b, a, interval) of the strongest admissible intersection; a = -1 if none"""
        working = Interval(s, e)
        candidates: List[Optional[Interval]] = []
        for random_iv in self.intervals:
            iv = working.intersect(random_iv)
            admissible = iv is not None and iv.length > 2 * self.buffer + 1
            candidates.append(iv if admissible else None)

        todo = [iv for iv in candidates if iv is not None and (iv.s, iv.e) not in self._scans]
        unique = list(dict.fromkeys(todo))
        if pool is not None and len(unique) > 1:
            for iv, result in zip(unique, pool.map(lambda x: cusum_profile(self.gram, x, self.buffer), unique)):
                self._scans[(iv.s, iv.e)] = (result.argmax_t, result.max_value)

        best_b, best_a, best_iv = -1, _INADMISSIBLE, None
        for iv in candidates:
            if iv is None:
                continue
            b, a = self._scan(iv)
            # strict comparison keeps the smallest m on ties
            if a > best_a:
                best_b, best_a, best_iv = b, a, iv
        return best_b, best_a, best_iv

    # ----------------------------------------
    # Recursions
    # ----------------------------------------

    def _recurse(self, tau: Optional[float]) -> List[DetectionRecord]:
        records: List[DetectionRecord] = []
        stack = [(0, self.sample.T, 0)]
        pool = ThreadPoolExecutor(max_workers=self.cfg.threads) if self.cfg.threads > 1 else None
        try:
            while stack:
                s, e, depth = stack.pop()
                if e - s <= 2 * self.buffer + 1:
                    continue
                b, a, iv = self.best_split(s, e, pool)
                if iv is None:
                    continue
                if tau is not None and not a > tau:
                    continue
                records.append(DetectionRecord(b=b, a=a, interval=iv, depth=depth))
                _log.debug("split b=%d a=%.6g in (%d, %d] depth=%d", b, a, iv.s, iv.e, depth)
                # right child pushed first so the left one is explored first
                if e > b + 1:
                    stack.append((b + 1, e, depth + 1))
                stack.append((s, b, depth + 1))
        finally:
            if pool is not None:
                pool.shutdown()
        return records

    def fixed_path(self, tau: float) -> ThresholdPath:
        """Records of the splits a fixed-threshold run accepts"""
        path = ThresholdPath(tuple(self._recurse(tau)))
        _log.info("fixed tau=%.6g accepted %d split(s)", tau, len(path))
        return path

    def detect(self, tau: float) -> ChangePointSet:
        """Fixed-threshold run; reports change points b + 1"""
        return ChangePointSet.from_splits(r.b for r in self.fixed_path(tau).records)

    def detect_splits(self, tau: float) -> Tuple[int, ...]:
        return tuple(sorted(r.b for r in self._recurse(tau)))

    def path(self) -> ThresholdPath:
        """Exhaustive run recording every admissible split"""
        path = ThresholdPath(tuple(self._recurse(None)))
        _log.info("threshold path holds %d split(s), %d distinct level(s)", len(path), len(path.taus))
        return path

    def exact_tau_sets(self, path: ThresholdPath) -> List[frozenset]:
        """Re-run the fixed-threshold recursion just below each recorded level"""
        sets = []
        for tau in path.taus:
            sets.append(frozenset(self.detect_splits(float(np.nextafter(tau, -np.inf)))))
        return sets


def mnp_detect(sample: Sample, cfg: SegmenterConfig) -> ChangePointSet:
    """Fixed-threshold detection; cfg.tau must be set"""
    if cfg.tau is None:
        raise ConfigError("mnp_detect needs a fixed threshold tau")
    return MNPSegmenter(sample, cfg).detect(cfg.tau)


def detection_path(sample: Sample, cfg: SegmenterConfig) -> ThresholdPath:
    return MNPSegmenter(sample, cfg).path()


def path_discrepancy(path: ThresholdPath, exact_sets: Sequence[frozenset]) -> float:
    """Share of levels where the recorded nested set differs from a fresh fixed-tau run"""
    nested = path.nested_sets()
    if not nested:
        return 0.0
    differing = 0
    for level, (from_path, exact) in enumerate(zip(nested, exact_sets), start=1):
        if from_path != exact:
            differing += 1
            _log.info("level %d: path set %s differs from exact-tau set %s",
                      level, sorted(from_path), sorted(exact))
    return differing / len(nested)
