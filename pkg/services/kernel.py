# kernel.py
# Kernel functions, segment kernel density estimates and the precomputed Gram
"""
The Gram structure stores, for every data point X(i), the running sums

    prefix[i, t] = sum_{j=1..t} h^{-p} k((X(i) - X(j)) / h),   prefix[i, 0] = 0,

so the density of any segment {s+1, ..., e} at X(i) is a difference of two
entries divided by e - s. Building it costs O(T^2 p) time and O(T^2) memory.
When the dense matrix would exceed the memory budget, ``StreamingGram`` offers
the same ``window`` contract by evaluating kernel blocks on demand.
"""

import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Tuple, Union

import numpy as np
from scipy.spatial.distance import cdist

from core import config
from core.errors import (
    CapacityExceeded, ConfigError, DimensionMismatch, EmptySegment, IndexOutOfRange,
)
from core.models import Interval, KernelFamily, KernelSpec, Sample

_log: logging.Logger = logging.getLogger(__name__)

# Row chunk handed to one worker while building the Gram
_ROW_CHUNK = 256
# Inner length of the blocked prefix sum
CUMSUM_BLOCK = 64

_LOG_MAX = math.log(sys.float_info.max)
_LOG_TINY = math.log(sys.float_info.min)


def unit_ball_volume(p: int) -> float:
    """Volume of the unit ball in R^p, pi^{p/2} / Gamma(p/2 + 1)"""
    if p < 1:
        raise ValueError(f"dimension must be >= 1, got {p}")
    # V_p = V_{p-2} * 2 pi / p keeps the small-p values exact
    volume = 1.0 if p % 2 == 0 else 2.0
    for d in range(2 if p % 2 == 0 else 3, p + 1, 2):
        volume *= 2.0 * math.pi / d
    return volume


def bandwidth_scale(h: float, p: int) -> float:
    """h^{-p}, refused when it leaves the normal float range"""
    if not h > 0:
        raise ConfigError(f"bandwidth must be positive, got {h}")
    log_scale = -p * math.log(h)
    if not _LOG_TINY < log_scale < _LOG_MAX:
        raise ConfigError(f"h^-p is not representable for h={h}, p={p}")
    return h ** (-p)


def peak_height(spec: KernelSpec, h: float) -> float:
    """Largest value of h^{-p} k(u / h); every family peaks at u = 0"""
    return bandwidth_scale(h, spec.p) * float(_radial(spec, np.zeros(1))[0])


def _radial(spec: KernelSpec, sq_norm: np.ndarray) -> np.ndarray:
    """Kernel value as a function of ||u||^2"""
    p = spec.p
    if spec.family is KernelFamily.GAUSSIAN:
        return (2.0 * math.pi) ** (-p / 2.0) * np.exp(-0.5 * sq_norm)
    inside = sq_norm <= 1.0
    if spec.family is KernelFamily.EPANECHNIKOV:
        height = (p + 2.0) / (2.0 * unit_ball_volume(p))
        return np.where(inside, height * (1.0 - sq_norm), 0.0)
    return np.where(inside, 1.0 / unit_ball_volume(p), 0.0)


def eval_kernel(spec: KernelSpec, u) -> Union[float, np.ndarray]:
    """k(u) for one p-vector, or row-wise for an (n, p) array"""
    u = np.asarray(u, dtype=np.float64)
    if u.ndim == 0 or u.shape[-1] != spec.p:
        raise DimensionMismatch(f"expected vectors of length {spec.p}, got shape {u.shape}")
    values = _radial(spec, np.sum(u * u, axis=-1))
    return float(values) if u.ndim == 1 else values


def _as_bounds(iv: Union[Interval, Tuple[int, int]]) -> Tuple[int, int]:
    if isinstance(iv, Interval):
        return iv.s, iv.e
    s, e = int(iv[0]), int(iv[1])
    if e == s:
        raise EmptySegment(f"segment ({s}, {e}) holds no observations")
    return s, e


def kde_evaluate(sample: Sample, iv, h: float, x, spec: KernelSpec) -> float:
    """Segment density (h^{-p} / (e - s)) * sum_{i=s+1..e} k((x - X(i)) / h)"""
    s, e = _as_bounds(iv)
    if not 0 <= s < e <= sample.T:
        raise IndexOutOfRange(f"segment ({s}, {e}) outside 1..{sample.T}")
    if not h > 0:
        raise ValueError(f"bandwidth must be positive, got {h}")
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (sample.p,):
        raise DimensionMismatch(f"expected a point of length {sample.p}, got shape {x.shape}")

    u = (x - sample.data[s:e]) / h
    values = eval_kernel(spec, u)
    return float(bandwidth_scale(h, spec.p) * np.sum(values) / (e - s))


# ========================================
# Gram structures
# ========================================

def _blocked_cumsum(values: np.ndarray) -> np.ndarray:
    """Row-wise prefix sums with a leading zero column.

    Sums run inside blocks of CUMSUM_BLOCK entries and block totals are
    chained afterwards, so no addition chain is longer than
    CUMSUM_BLOCK + n / CUMSUM_BLOCK. Rows stay nondecreasing for
    nonnegative input.
    """
    n_rows, n = values.shape
    out = np.zeros((n_rows, n + 1))
    if n == 0:
        return out
    n_blocks = -(-n // CUMSUM_BLOCK)
    padded = np.zeros((n_rows, n_blocks * CUMSUM_BLOCK))
    padded[:, :n] = values
    inner = np.cumsum(padded.reshape(n_rows, n_blocks, CUMSUM_BLOCK), axis=2)
    offsets = np.zeros((n_rows, n_blocks))
    if n_blocks > 1:
        offsets[:, 1:] = np.cumsum(inner[:, :-1, -1], axis=1)
    out[:, 1:] = (inner + offsets[:, :, None]).reshape(n_rows, -1)[:, :n]
    return out


def _kernel_block(rows: np.ndarray, cols: np.ndarray,
                  h: float, spec: KernelSpec) -> np.ndarray:
    """h^{-p} k((rows[a] - cols[b]) / h) for all pairs"""
    sq = cdist(rows, cols, metric="sqeuclidean") / (h * h)
    return bandwidth_scale(h, spec.p) * _radial(spec, sq)


class KernelGram:
    """Dense T x (T + 1) prefix sums of scaled kernel evaluations"""

    dense = True

    def __init__(self, sample: Sample, h: float, spec: KernelSpec, prefix: np.ndarray):
        self.sample = sample
        self.h = h
        self.spec = spec
        self.prefix = prefix
        self.prefix.setflags(write=False)
        self.peak = peak_height(spec, h)

    @property
    def T(self) -> int:
        return self.sample.T

    @property
    def p(self) -> int:
        return self.sample.p

    def window(self, s: int, e: int) -> np.ndarray:
        """W[i, k] = sum_{j=s+1..s+k} h^{-p} k((X(i+1) - X(j)) / h), k = 0..e-s"""
        return self.prefix[:, s:e + 1] - self.prefix[:, s:s + 1]

    def density(self, i: int, s: int, e: int) -> float:
        """Segment KDE over {s+1..e} evaluated at X(i), i 1-based"""
        return float((self.prefix[i - 1, e] - self.prefix[i - 1, s]) / (e - s))


class StreamingGram:
    """Same window contract as KernelGram, kernel blocks computed on demand"""

    dense = False

    def __init__(self, sample: Sample, h: float, spec: KernelSpec):
        self.sample = sample
        self.h = h
        self.spec = spec
        self.peak = peak_height(spec, h)

    @property
    def T(self) -> int:
        return self.sample.T

    @property
    def p(self) -> int:
        return self.sample.p

    def window(self, s: int, e: int) -> np.ndarray:
        data = self.sample.data
        block = _kernel_block(data, data[s:e], self.h, self.spec)
        return _blocked_cumsum(block)

    def density(self, i: int, s: int, e: int) -> float:
        data = self.sample.data
        row = _kernel_block(data[i - 1:i], data[s:e], self.h, self.spec)
        return float(np.sum(row) / (e - s))


def gram_bytes(T: int) -> int:
    return T * (T + 1) * np.dtype(np.float64).itemsize


def build_gram(sample: Sample, h: float, spec: KernelSpec,
               budget_bytes: int = config.GRAM_BUDGET_BYTES, threads: int = 1) -> KernelGram:
    """Precompute the dense prefix-sum Gram; rows are built in parallel chunks"""
    if not h > 0:
        raise ValueError(f"bandwidth must be positive, got {h}")
    if spec.p != sample.p:
        raise DimensionMismatch(f"kernel dimension {spec.p} != sample dimension {sample.p}")
    required = gram_bytes(sample.T)
    if required > budget_bytes:
        raise CapacityExceeded(required, budget_bytes)

    data = sample.data
    T = sample.T
    prefix = np.empty((T, T + 1))

    def fill(start: int) -> None:
        stop = min(start + _ROW_CHUNK, T)
        block = _kernel_block(data[start:stop], data, h, spec)
        prefix[start:stop] = _blocked_cumsum(block)

    starts = range(0, T, _ROW_CHUNK)
    if threads > 1 and T > _ROW_CHUNK:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill, starts))
    else:
        for start in starts:
            fill(start)

    _log.info("built dense Gram: T=%d p=%d h=%.6g bytes=%d", T, sample.p, h, required)
    return KernelGram(sample, h, spec, prefix)


def build_gram_or_stream(sample: Sample, h: float, spec: KernelSpec,
                         budget_bytes: int = config.GRAM_BUDGET_BYTES, threads: int = 1):
    """Dense Gram when it fits the budget, streaming windows otherwise"""
    try:
        return build_gram(sample, h, spec, budget_bytes=budget_bytes, threads=threads)
    except CapacityExceeded as exc:
        _log.warning("%s; switching to on-the-fly kernel windows", exc)
        return StreamingGram(sample, h, spec)
