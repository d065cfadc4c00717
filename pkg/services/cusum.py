# cusum.py
# Kernel-density CUSUM statistic and its maximisation over data points

import math
from typing import Union

import numpy as np

from core.errors import IndexOutOfRange, IntervalTooShort
from core.models import CusumProfile, Interval
from services.kernel import CUMSUM_BLOCK, KernelGram, StreamingGram

Gram = Union[KernelGram, StreamingGram]

_EPS = float(np.finfo(np.float64).eps)


def _check_triplet(gram: Gram, s: int, t: int, e: int) -> None:
    if not 0 <= s < t < e <= gram.T:
        raise IndexOutOfRange(f"need 0 <= s < t < e <= {gram.T}, got ({s}, {t}, {e})")


def _scale(s: int, t: int, e: int) -> float:
    return math.sqrt((t - s) * (e - t) / (e - s))


def _rounding_floor(gram: Gram, left_len, right_len):
    """Bound on the rounding left in a density difference computed from prefix sums.

    Prefix entries stay below T * peak and each comes out of an addition chain
    no longer than CUMSUM_BLOCK + T / CUMSUM_BLOCK, so differences of equal
    densities (constant data, repeated rows) never exceed this floor.
    """
    chain = CUMSUM_BLOCK + gram.T // CUMSUM_BLOCK + 2
    return 8.0 * _EPS * chain * gram.T * gram.peak * (1.0 / left_len + 1.0 / right_len)


def cusum_at(gram: Gram, s: int, t: int, e: int, i: int) -> float:
    """sqrt((t-s)(e-t)/(e-s)) * (f_{s+1,t}(X(i)) - f_{t+1,e}(X(i))), i 1-based"""
    _check_triplet(gram, s, t, e)
    if not 1 <= i <= gram.T:
        raise IndexOutOfRange(f"data-point index {i} outside 1..{gram.T}")
    diff = gram.density(i, s, t) - gram.density(i, t, e)
    if abs(diff) <= _rounding_floor(gram, t - s, e - t):
        return 0.0
    return _scale(s, t, e) * diff


def _statistics(gram: Gram, window: np.ndarray, s: int, ts: np.ndarray, e: int) -> np.ndarray:
    """max_i |CUSUM| for every split in ts, from one window of prefix sums"""
    offsets = ts - s
    left_sums = window[:, offsets]
    right_sums = window[:, e - s:e - s + 1] - left_sums
    left_len = offsets.astype(np.float64)
    right_len = (e - ts).astype(np.float64)
    diff = left_sums / left_len - right_sums / right_len
    diff[np.abs(diff) <= _rounding_floor(gram, left_len, right_len)] = 0.0
    scale = np.sqrt(left_len * right_len / (e - s))
    return np.max(np.abs(diff), axis=0) * scale


def cusum_stat(gram: Gram, s: int, t: int, e: int) -> float:
    """Y^{s,e}_t: the maximum of |CUSUM| over all T data points"""
    _check_triplet(gram, s, t, e)
    window = gram.window(s, e)
    return float(_statistics(gram, window, s, np.array([t]), e)[0])


def cusum_profile(gram: Gram, iv: Interval, buffer: int) -> CusumProfile:
    """Scan t in [s + buffer, e - buffer]; ties go to the smallest t"""
    s, e = iv.s, iv.e
    if buffer < 1:
        raise ValueError(f"buffer must be >= 1, got {buffer}")
    if e > gram.T:
        raise IndexOutOfRange(f"interval ({s}, {e}) exceeds T={gram.T}")
    if e - s <= 2 * buffer + 1:
        raise IntervalTooShort(f"interval ({s}, {e}) needs length > {2 * buffer + 1}")

    ts = np.arange(s + buffer, e - buffer + 1)
    values = _statistics(gram, gram.window(s, e), s, ts, e)
    best = int(np.argmax(values))
    return CusumProfile(interval=iv, ts=ts, values=values,
                        argmax_t=int(ts[best]), max_value=float(values[best]))


def cusum_weights(s: int, t: int, e: int) -> np.ndarray:
    """Weights w_{s+1..e} with sum w = 0 and sum w^2 = 1"""
    if not 0 <= s < t < e:
        raise IndexOutOfRange(f"need 0 <= s < t < e, got ({s}, {t}, {e})")
    n = e - s
    w = np.empty(n)
    w[:t - s] = math.sqrt((e - t) / (n * (t - s)))
    w[t - s:] = -math.sqrt((t - s) / (n * (e - t)))
    return w
