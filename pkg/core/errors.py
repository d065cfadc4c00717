# errors.py
# Exception hierarchy shared by every layer

from typing import Optional


class KdeChangePointError(Exception):
    """Base class for all errors raised by this package"""


# ========================================
# Input validation
# ========================================

class EmptyInput(KdeChangePointError, ValueError):
    """Sample has no rows or no columns"""


class NonFiniteEntry(KdeChangePointError, ValueError):
    """Sample contains NaN or Inf; row and col are 1-based"""

    def __init__(self, row: int, col: int):
        self.row = row
        self.col = col
        super().__init__(f"non-finite entry at row {row}, column {col}")


class DimensionMismatch(KdeChangePointError, ValueError):
    """Vector length does not match the sample dimension"""


class BadDimension(KdeChangePointError, ValueError):
    """Scenario generator called with an unsupported dimension p"""


class BadLength(KdeChangePointError, ValueError):
    """Scenario generator called with an unsupported length T"""


class ConfigError(KdeChangePointError, ValueError):
    """Configuration value outside its admissible range"""


class UsageError(KdeChangePointError, ValueError):
    """Command-line arguments are inconsistent"""


# ========================================
# Kernel / CUSUM
# ========================================

class EmptySegment(KdeChangePointError, ValueError):
    """Density requested over a segment with no observations"""


class CapacityExceeded(KdeChangePointError, MemoryError):
    """Dense Gram matrix would exceed the configured memory budget"""

    def __init__(self, required_bytes: int, budget_bytes: int):
        self.required_bytes = required_bytes
        self.budget_bytes = budget_bytes
        super().__init__(
            f"dense Gram needs {required_bytes} bytes, budget is {budget_bytes}"
        )


class IndexOutOfRange(KdeChangePointError, IndexError):
    """Triplet (s, t, e) or data-point index outside the sample"""


class IntervalTooShort(KdeChangePointError, ValueError):
    """Interval cannot host a boundary-trimmed scan"""


# ========================================
# Segmentation / selection / metrics
# ========================================

class Unsatisfiable(KdeChangePointError, ValueError):
    """Interval length constraints admit no interval"""


class EmptySample(KdeChangePointError, ValueError):
    """Two-sample statistic called with an empty side"""


class InvalidPValue(KdeChangePointError, ValueError):
    """p-value outside [0, 1] or NaN"""

    def __init__(self, value: float, position: Optional[int] = None):
        self.value = value
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"invalid p-value {value!r}{where}")


class DegenerateSplit(KdeChangePointError, ValueError):
    """Candidate split leaves one side without observations"""


class EmptyList(KdeChangePointError, ValueError):
    """Aggregation over no results"""
