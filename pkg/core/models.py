# models.py
# Data models for samples, intervals, detection paths and evaluation results
from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

import numpy as np

from core.errors import EmptyInput, NonFiniteEntry, ConfigError, IndexOutOfRange
from core import config


# ========================================
# Samples and intervals
# ========================================

@dataclass(frozen=True, eq=False)
class Sample:
    """T x p observation matrix; row t (1-based) is X(t)"""
    data: np.ndarray

    @property
    def T(self) -> int:
        return self.data.shape[0]

    @property
    def p(self) -> int:
        return self.data.shape[1]

    def row(self, t: int) -> np.ndarray:
        """Observation X(t) for 1-based t"""
        return self.data[t - 1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Sample):
            return NotImplemented
        return self.data.shape == other.data.shape and np.array_equal(self.data, other.data)

    def __hash__(self) -> int:
        return hash((self.data.shape, self.data.tobytes()))


def validate_sample(raw) -> Sample:
    """Check a rectangular matrix and freeze it into a Sample"""
    data = np.array(raw, dtype=np.float64, order="C", copy=True)
    if data.ndim == 1 and data.size == 0:
        raise EmptyInput("sample has no rows")
    if data.ndim != 2:
        raise EmptyInput(f"sample must be a 2-D matrix, got {data.ndim} dimension(s)")
    if data.shape[0] == 0 or data.shape[1] == 0:
        raise EmptyInput(f"sample has shape {data.shape}")

    bad = ~np.isfinite(data)
    if bad.any():
        row, col = np.argwhere(bad)[0]
        raise NonFiniteEntry(int(row) + 1, int(col) + 1)

    data.setflags(write=False)
    return Sample(data=data)


@dataclass(frozen=True)
class Interval:
    """Time segment {s+1, ..., e}"""
    s: int
    e: int

    def __post_init__(self):
        if self.s < 0 or self.e <= self.s:
            raise IndexOutOfRange(f"invalid interval ({self.s}, {self.e})")

    @property
    def length(self) -> int:
        return self.e - self.s

    def intersect(self, other: "Interval") -> Optional["Interval"]:
        s, e = max(self.s, other.s), min(self.e, other.e)
        return Interval(s, e) if e > s else None


@dataclass(frozen=True)
class ChangePointSet:
    """Sorted, deduplicated change point locations"""
    points: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(sorted({int(x) for x in self.points})))

    @classmethod
    def from_splits(cls, splits: Iterable[int]) -> "ChangePointSet":
        """Split b ends the old regime, so the change point is b + 1"""
        return cls(tuple(int(b) + 1 for b in splits))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[int]:
        return iter(self.points)

    def to_list(self) -> List[int]:
        return list(self.points)


# ========================================
# Kernel and CUSUM
# ========================================

class KernelFamily(str, Enum):
    GAUSSIAN = "gaussian"
    EPANECHNIKOV = "epanechnikov"
    UNIFORM_BALL = "uniform"


@dataclass(frozen=True)
class KernelSpec:
    family: KernelFamily
    p: int

    def __post_init__(self):
        object.__setattr__(self, "family", KernelFamily(self.family))
        if self.p < 1:
            raise ConfigError(f"kernel dimension must be >= 1, got {self.p}")


@dataclass(frozen=True, eq=False)
class CusumProfile:
    interval: Interval
    ts: np.ndarray
    values: np.ndarray
    argmax_t: int
    max_value: float

    def as_pairs(self) -> List[Tuple[int, float]]:
        return [(int(t), float(v)) for t, v in zip(self.ts, self.values)]


# ========================================
# Segmentation
# ========================================

@dataclass(frozen=True)
class DetectionRecord:
    b: int
    a: float
    interval: Interval
    depth: int

    def to_dict(self) -> Dict:
        return {"b": self.b, "a": self.a, "s": self.interval.s,
                "e": self.interval.e, "depth": self.depth}


@dataclass(frozen=True)
class ThresholdPath:
    """Every split accepted by an exhaustive run, strongest first"""
    records: Tuple[DetectionRecord, ...] = ()

    def __post_init__(self):
        ordered = tuple(sorted(self.records, key=lambda r: (-r.a, r.b)))
        splits = [r.b for r in ordered]
        if len(splits) != len(set(splits)):
            raise ValueError("threshold path contains duplicate splits")
        object.__setattr__(self, "records", ordered)

    @property
    def taus(self) -> Tuple[float, ...]:
        """Distinct statistic values, descending"""
        return tuple(sorted({r.a for r in self.records}, reverse=True))

    def threshold(self, tau: float) -> Tuple[int, ...]:
        """S(tau) = {b : a > tau}, sorted"""
        return tuple(sorted(r.b for r in self.records if r.a > tau))

    def nested_sets(self) -> List[FrozenSet[int]]:
        """S_1 < S_2 < ... < S_m, S_i holding the splits with the i largest values"""
        sets = []
        for tau in self.taus:
            sets.append(frozenset(r.b for r in self.records if r.a >= tau))
        return sets

    def __len__(self) -> int:
        return len(self.records)


@dataclass(frozen=True)
class SegmenterConfig:
    M: int = config.DEFAULT_M
    h: Optional[float] = None  # None selects the automatic bandwidth
    kernel: KernelFamily = KernelFamily(config.DEFAULT_KERNEL)
    tau: Optional[float] = None
    seed: int = 0
    min_interval_len: Optional[int] = None  # None resolves to 2 * buffer + 2
    max_interval_len: Optional[int] = None
    include_full_interval: bool = True
    threads: int = 1
    gram_budget_bytes: int = config.GRAM_BUDGET_BYTES

    def __post_init__(self):
        object.__setattr__(self, "kernel", KernelFamily(self.kernel))
        if self.M < 1:
            raise ConfigError(f"M must be >= 1, got {self.M}")
        if self.h is not None and not self.h > 0:
            raise ConfigError(f"bandwidth must be positive, got {self.h}")
        if self.tau is not None and np.isnan(self.tau):
            raise ConfigError("threshold tau must be a number, got NaN")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")
        if self.min_interval_len is not None and self.min_interval_len < 1:
            raise ConfigError("min_interval_len must be >= 1")
        if self.max_interval_len is not None and self.max_interval_len < 1:
            raise ConfigError("max_interval_len must be >= 1")


# ========================================
# Selection
# ========================================

@dataclass(frozen=True)
class SelectorConfig:
    N: int = config.DEFAULT_N
    alpha: float = config.DEFAULT_ALPHA
    seed: int = 0
    axis_check: bool = True  # folded KS along the pooled leading axis

    def __post_init__(self):
        if self.N < 1:
            raise ConfigError(f"N must be >= 1, got {self.N}")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")


@dataclass(frozen=True)
class SelectionTest:
    level: int
    eta: int
    left: int
    right: int
    min_adjusted_p: float
    declared: bool


@dataclass(frozen=True)
class SelectionResult:
    change_points: ChangePointSet
    selected_level: int  # 0 when nothing was declared
    tests: Tuple[SelectionTest, ...] = ()


@dataclass(frozen=True)
class DetectionOutcome:
    """Everything one detection run produces"""
    change_points: ChangePointSet
    path: ThresholdPath
    h: float
    buffer: int
    dense_gram: bool
    tau: Optional[float] = None
    selection: Optional[SelectionResult] = None
    discrepancy: Optional[float] = None


# ========================================
# Simulation and evaluation
# ========================================

@dataclass(frozen=True)
class ScenarioTruth:
    scenario_id: int
    T: int
    p: int
    true_points: ChangePointSet
    seed: int

    def to_dict(self) -> Dict:
        return {"scenario": self.scenario_id, "T": self.T, "p": self.p,
                "seed": self.seed, "change_points": self.true_points.to_list()}


@dataclass(frozen=True)
class EvalResult:
    count_error: int
    d_est_given_true: float
    d_true_given_est: float


@dataclass(frozen=True)
class EvalSummary:
    n: int
    mean_count_error: float
    median_d_est_given_true: float
    median_d_true_given_est: float


@dataclass
class RunManifest:
    command: str
    config: Dict
    version: str
    wall_time: float = 0.0
    rng: str = ""

    def to_dict(self) -> Dict:
        return asdict(self)


@dataclass
class ReplicateRecord:
    scenario: int
    T: int
    p: int
    seed: int
    count_error: int
    d_est_given_true: float
    d_true_given_est: float
    wall_time: float
    change_points: List[int] = field(default_factory=list)
    id: Optional[int] = None
    run_id: Optional[int] = None


@dataclass
class RunRecord:
    command: str
    manifest: Dict
    run_id: Optional[int] = None
    created_at: Optional[str] = None


@dataclass(frozen=True)
class BenchRow:
    """Aggregated replicates of one (scenario, T, p) cell"""
    scenario: int
    T: int
    p: int
    reps: int
    mean_count_error: float
    median_d_est_given_true: float
    median_d_true_given_est: float
    mean_wall_time: float
    discrepancy_rate: Optional[float] = None

    def to_dict(self) -> Dict:
        return asdict(self)
