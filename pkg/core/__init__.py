# core/__init__.py
# Re-export the foundation layer

__version__ = "0.1.0"

from .models import (
    Sample, validate_sample, Interval, ChangePointSet, KernelFamily, KernelSpec,
    CusumProfile, DetectionRecord, ThresholdPath, SegmenterConfig, SelectorConfig,
    SelectionTest, SelectionResult, DetectionOutcome, ScenarioTruth, EvalResult,
    EvalSummary, RunManifest, ReplicateRecord, RunRecord, BenchRow,
)
from .config import validate_config
from .database import init_database, DatabaseConnection
from . import errors

__all__ = [
    '__version__',
    # Models
    'Sample', 'validate_sample', 'Interval', 'ChangePointSet', 'KernelFamily', 'KernelSpec',
    'CusumProfile', 'DetectionRecord', 'ThresholdPath', 'SegmenterConfig', 'SelectorConfig',
    'SelectionTest', 'SelectionResult', 'DetectionOutcome', 'ScenarioTruth', 'EvalResult',
    'EvalSummary', 'RunManifest', 'ReplicateRecord', 'RunRecord', 'BenchRow',
    # Config
    'validate_config',
    # Database
    'init_database', 'DatabaseConnection',
    'errors',
]
