# data_io.py
# CSV ingestion of samples and JSON documents with extended-real numbers

import json
import logging
import math
from pathlib import Path
from typing import Any, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from core.errors import EmptyInput, NonFiniteEntry, UsageError
from core.models import Sample, validate_sample

_log: logging.Logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except (TypeError, ValueError):
        return False
    return True


def _parse_cell(cell: str) -> float:
    """Correctly rounded float of one cell; NaN when the cell is not a number"""
    try:
        return float(cell)
    except ValueError:
        return math.nan


def minmax_scale(data: np.ndarray) -> np.ndarray:
    """Rescale every column to [0, 1]; constant columns become 0"""
    data = np.asarray(data, dtype=np.float64)
    low = data.min(axis=0)
    span = data.max(axis=0) - low
    scaled = np.zeros_like(data)
    varying = span > 0
    scaled[:, varying] = (data[:, varying] - low[varying]) / span[varying]
    return scaled


def _detect_header(first: List[str], index_column: Optional[str]) -> bool:
    """A first row with any non-numeric cell outside the label column is a header"""
    if index_column is not None and not index_column.isdigit():
        if index_column in [c.strip() for c in first]:
            return True
    skip = int(index_column) if index_column is not None and index_column.isdigit() else None
    cells = [c for k, c in enumerate(first) if k != skip]
    return not all(_is_number(c) for c in cells)


def _resolve_index_column(frame: pd.DataFrame, index_column: str, has_header: bool):
    if index_column in frame.columns:
        return index_column
    if index_column.isdigit() and int(index_column) < frame.shape[1]:
        return frame.columns[int(index_column)]
    where = "header" if has_header else "column positions"
    raise UsageError(f"index column {index_column!r} not found among the {where}")


def read_sample_csv(path: PathLike, index_column: Optional[str] = None,
                    scale: Optional[str] = None) -> Tuple[Sample, Optional[List[str]]]:
    """Load one row per time point; a non-numeric first row is taken as a header.

    Returns the validated sample and, when ``index_column`` is given, the
    labels of that column in row order.
    """
    try:
        raw = pd.read_csv(path, header=None, dtype=str, keep_default_na=False,
                          skip_blank_lines=True, encoding="utf-8")
    except pd.errors.EmptyDataError:
        raise EmptyInput(f"{path} holds no rows") from None
    if raw.empty:
        raise EmptyInput(f"{path} holds no rows")

    has_header = _detect_header(raw.iloc[0].tolist(), index_column)
    if has_header:
        first = raw.iloc[0].tolist()
        raw.columns = [str(c).strip() for c in first]
        raw = raw.iloc[1:].reset_index(drop=True)
        if raw.empty:
            raise EmptyInput(f"{path} holds a header but no data rows")

    labels = None
    if index_column is not None:
        column = _resolve_index_column(raw, index_column, has_header)
        labels = [str(v) for v in raw[column].tolist()]
        raw = raw.drop(columns=[column])
        if raw.shape[1] == 0:
            raise EmptyInput(f"{path} has no numeric columns besides the index column")

    values = raw.apply(lambda col: col.str.strip().map(_parse_cell))
    data = values.to_numpy(dtype=np.float64)
    bad = np.argwhere(~np.isfinite(data))
    if bad.size:
        row, col = bad[0]
        raise NonFiniteEntry(int(row) + 1, int(col) + 1)

    if scale == "minmax":
        data = minmax_scale(data)
    elif scale not in (None, "none"):
        raise UsageError(f"unknown scaling {scale!r}; expected 'minmax' or 'none'")

    sample = validate_sample(data)
    _log.info("read %s: T=%d p=%d header=%s", path, sample.T, sample.p, has_header)
    return sample, labels


def write_sample_csv(path: PathLike, sample: Sample) -> None:
    """Headerless comma-separated rows, floats written in round-trip form"""
    pd.DataFrame(sample.data).to_csv(path, header=False, index=False)


# ========================================
# JSON with +inf / -inf
# ========================================

def encode_extended(value: Any) -> Any:
    """Recursively replace infinite floats with the strings 'inf' / '-inf'"""
    if isinstance(value, dict):
        return {k: encode_extended(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode_extended(v) for v in value]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    return value


def decode_extended(value: Any) -> Any:
    """Turn 'inf' / '-inf' back into floats"""
    if isinstance(value, str) and value in ("inf", "-inf"):
        return float(value)
    return value


def dumps(payload: Any) -> str:
    return json.dumps(encode_extended(payload), indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(path: Optional[PathLike], payload: Any) -> str:
    """Write a JSON document; a path of None or '-' only returns the text"""
    text = dumps(payload)
    if path is not None and str(path) != "-":
        Path(path).write_text(text, encoding="utf-8")
    return text


def read_json(path: PathLike) -> Any:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


BENCH_COLUMNS = ["scenario", "T", "p", "reps", "mean_count_error", "median_d_est_given_true",
                 "median_d_true_given_est", "mean_wall_time", "discrepancy_rate"]


def bench_frame(rows) -> pd.DataFrame:
    """Benchmark rows as a table; infinite medians appear as 'inf' / '-inf'"""
    frame = pd.DataFrame([encode_extended(row.to_dict()) for row in rows], columns=BENCH_COLUMNS)
    if frame["discrepancy_rate"].isna().all():
        frame = frame.drop(columns=["discrepancy_rate"])
    return frame


def write_bench_csv(path: Optional[PathLike], rows) -> str:
    """Write the benchmark table; a path of None or '-' only returns the text"""
    text = bench_frame(rows).to_csv(index=False)
    if path is not None and str(path) != "-":
        Path(path).write_text(text, encoding="utf-8")
    return text
