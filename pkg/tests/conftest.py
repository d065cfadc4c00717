"""Shared fixtures for the test suite."""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from core.database import DatabaseConnection  # noqa: E402
from core.models import KernelFamily, KernelSpec, validate_sample  # noqa: E402


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture()
def small_sample(rng):
    """Random 30 x 3 sample."""
    return validate_sample(rng.standard_normal((30, 3)))


@pytest.fixture()
def shifted_sample(rng):
    """60 x 2 sample whose mean jumps by 4 after row 30."""
    data = rng.standard_normal((60, 2))
    data[30:] += 4.0
    return validate_sample(data)


@pytest.fixture()
def gaussian3() -> KernelSpec:
    return KernelSpec(KernelFamily.GAUSSIAN, 3)


@pytest.fixture()
def run_store(tmp_path):
    """Point the run store at a fresh file for one test."""
    previous = DatabaseConnection.db_path
    DatabaseConnection.use(tmp_path / "runs.db")
    yield DatabaseConnection.db_path
    DatabaseConnection.use(previous)
