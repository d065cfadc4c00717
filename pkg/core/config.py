# config.py
# Configuration and environment variable loading

import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file (for local development)
load_dotenv()


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    return int(value) if value not in (None, "") else default


def _env_float(name: str, default: float) -> float:
    value = os.getenv(name)
    return float(value) if value not in (None, "") else default


# Segmentation defaults (M random intervals, Gaussian kernel)
DEFAULT_M = _env_int("KDECP_DEFAULT_M", 50)
DEFAULT_KERNEL = os.getenv("KDECP_DEFAULT_KERNEL", "gaussian").lower()

# Automatic selection defaults (N random directions, FDR cutoff)
DEFAULT_N = _env_int("KDECP_DEFAULT_N", 200)
DEFAULT_ALPHA = _env_float("KDECP_DEFAULT_ALPHA", 0.0005)

# Dense Gram matrices above this size fall back to streaming windows
GRAM_BUDGET_BYTES = _env_int("KDECP_GRAM_BUDGET_BYTES", 2 * 1024 ** 3)

# Worker threads for the interval-parallel stage
DEFAULT_THREADS = _env_int("KDECP_THREADS", os.cpu_count() or 1)

# Benchmark run store
RUNS_DB_PATH = Path(os.getenv("KDECP_RUNS_DB", str(Path.cwd() / "kdecp_runs.db")))

LOG_LEVEL = os.getenv("KDECP_LOG_LEVEL", "WARNING").upper()

KERNEL_FAMILIES = ("gaussian", "epanechnikov", "uniform")

# JSON schema version written into every output document
SCHEMA_VERSION = 1


def validate_config():
    """Check that configured defaults are inside their admissible ranges"""
    if DEFAULT_M < 1:
        return False, f"KDECP_DEFAULT_M must be >= 1, got {DEFAULT_M}"
    if DEFAULT_N < 1:
        return False, f"KDECP_DEFAULT_N must be >= 1, got {DEFAULT_N}"
    if not 0.0 < DEFAULT_ALPHA < 1.0:
        return False, f"KDECP_DEFAULT_ALPHA must lie in (0, 1), got {DEFAULT_ALPHA}"
    if DEFAULT_KERNEL not in KERNEL_FAMILIES:
        return False, f"KDECP_DEFAULT_KERNEL must be one of {KERNEL_FAMILIES}"
    if GRAM_BUDGET_BYTES <= 0:
        return False, "KDECP_GRAM_BUDGET_BYTES must be positive"
    if DEFAULT_THREADS < 1:
        return False, f"KDECP_THREADS must be >= 1, got {DEFAULT_THREADS}"
    return True, "Configuration valid"
