# database.py
# Run store initialization and connection management
import logging
import sqlite3
from pathlib import Path
from typing import Union

from core import config

_log: logging.Logger = logging.getLogger(__name__)

# SQL schema definitions
CREATE_RUNS_TABLE = """
CREATE TABLE IF NOT EXISTS runs (
    run_id INTEGER PRIMARY KEY AUTOINCREMENT,
    command TEXT NOT NULL,
    manifest TEXT NOT NULL,
    created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
);
"""

# Distances are TEXT so +inf / -inf survive the round trip
CREATE_REPLICATES_TABLE = """
CREATE TABLE IF NOT EXISTS replicates (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    run_id INTEGER NOT NULL,
    scenario INTEGER NOT NULL,
    T INTEGER NOT NULL,
    p INTEGER NOT NULL,
    seed INTEGER NOT NULL,
    count_error INTEGER NOT NULL,
    d_est_given_true TEXT NOT NULL,
    d_true_given_est TEXT NOT NULL,
    wall_time REAL,
    change_points TEXT NOT NULL DEFAULT '[]',
    FOREIGN KEY (run_id) REFERENCES runs(run_id) ON DELETE CASCADE
);
"""

CREATE_REPLICATES_INDEX = """
CREATE INDEX IF NOT EXISTS idx_replicates_run ON replicates(run_id);
"""


class DatabaseConnection:
    """Connection manager for the benchmark run store"""

    db_path: Path = config.RUNS_DB_PATH

    @classmethod
    def use(cls, path: Union[str, Path]) -> None:
        """Point every later connection at another database file"""
        cls.db_path = Path(path)

    @classmethod
    def get_connection(cls) -> sqlite3.Connection:
        """Get a fresh database connection for each operation"""
        conn = sqlite3.connect(str(cls.db_path), timeout=30.0)
        conn.row_factory = sqlite3.Row
        conn.execute("PRAGMA foreign_keys = ON")
        return conn


def init_database() -> None:
    """Create the schema; safe to call on an existing store"""
    conn = DatabaseConnection.get_connection()
    try:
        cursor = conn.cursor()
        cursor.execute(CREATE_RUNS_TABLE)
        cursor.execute(CREATE_REPLICATES_TABLE)
        cursor.execute(CREATE_REPLICATES_INDEX)
        conn.commit()
    finally:
        conn.close()
    _log.info("run store ready at %s", DatabaseConnection.db_path)
