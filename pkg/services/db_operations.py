# db_operations.py
# CRUD operations for benchmark runs and their replicates
import json
from typing import Dict, List, Optional

from core.database import DatabaseConnection
from core.models import ReplicateRecord, RunRecord
from services.data_io import decode_extended, encode_extended

# ========================================
# Run Operations
# ========================================

def create_run(command: str, manifest: Dict) -> int:
    """Register a new run and return its id"""
    conn = DatabaseConnection.get_connection()
    try:
        cursor = conn.cursor()
        cursor.execute("""
            INSERT INTO runs (command, manifest) VALUES (?, ?)
        """, (command, json.dumps(encode_extended(manifest), sort_keys=True)))
        conn.commit()
        return cursor.lastrowid
    finally:
        conn.close()


def _row_to_run(row) -> RunRecord:
    data = dict(row)
    data["manifest"] = json.loads(data["manifest"])
    return RunRecord(**data)


def get_run(run_id: int) -> Optional[RunRecord]:
    conn = DatabaseConnection.get_connection()
    try:
        row = conn.execute("SELECT * FROM runs WHERE run_id = ?", (run_id,)).fetchone()
    finally:
        conn.close()
    return _row_to_run(row) if row else None


def get_recent_runs(limit: int = 20) -> List[RunRecord]:
    """Most recent runs first"""
    conn = DatabaseConnection.get_connection()
    try:
        rows = conn.execute("""
            SELECT * FROM runs ORDER BY created_at DESC, run_id DESC LIMIT ?
        """, (limit,)).fetchall()
    finally:
        conn.close()
    return [_row_to_run(row) for row in rows]

# ========================================
# Replicate Operations
# ========================================

def _distance_text(value: float) -> str:
    encoded = encode_extended(float(value))
    return encoded if isinstance(encoded, str) else repr(encoded)


def save_replicate(run_id: int, record: ReplicateRecord) -> int:
    """Store one replicate of a run"""
    conn = DatabaseConnection.get_connection()
    try:
        cursor = conn.cursor()
        cursor.execute("""
            INSERT INTO replicates (run_id, scenario, T, p, seed, count_error,
                                    d_est_given_true, d_true_given_est, wall_time, change_points)
            VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?)
        """, (run_id, record.scenario, record.T, record.p, record.seed, record.count_error,
              _distance_text(record.d_est_given_true), _distance_text(record.d_true_given_est),
              record.wall_time, json.dumps(list(record.change_points))))
        conn.commit()
        return cursor.lastrowid
    finally:
        conn.close()


def get_replicates(run_id: int) -> List[ReplicateRecord]:
    """All replicates of a run in insertion order"""
    conn = DatabaseConnection.get_connection()
    try:
        rows = conn.execute("""
            SELECT * FROM replicates WHERE run_id = ? ORDER BY id
        """, (run_id,)).fetchall()
    finally:
        conn.close()

    result = []
    for row in rows:
        data = dict(row)
        data["d_est_given_true"] = float(decode_extended(data["d_est_given_true"]))
        data["d_true_given_est"] = float(decode_extended(data["d_true_given_est"]))
        data["change_points"] = json.loads(data["change_points"])
        result.append(ReplicateRecord(**data))
    return result


def delete_run(run_id: int) -> bool:
    """Delete a run (cascades to its replicates)"""
    conn = DatabaseConnection.get_connection()
    try:
        cursor = conn.execute("DELETE FROM runs WHERE run_id = ?", (run_id,))
        conn.commit()
        return cursor.rowcount > 0
    finally:
        conn.close()
