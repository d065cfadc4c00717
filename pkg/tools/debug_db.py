#!/usr/bin/env python3
"""
Run-store debugging utility
Run: python3 tools/debug_db.py [--db PATH] [command]
"""
import sqlite3
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from core.database import DatabaseConnection  # noqa: E402
from services.db_operations import get_recent_runs, get_replicates, get_run  # noqa: E402


def print_section(title):
    print(f"\n{'='*60}")
    print(f"  {title}")
    print(f"{'='*60}")


def view_runs(limit=20):
    """List recent runs with one line per replicate"""
    runs = get_recent_runs(limit)
    if not runs:
        print("  No runs recorded yet")
        return
    for run in runs:
        view_run(run.run_id)


def view_run(run_id):
    run = get_run(run_id)
    if run is None:
        print(f"  No run with id {run_id}")
        return
    print_section(f"RUN #{run.run_id} ({run.command}) {run.created_at}")
    cfg = run.manifest.get("config", {})
    for key in sorted(cfg):
        print(f"    {key}: {cfg[key]}")
    print()
    for rep in get_replicates(run_id):
        print(f"  scenario {rep.scenario} T={rep.T} p={rep.p} seed={rep.seed}: "
              f"|K-K^|={rep.count_error} d(C^|C)={rep.d_est_given_true} "
              f"d(C|C^)={rep.d_true_given_est} points={rep.change_points} "
              f"({rep.wall_time:.2f}s)")


def run_custom_query(query):
    """Run a read-only SQL query against the store"""
    conn = DatabaseConnection.get_connection()
    try:
        rows = conn.execute(query).fetchall()
        if rows:
            print("  " + " | ".join(rows[0].keys()))
            print("  " + "-" * 60)
            for row in rows:
                print("  " + " | ".join(str(v) for v in row))
        else:
            print("  No results")
    except sqlite3.Error as e:
        print(f"  ✗ Error: {e}")
    finally:
        conn.close()


def print_help():
    print("""
Usage: python3 tools/debug_db.py [--db PATH] [command]

Commands:
  (none)       List recent runs and their replicates (default)
  view         Same as above
  run ID       Show one run
  query SQL    Run a custom SQL query

Examples:
  python3 tools/debug_db.py --db bench.db
  python3 tools/debug_db.py run 3
  python3 tools/debug_db.py query "SELECT scenario, AVG(count_error) FROM replicates GROUP BY scenario"
""")


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    if len(argv) >= 2 and argv[0] == "--db":
        DatabaseConnection.use(argv[1])
        argv = argv[2:]

    if not DatabaseConnection.db_path.exists():
        print(f"✗ Run store not found at: {DatabaseConnection.db_path}")
        print("  Run `bench --db PATH` first to create it.")
        return 1

    print(f"Run store: {DatabaseConnection.db_path}")
    command = argv[0] if argv else "view"
    if command == "view":
        view_runs()
    elif command == "run" and len(argv) > 1:
        view_run(int(argv[1]))
    elif command == "query" and len(argv) > 1:
        run_custom_query(" ".join(argv[1:]))
    else:
        print(f"Unknown command: {' '.join(argv)}")
        print_help()
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
