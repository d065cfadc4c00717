# cli.py
# Command-line entry point: simulate, detect, evaluate, bench
"""
Usage examples:

    python -m app.cli simulate --scenario 1 --T 150 --p 10 --seed 1 --out d.csv --truth t.json
    python -m app.cli detect d.csv --out result.json
    python -m app.cli evaluate result.json t.json
    python -m app.cli bench --scenario 1 3 --T 150 300 --p 10 20 --reps 20 --seed 100

Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure.
Diagnostics go to standard error; documents go to --out or standard output.
"""

import argparse
import logging
import sys
import time
from typing import Dict, List, Optional

import pandas as pd

from core import __version__, config
from core.database import DatabaseConnection, init_database
from core.errors import BadDimension, BadLength, ConfigError, KdeChangePointError, UsageError
from core.models import (
    ChangePointSet, KernelFamily, ReplicateRecord, RunManifest, SegmenterConfig, SelectorConfig,
)
from services import data_io
from services.db_operations import create_run, save_replicate
from services.metrics import evaluate_run
from services.pdf_generator import BenchReportPDFGenerator
from services.pipeline import detect_change_points, run_bench
from services.random_streams import RNG_ALGORITHM
from services.simulator import SCENARIOS, gen_scenario

_log: logging.Logger = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2

_USAGE_ERRORS = (UsageError, ConfigError, BadLength, BadDimension)

# Options a manifest may set on a later detect run
_MANIFEST_KEYS = ("input", "h", "M", "kernel", "seed", "tau", "N", "alpha", "axis_check",
                  "exact_tau", "include_full_interval", "scale", "index_column")


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors with exit code 1"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ========================================
# Argument helpers
# ========================================

def _bandwidth(value: str) -> Optional[float]:
    if value == "auto":
        return None
    try:
        h = float(value)
    except ValueError:
        raise UsageError(f"--h expects 'auto' or a positive number, got {value!r}") from None
    if not h > 0:
        raise UsageError(f"--h must be positive, got {value}")
    return h


def _segmenter_config(args) -> SegmenterConfig:
    return SegmenterConfig(
        M=args.M, h=_bandwidth(args.h), kernel=KernelFamily(args.kernel), tau=args.tau,
        seed=args.seed, include_full_interval=args.include_full_interval, threads=args.threads,
        gram_budget_bytes=config.GRAM_BUDGET_BYTES,
    )


def _selector_config(args) -> SelectorConfig:
    return SelectorConfig(N=args.N, alpha=args.alpha, seed=args.seed, axis_check=args.axis_check)


def _detection_settings(args) -> Dict:
    return {"h": args.h, "M": args.M, "kernel": args.kernel, "seed": args.seed, "tau": args.tau,
            "N": args.N, "alpha": args.alpha, "axis_check": args.axis_check,
            "exact_tau": args.exact_tau, "include_full_interval": args.include_full_interval, "threads": args.threads}


def _manifest(command: str, settings: Dict, started: float) -> RunManifest:
    return RunManifest(command=command, config=settings, version=__version__,
                       wall_time=time.perf_counter() - started, rng=RNG_ALGORITHM)


def _emit(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)


def _apply_manifest(args) -> None:
    """Fill detect options from a manifest or from a result document embedding one"""
    document = data_io.read_json(args.from_manifest)
    manifest = document.get("manifest", document)
    settings = manifest.get("config", {})
    if manifest.get("command") not in (None, "detect"):
        raise UsageError(f"{args.from_manifest} records a {manifest['command']!r} run, not detect")
    for key in _MANIFEST_KEYS:
        if key in settings:
            setattr(args, key, settings[key])
    _log.info("options restored from %s", args.from_manifest)


# ========================================
# Commands
# ========================================

def cmd_simulate(args) -> int:
    sample, truth = gen_scenario(args.scenario, args.T, args.p, args.seed)
    data_io.write_sample_csv(args.out, sample)
    data_io.write_json(args.truth, {"schema": config.SCHEMA_VERSION, **truth.to_dict()})
    _log.info("scenario %d: wrote %s and %s, truth %s",
              args.scenario, args.out, args.truth, truth.true_points.to_list())
    return EXIT_OK


def cmd_detect(args) -> int:
    started = time.perf_counter()
    if args.from_manifest:
        _apply_manifest(args)
    if not args.input:
        raise UsageError("detect needs an input CSV (positional or recorded in --from-manifest)")

    sample, labels = data_io.read_sample_csv(args.input, index_column=args.index_column,
                                             scale=args.scale)
    outcome = detect_change_points(sample, _segmenter_config(args), _selector_config(args),
                                   exact_tau=args.exact_tau)

    settings = {"input": args.input, "scale": args.scale, "index_column": args.index_column,
                "T": sample.T, "p": sample.p, "h_used": outcome.h, "buffer": outcome.buffer,
                "dense_gram": outcome.dense_gram, **_detection_settings(args)}
    document = {
        "schema": config.SCHEMA_VERSION,
        "change_points": outcome.change_points.to_list(),
        "path": [record.to_dict() for record in outcome.path.records],
        "selection": None,
        "manifest": _manifest("detect", settings, started).to_dict(),
    }
    if outcome.selection is not None:
        document["selection"] = {
            "selected_level": outcome.selection.selected_level,
            "tests": [vars(test) for test in outcome.selection.tests],
        }
    if outcome.discrepancy is not None:
        document["path_discrepancy"] = outcome.discrepancy
    if labels is not None:
        document["labels"] = [labels[eta - 1] for eta in outcome.change_points]

    _emit(data_io.write_json(args.out, document), args.out)
    _log.info("detected %d change point(s): %s", len(outcome.change_points),
              outcome.change_points.to_list())
    return EXIT_OK


def cmd_evaluate(args) -> int:
    result = data_io.read_json(args.result)
    truth = data_io.read_json(args.truth)
    try:
        estimated = ChangePointSet(tuple(int(x) for x in result["change_points"]))
        true_points = ChangePointSet(tuple(int(x) for x in truth["change_points"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"result and truth documents need a 'change_points' list ({exc})") from None

    evaluation = evaluate_run(estimated, true_points)
    document = {"schema": config.SCHEMA_VERSION, **vars(evaluation)}
    _emit(data_io.write_json(args.out, document), args.out)
    return EXIT_OK


def cmd_bench(args) -> int:
    started = time.perf_counter()
    settings = {"scenarios": args.scenario, "T": args.T, "p": args.p, "reps": args.reps,
                "seed_base": args.seed, "exact_tau_audit": args.exact_tau_audit,
                **_detection_settings(args)}

    on_replicate = None
    if args.db:
        DatabaseConnection.use(args.db)
        init_database()
        run_id = create_run("bench", RunManifest("bench", settings, __version__,
                                                 rng=RNG_ALGORITHM).to_dict())

        def on_replicate(record: ReplicateRecord) -> None:
            save_replicate(run_id, record)

    rows = run_bench(args.scenario, args.T, args.p, args.reps, args.seed,
                     _segmenter_config(args), _selector_config(args),
                     exact_tau=args.exact_tau, audit=args.exact_tau_audit,
                     on_replicate=on_replicate)

    manifest = _manifest("bench", settings, started).to_dict()
    if args.pdf:
        with open(args.pdf, "wb") as f:
            f.write(BenchReportPDFGenerator().generate_bench_pdf(rows, manifest))
        _log.info("wrote PDF report %s", args.pdf)
    _emit(data_io.write_bench_csv(args.out, rows), args.out)
    return EXIT_OK


# ========================================
# Parser
# ========================================

def _add_detection_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("detection")
    group.add_argument("--h", default="auto", help="bandwidth, 'auto' for 5 (30 log T / T)^(1/p)")
    group.add_argument("--M", type=int, default=config.DEFAULT_M, help="number of random intervals")
    group.add_argument("--seed", type=int, default=0)
    group.add_argument("--kernel", choices=config.KERNEL_FAMILIES, default=config.DEFAULT_KERNEL)
    group.add_argument("--tau", type=float, default=None,
                       help="fixed threshold; omit for automatic selection")
    group.add_argument("--exact-tau", action="store_true",
                       help="select from fresh fixed-threshold reruns at every path level")
    group.add_argument("--include-full-interval", action=argparse.BooleanOptionalAction, default=True,
                       help="add the whole sample to the random intervals")
    group.add_argument("--threads", type=int, default=config.DEFAULT_THREADS)

    group = parser.add_argument_group("selection")
    group.add_argument("--N", type=int, default=config.DEFAULT_N, help="random projection directions")
    group.add_argument("--alpha", type=float, default=config.DEFAULT_ALPHA, help="FDR cutoff")
    group.add_argument("--axis-check", action=argparse.BooleanOptionalAction, default=True,
                       help="also KS-test the folded projection on the pooled leading axis")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kdecp", description="Multivariate nonparametric change-point detection")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for INFO, -vv for DEBUG logging on standard error")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    simulate = commands.add_parser("simulate", help="write a simulated scenario and its truth")
    simulate.add_argument("--scenario", type=int, choices=SCENARIOS, required=True)
    simulate.add_argument("--T", type=int, required=True)
    simulate.add_argument("--p", type=int, required=True)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--out", required=True, help="data CSV")
    simulate.add_argument("--truth", required=True, help="truth JSON")
    simulate.set_defaults(handler=cmd_simulate)

    detect = commands.add_parser("detect", help="locate change points in a CSV sample")
    detect.add_argument("input", nargs="?", help="CSV, one row per time point")
    detect.add_argument("--out", help="result JSON (standard output when omitted)")
    detect.add_argument("--from-manifest", help="reuse the options recorded in a manifest or result")
    detect.add_argument("--scale", choices=("none", "minmax"), default="none")
    detect.add_argument("--index-column", help="label column (name or 0-based position)")
    _add_detection_options(detect)
    detect.set_defaults(handler=cmd_detect)

    evaluate = commands.add_parser("evaluate", help="score a result against a truth file")
    evaluate.add_argument("result")
    evaluate.add_argument("truth")
    evaluate.add_argument("--out", help="evaluation JSON (standard output when omitted)")
    evaluate.set_defaults(handler=cmd_evaluate)

    bench = commands.add_parser("bench", help="simulate, detect and evaluate over replicates")
    bench.add_argument("--scenario", type=int, nargs="+", choices=SCENARIOS, required=True)
    bench.add_argument("--T", type=int, nargs="+", default=[150])
    bench.add_argument("--p", type=int, nargs="+", default=[10])
    bench.add_argument("--reps", type=int, default=20)
    bench.add_argument("--exact-tau-audit", action="store_true",
                       help="report how often the recorded path differs from fixed-threshold reruns")
    bench.add_argument("--db", help="SQLite run store recording every replicate")
    bench.add_argument("--pdf", help="write a PDF report")
    bench.add_argument("--out", help="table CSV (standard output when omitted)")
    _add_detection_options(bench)
    bench.set_defaults(handler=cmd_bench)

    return parser


def _configure_logging(verbosity: int) -> None:
    level = config.LOG_LEVEL
    if verbosity == 1:
        level = "INFO"
    elif verbosity >= 2:
        level = "DEBUG"
    logging.basicConfig(stream=sys.stderr, level=level,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s", force=True)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)

    ok, message = config.validate_config()
    if not ok:
        _log.error(message)
        return EXIT_USAGE

    try:
        return args.handler(args)
    except _USAGE_ERRORS as exc:
        _log.error("%s", exc)
        return EXIT_USAGE
    except (KdeChangePointError, OSError, ValueError, pd.errors.ParserError) as exc:
        _log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
