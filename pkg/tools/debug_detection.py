#!/usr/bin/env python3
"""Print the threshold path and selection trace of one simulated scenario

Run: python3 tools/debug_detection.py [scenario] [T] [p] [seed]
"""
import logging
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from core.models import SegmenterConfig, SelectorConfig  # noqa: E402
from services.metrics import evaluate_run  # noqa: E402
from services.pipeline import detect_change_points  # noqa: E402
from services.simulator import gen_scenario  # noqa: E402


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    scenario, T, p, seed = (int(a) for a in (argv + ["1", "150", "10", "1"][len(argv):])[:4])
    logging.basicConfig(stream=sys.stderr, level=logging.INFO)

    sample, truth = gen_scenario(scenario, T, p, seed)
    outcome = detect_change_points(sample, SegmenterConfig(seed=seed), SelectorConfig(seed=seed),
                                   audit=True)

    print("=" * 80)
    print(f"SCENARIO {scenario}: T={T} p={p} seed={seed} h={outcome.h:.4f} buffer={outcome.buffer}")
    print(f"truth: {truth.true_points.to_list()}")
    print("=" * 80)

    print("\nPATH (strongest first):")
    for record in outcome.path.records:
        print(f"  b={record.b:4d}  a={record.a:10.5f}  interval=({record.interval.s}, "
              f"{record.interval.e}]  depth={record.depth}")

    print("\nSELECTION TESTS:")
    for test in outcome.selection.tests:
        mark = "declared" if test.declared else ""
        print(f"  level {test.level:3d}  eta={test.eta:4d}  ({test.left}, {test.right}]  "
              f"min adjusted p={test.min_adjusted_p:.3g}  {mark}")

    result = evaluate_run(outcome.change_points, truth.true_points)
    print("\nRESULT:")
    print(f"  selected level: {outcome.selection.selected_level}")
    print(f"  change points:  {outcome.change_points.to_list()}")
    print(f"  |K-K^|={result.count_error}  d(C^|C)={result.d_est_given_true}  "
          f"d(C|C^)={result.d_true_given_est}")
    print(f"  path vs exact-tau discrepancy: {outcome.discrepancy:.2%}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
