"""Run every bundled sweep scenario and print one result table per app.

Usage: python3 scripts/run_sweeps.py [--jobs N] [--out results.json]
"""

import argparse
import json
import os
import sys
import tempfile

ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
sys.path.insert(0, os.path.join(ROOT, "src"))

from flowreco.scenario import load_scenario_file, run_scenario  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out", help="write a combined JSON report here")
    args = parser.parse_args()

    scenario_dir = os.path.join(ROOT, "fixtures", "scenarios")
    os.chdir(ROOT)
    combined = {}
    failed = []
    for name in sorted(os.listdir(scenario_dir)):
        if not name.endswith(".json"):
            continue
        sc = load_scenario_file(os.path.join(scenario_dir, name))
        with tempfile.TemporaryDirectory(prefix="flowreco-sweep-") as ws:
            outcome = run_scenario(sc, workspace_root=ws, jobs=args.jobs)
        print(f"== {name}")
        print(outcome.report.table())
        for failure in outcome.failures:
            print(f"  FAIL: {failure}")
            failed.append(name)
        combined[name] = {
            "passed": outcome.passed,
            "failures": outcome.failures,
            "report": outcome.report.to_json(),
        }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(combined, fh, indent=2, sort_keys=True)
        print(f"wrote {args.out}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
