#!/usr/bin/env python3
"""Fly a batch of scenario files and print a side-by-side mission report.

Default batch is the three checked-in scenarios (calm, gust, servo fault).
With --out, the full artifact set for each run lands in <out>/<name>/.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from zerog import run_mission
from zerog.configio import load_scenario
from zerog.logio import write_sim_outputs

DEFAULT_CONFIGS = sorted(
    (Path(__file__).resolve().parents[1] / "configs").glob("*.yaml"))


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("configs", nargs="*", type=Path, default=None,
                    help="scenario YAML files (default: configs/*.yaml)")
    ap.add_argument("--out", type=Path, default=None,
                    help="directory for per-scenario artifacts")
    args = ap.parse_args()
    paths = args.configs or DEFAULT_CONFIGS
    if not paths:
        print("no scenario files found", file=sys.stderr)
        return 2

    rows = []
    for path in paths:
        cfg = load_scenario(path)
        result = run_mission(cfg)
        m = result.metrics
        if m.completed:
            outcome = "completed"
        elif m.aborted:
            outcome = f"aborted ({m.abort_reason})"
        else:
            outcome = "timed out"
        rows.append((path.stem, m, outcome))
        if args.out:
            write_sim_outputs(args.out / path.stem, result)

    name_w = max(len(r[0]) for r in rows)
    print(f"{'scenario':<{name_w}}  {'window_s':>8}  {'apogee_m':>8}  "
          f"{'lateral_m':>9}  {'flags':>5}  outcome")
    for name, m, outcome in rows:
        flags = ",".join(map(str, m.flagged_rotors)) or "-"
        print(f"{name:<{name_w}}  {m.microgravity_window_s:8.3f}  "
              f"{m.apogee_m:8.2f}  {m.max_lateral_m:9.3f}  {flags:>5}  {outcome}")
    if args.out:
        print(f"\nartifacts under {args.out}/")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
