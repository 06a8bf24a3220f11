#!/usr/bin/env python3
"""Sweep shaft power on the nominal airframe and size each point.

Shows how the achievable microgravity window grows with installed power
until the ceiling binds, and where the hover-thrust feasibility floor
sits. Planning only; no closed-loop flight.
"""

import argparse
import csv
import sys
from dataclasses import replace
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import numpy as np

from zerog import Atmosphere, InfeasibleMissionError, get_preset, solve_mission


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--preset", default="nominal")
    ap.add_argument("--lo", type=float, default=500.0, help="min power, W")
    ap.add_argument("--hi", type=float, default=1100.0, help="max power, W")
    ap.add_argument("--points", type=int, default=13)
    ap.add_argument("--csv", type=Path, default=None)
    args = ap.parse_args()

    preset = get_preset(args.preset)
    atm = Atmosphere()
    rows = []
    print(f"{'power_W':>8}  {'window_s':>8}  {'apogee_m':>8}  "
          f"{'boost_s':>7}  note")
    for power in np.linspace(args.lo, args.hi, args.points):
        params = replace(preset.params, engine_power_w=float(power))
        try:
            plan = solve_mission(params, preset.constraints, atm)
        except InfeasibleMissionError as exc:
            print(f"{power:8.1f}  {'-':>8}  {'-':>8}  {'-':>7}  "
                  f"infeasible: {exc.violated_constraint}")
            rows.append((power, "", "", "", exc.violated_constraint))
            continue
        ok = plan.meets_min_duration(preset.constraints)
        note = "" if ok else "below minimum window"
        print(f"{power:8.1f}  {plan.microgravity_duration_s:8.3f}  "
              f"{plan.apogee_m:8.2f}  {plan.t_switch1_s:7.3f}  {note}")
        rows.append((power, plan.microgravity_duration_s, plan.apogee_m,
                     plan.t_switch1_s, note))

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["power_w", "window_s", "apogee_m", "boost_s", "note"])
            w.writerows(rows)
        print(f"\nwrote {args.csv}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
