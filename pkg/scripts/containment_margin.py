#!/usr/bin/env python3
"""Monte Carlo containment margin versus fence radius.

For each candidate fence radius, drops the nominal vehicle unpowered from
random states inside the matching critical volume and reports the worst
impact radius. The gap between worst impact and the fence is the margin
the power-cut abort actually buys.
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from zerog import (Atmosphere, GeofenceConfig, get_preset,
                   get_geofence_tables, monte_carlo_containment)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--preset", default="nominal")
    ap.add_argument("--radii", default="24,27,30,33",
                    help="comma-separated fence radii, m")
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    preset = get_preset(args.preset)
    atm = Atmosphere()
    radii = [float(tok) for tok in args.radii.split(",") if tok.strip()]

    print(f"{'fence_m':>7}  {'contained':>9}  {'worst_m':>8}  {'margin_m':>8}")
    for radius in radii:
        fence = replace(GeofenceConfig(), radius_m=radius)
        tables = get_geofence_tables(preset.params, atm, fence)
        res = monte_carlo_containment(preset.params, atm, fence, tables,
                                      samples=args.samples, seed=args.seed)
        margin = radius - res.max_impact_radius_m
        print(f"{radius:7.1f}  {res.contained:5d}/{res.samples:<4d}  "
              f"{res.max_impact_radius_m:8.2f}  {margin:8.2f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
