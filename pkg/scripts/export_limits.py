#!/usr/bin/env python3
"""Regenerate frontend/src/limits.json from the package limit tables.

Run after editing src/zerog/limits.py; tests/test_limits_sync.py fails
until the two agree.
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from zerog import limits


def payload() -> dict:
    return {
        "vehicle": {k: list(v) for k, v in sorted(limits.VEHICLE_LIMITS.items())},
        "constraints": {k: list(v)
                        for k, v in sorted(limits.CONSTRAINT_LIMITS.items())},
        "atmosphere": {k: list(v)
                       for k, v in sorted(limits.ATMOSPHERE_LIMITS.items())},
        "atmosphere_models": list(limits.ATMOSPHERE_MODELS),
        "regulatory_ceiling_m": limits.REGULATORY_CEILING_M,
    }


def main() -> int:
    out = ROOT / "frontend" / "src" / "limits.json"
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(payload(), indent=2, sort_keys=True) + "\n")
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
