"""Log and plan serialization.

Floats are written with repr(), the shortest string that parses back to the
identical double, so CSV round trips are exact and reruns of a deterministic
scenario produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import get_type_hints

from .simulation import LogRecord, MissionMetrics, SimResult
from .sizing import MissionPlan

_LOG_TYPES = [get_type_hints(LogRecord)[name] for name in LogRecord._fields]

PLAN_COLUMNS = ("t_s", "altitude_m", "climb_rate_mps", "acceleration_mps2",
                "thrust_n", "phase")


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_flight_log(path: str | Path, records: list[LogRecord]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(LogRecord._fields)
        for r in records:
            w.writerow([_cell(v) for v in r])


def read_flight_log(path: str | Path) -> list[LogRecord]:
    with open(path, newline="") as fh:
        rd = csv.reader(fh)
        header = next(rd)
        if tuple(header) != LogRecord._fields:
            raise ValueError(f"{path}: unexpected flight log header")
        out = []
        for row in rd:
            out.append(LogRecord(*[t(cell) for t, cell in zip(_LOG_TYPES, row)]))
        return out


def write_plan_profile(path: str | Path, plan: MissionPlan) -> None:
    tr = plan.trajectory
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(PLAN_COLUMNS)
        for i in range(len(tr.t_s)):
            w.writerow([_cell(float(tr.t_s[i])), _cell(float(tr.h_m[i])),
                        _cell(float(tr.hdot_mps[i])),
                        _cell(float(tr.hddot_mps2[i])),
                        _cell(float(tr.thrust_n[i])), str(tr.phase[i])])


def read_plan_profile(path: str | Path) -> list[tuple]:
    """Rows of (t, altitude, climb rate, acceleration, thrust, phase)."""
    with open(path, newline="") as fh:
        rd = csv.reader(fh)
        header = next(rd)
        if tuple(header) != PLAN_COLUMNS:
            raise ValueError(f"{path}: unexpected plan header")
        return [(float(r[0]), float(r[1]), float(r[2]), float(r[3]),
                 float(r[4]), r[5]) for r in rd]


def write_events(path: str | Path, events: list[tuple[float, str]]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(("t_s", "event"))
        for t, msg in events:
            w.writerow([_cell(t), msg])


def plan_summary(plan: MissionPlan) -> dict:
    return {
        "t_switch1_s": plan.t_switch1_s,
        "t_switch2_s": plan.t_switch2_s,
        "t_stop_s": plan.t_stop_s,
        "microgravity_duration_s": plan.microgravity_duration_s,
        "apogee_m": plan.apogee_m,
        "entry_altitude_m": plan.entry_altitude_m,
        "entry_speed_mps": plan.entry_speed_mps,
        "brake_altitude_m": plan.brake_altitude_m,
        "brake_speed_mps": plan.brake_speed_mps,
        "stop_altitude_m": plan.stop_altitude_m,
        "max_climb_speed_mps": plan.max_climb_speed_mps,
        "max_descent_speed_mps": plan.max_descent_speed_mps,
        "ceiling_m": plan.ceiling_m,
        "park_altitude_m": plan.park_altitude_m,
    }


def plan_to_dict(plan: MissionPlan, max_points: int | None = 1200) -> dict:
    """Summary plus a (optionally downsampled) profile for plotting."""
    tr = plan.trajectory
    n = len(tr.t_s)
    stride = 1
    if max_points is not None and n > max_points:
        stride = math.ceil(n / max_points)
    idx = list(range(0, n, stride))
    if idx[-1] != n - 1:
        idx.append(n - 1)
    out = plan_summary(plan)
    out["profile"] = {
        "t_s": [float(tr.t_s[i]) for i in idx],
        "altitude_m": [float(tr.h_m[i]) for i in idx],
        "climb_rate_mps": [float(tr.hdot_mps[i]) for i in idx],
        "acceleration_mps2": [float(tr.hddot_mps2[i]) for i in idx],
        "thrust_n": [float(tr.thrust_n[i]) for i in idx],
        "phase": [str(tr.phase[i]) for i in idx],
    }
    return out


def metrics_to_dict(metrics: MissionMetrics) -> dict:
    return {
        "apogee_m": metrics.apogee_m,
        "microgravity_window_s": metrics.microgravity_window_s,
        "window_start_s": metrics.window_start_s,
        "window_end_s": metrics.window_end_s,
        "final_altitude_m": metrics.final_altitude_m,
        "final_climb_rate_mps": metrics.final_climb_rate_mps,
        "max_lateral_m": metrics.max_lateral_m,
        "completed": metrics.completed,
        "aborted": metrics.aborted,
        "abort_reason": metrics.abort_reason,
        "power_cut": metrics.power_cut,
        "flagged_rotors": list(metrics.flagged_rotors),
        "launch_time_s": metrics.launch_time_s,
        "wall_time_s": metrics.wall_time_s,
    }


def write_json(path: str | Path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_sim_outputs(out_dir: str | Path, result: SimResult) -> None:
    """Standard simulate artifact set: flight.csv, events.csv, plan.csv,
    summary.json."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_flight_log(out / "flight.csv", result.records)
    write_events(out / "events.csv", result.events)
    write_plan_profile(out / "plan.csv", result.plan)
    write_json(out / "summary.json", {
        "plan": plan_summary(result.plan),
        "metrics": metrics_to_dict(result.metrics),
        "events": [[t, msg] for t, msg in result.events],
    })
