"""Command line front end.

Subcommands: size (plan a mission), simulate (fly it closed loop),
faultcase (fly with an injected servo fault), geofence-mc (containment
Monte Carlo), sweep (sizing across a parameter range), serve (HTTP API).

Exit codes: 0 success, 2 invalid input, 3 infeasible mission,
4 fault not detected.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .atmosphere import Atmosphere, ConfigError
from .configio import (RequestValidationError, load_scenario,
                       load_sizing_config)
from .logio import (metrics_to_dict, plan_summary, write_json,
                    write_plan_profile, write_sim_outputs)
from .presets import get_preset, preset_names
from .safety import get_geofence_tables, monte_carlo_containment
from .simulation import FaultInjection, ScenarioConfig, run_mission
from .sizing import InfeasibleMissionError, solve_mission

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3
EXIT_NOT_DETECTED = 4


def _add_source_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", default="nominal",
                   help=f"preset name ({', '.join(preset_names())})")
    p.add_argument("--config", default=None,
                   help="YAML scenario file (overrides --preset)")


def _sizing_inputs(args):
    if args.config is not None:
        return load_sizing_config(args.config)
    preset = get_preset(args.preset)
    return preset.params, preset.constraints, Atmosphere()


def _scenario(args) -> ScenarioConfig:
    if args.config is not None:
        return load_scenario(args.config)
    preset = get_preset(args.preset)
    return ScenarioConfig(params=preset.params,
                          constraints=preset.constraints)


def _cmd_size(args) -> int:
    params, constraints, atmosphere = _sizing_inputs(args)
    try:
        plan = solve_mission(params, constraints, atmosphere)
    except InfeasibleMissionError as exc:
        print(f"infeasible: {exc}")
        if args.out:
            out = Path(args.out)
            out.mkdir(parents=True, exist_ok=True)
            write_json(out / "summary.json", {
                "feasible": False,
                "violated_constraint": exc.violated_constraint,
                "message": str(exc)})
        return EXIT_INFEASIBLE
    ok = plan.meets_min_duration(constraints)
    print(f"feasible mission: microgravity window "
          f"{plan.microgravity_duration_s:.3f} s "
          f"(need >= {constraints.min_microgravity_duration_s:.2f} s)"
          + ("" if ok else " [below requirement]"))
    print(f"  boost ends    t={plan.t_switch1_s:8.3f} s  "
          f"h={plan.entry_altitude_m:7.2f} m  "
          f"hdot={plan.entry_speed_mps:+7.2f} m/s")
    print(f"  brake starts  t={plan.t_switch2_s:8.3f} s  "
          f"h={plan.brake_altitude_m:7.2f} m  "
          f"hdot={plan.brake_speed_mps:+7.2f} m/s")
    print(f"  stopped       t={plan.t_stop_s:8.3f} s  "
          f"h={plan.stop_altitude_m:7.2f} m")
    print(f"  apogee {plan.apogee_m:.2f} m vs ceiling {plan.ceiling_m:.2f} m")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_plan_profile(out / "plan.csv", plan)
        write_json(out / "summary.json",
                   {"feasible": True, "meets_min_duration": ok,
                    **plan_summary(plan)})
        print(f"wrote {out / 'plan.csv'} and {out / 'summary.json'}")
    return EXIT_OK if ok else EXIT_INFEASIBLE


def _print_metrics(result) -> None:
    m = result.metrics
    print(f"mission {'completed' if m.completed else 'did not complete'}"
          + (f", aborted ({m.abort_reason})" if m.aborted else ""))
    print(f"  apogee {m.apogee_m:.2f} m, microgravity window "
          f"{m.microgravity_window_s:.3f} s "
          f"[{m.window_start_s:.2f}, {m.window_end_s:.2f}] s")
    print(f"  final altitude {m.final_altitude_m:.2f} m, "
          f"max lateral offset {m.max_lateral_m:.3f} m, "
          f"wall time {m.wall_time_s:.2f} s")
    if m.flagged_rotors:
        print(f"  flagged rotors: {list(m.flagged_rotors)}")
    for t, msg in result.events:
        print(f"  [{t:8.3f}] {msg}")


def _cmd_simulate(args) -> int:
    cfg = _scenario(args)
    if args.max_time is not None:
        cfg = dataclasses.replace(cfg, max_time_s=args.max_time)
    try:
        result = run_mission(cfg)
    except InfeasibleMissionError as exc:
        print(f"infeasible: {exc}")
        return EXIT_INFEASIBLE
    _print_metrics(result)
    if args.out:
        write_sim_outputs(args.out, result)
        print(f"wrote logs under {args.out}")
    return EXIT_OK


def _cmd_faultcase(args) -> int:
    cfg = _scenario(args)
    fault = FaultInjection(rotor=args.rotor, time_s=args.time)
    cfg = dataclasses.replace(cfg, faults=(fault,))
    result = run_mission(cfg)
    _print_metrics(result)
    if args.out:
        write_sim_outputs(args.out, result)
    flag_times = [t for t, msg in result.events
                  if msg.startswith("servo fault flagged")]
    if args.rotor in result.metrics.flagged_rotors and flag_times:
        latency = flag_times[0] - args.time
        print(f"fault on rotor {args.rotor} detected "
              f"{latency * 1000.0:.1f} ms after injection")
        return EXIT_OK
    print(f"fault on rotor {args.rotor} was NOT detected")
    return EXIT_NOT_DETECTED


def _cmd_geofence_mc(args) -> int:
    cfg = _scenario(args)
    if cfg.geofence is None:
        print("scenario has no geofence enabled")
        return EXIT_INVALID
    tables = get_geofence_tables(cfg.params, cfg.atmosphere, cfg.geofence)
    res = monte_carlo_containment(cfg.params, cfg.atmosphere, cfg.geofence,
                                  tables, samples=args.samples,
                                  seed=args.seed)
    print(f"containment {res.contained}/{res.samples} "
          f"({res.containment_fraction:.1%}), worst impact radius "
          f"{res.max_impact_radius_m:.2f} m vs fence {res.fence_radius_m:.2f} m")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        write_json(out / "containment.json", {
            "samples": res.samples, "contained": res.contained,
            "containment_fraction": res.containment_fraction,
            "max_impact_radius_m": res.max_impact_radius_m,
            "fence_radius_m": res.fence_radius_m, "seed": res.seed})
    return EXIT_OK if res.contained == res.samples else 1


_SWEEP_SECTIONS = ("vehicle", "constraints", "atmosphere")


def _cmd_sweep(args) -> int:
    params, constraints, atmosphere = _sizing_inputs(args)
    try:
        section, field = args.param.split(".", 1)
    except ValueError:
        print(f"--param must look like section.field, got {args.param!r}",
              file=sys.stderr)
        return EXIT_INVALID
    if section not in _SWEEP_SECTIONS:
        print(f"unknown section {section!r} (use one of "
              f"{', '.join(_SWEEP_SECTIONS)})", file=sys.stderr)
        return EXIT_INVALID
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        print(f"--values must be comma-separated numbers, got {args.values!r}",
              file=sys.stderr)
        return EXIT_INVALID
    if not values:
        print("--values is empty", file=sys.stderr)
        return EXIT_INVALID

    rows = []
    for value in values:
        trio = {"vehicle": params, "constraints": constraints,
                "atmosphere": atmosphere}
        try:
            trio[section] = dataclasses.replace(trio[section],
                                                **{field: value})
        except (TypeError, ConfigError) as exc:
            print(f"cannot set {args.param}={value}: {exc}", file=sys.stderr)
            return EXIT_INVALID
        try:
            plan = solve_mission(trio["vehicle"], trio["constraints"],
                                 trio["atmosphere"])
            rows.append({"value": value, "feasible": True,
                         "microgravity_duration_s": plan.microgravity_duration_s,
                         "apogee_m": plan.apogee_m,
                         "t_stop_s": plan.t_stop_s,
                         "violated_constraint": ""})
        except InfeasibleMissionError as exc:
            rows.append({"value": value, "feasible": False,
                         "microgravity_duration_s": 0.0, "apogee_m": 0.0,
                         "t_stop_s": 0.0,
                         "violated_constraint": exc.violated_constraint})

    header = ("value", "feasible", "microgravity_duration_s", "apogee_m",
              "t_stop_s", "violated_constraint")
    print(f"# sweep {args.param}")
    for r in rows:
        print(f"{r['value']:12.4f}  "
              + ("feasible  " if r["feasible"] else "infeasible")
              + (f"  window={r['microgravity_duration_s']:.3f} s"
                 f"  apogee={r['apogee_m']:.2f} m" if r["feasible"]
                 else f"  ({r['violated_constraint']})"))
    if args.out:
        import csv
        path = Path(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=header)
            w.writeheader()
            w.writerows(rows)
        print(f"wrote {path}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app
    uvicorn.run(create_app(), host=args.host, port=args.port,
                log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="zerog",
        description="Sizing and simulation tools for parabolic microgravity "
                    "flights with a variable-pitch quadrotor.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("size", help="plan a time-optimal parabola")
    _add_source_args(p)
    p.add_argument("--out", default=None, help="directory for plan.csv + summary.json")
    p.set_defaults(func=_cmd_size)

    p = sub.add_parser("simulate", help="fly the mission closed loop")
    _add_source_args(p)
    p.add_argument("--out", default=None, help="directory for flight logs")
    p.add_argument("--max-time", type=float, default=None,
                   help="simulation time limit in seconds")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("faultcase", help="mission with an injected stuck servo")
    _add_source_args(p)
    p.add_argument("--rotor", type=int, required=True, choices=(0, 1, 2, 3))
    p.add_argument("--time", type=float, required=True,
                   help="injection time (sim clock, s)")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_faultcase)

    p = sub.add_parser("geofence-mc",
                       help="power-cut containment Monte Carlo")
    _add_source_args(p)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_geofence_mc)

    p = sub.add_parser("sweep", help="sizing sweep over one parameter")
    _add_source_args(p)
    p.add_argument("--param", required=True,
                   help="dotted field, e.g. vehicle.engine_power_w")
    p.add_argument("--values", required=True,
                   help="comma-separated values")
    p.add_argument("--out", default=None, help="CSV output path")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("serve", help="run the HTTP sizing service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RequestValidationError as exc:
        for field, msg in sorted(exc.errors.items()):
            print(f"invalid config: {field}: {msg}", file=sys.stderr)
        return EXIT_INVALID
    except (ConfigError, KeyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
