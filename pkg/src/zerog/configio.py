"""Config parsing shared by the CLI and the HTTP service.

Validation reports every problem at once, keyed by a dotted field path
("vehicle.mass_kg"), instead of stopping at the first offender. Range
tables come from the limits module; cross-field rules live in the dataclass
constructors and surface under the section key.
"""

from __future__ import annotations

from pathlib import Path

import yaml

from .atmosphere import Atmosphere, ConfigError
from .autonomy import ABORT_BRAKE_RECOVER, ABORT_POWER_CUT
from .limits import (ATMOSPHERE_LIMITS, ATMOSPHERE_MODELS, CONSTRAINT_LIMITS,
                     VEHICLE_LIMITS, check_range)
from .safety import GeofenceConfig
from .simulation import FaultInjection, GustConfig, ScenarioConfig
from .types import MissionConstraints, VehicleParams


class RequestValidationError(ValueError):
    """Carries a {field_path: message} map of everything wrong."""

    def __init__(self, errors: dict[str, str]):
        self.errors = dict(errors)
        lines = "; ".join(f"{k}: {v}" for k, v in sorted(errors.items()))
        super().__init__(lines or "invalid request")


def _check_section(data, section: str, limits: dict,
                   errors: dict[str, str]) -> dict:
    """Range/type validation of one mapping against a limits table; returns
    the cleaned kwargs (only fields that passed)."""
    if data is None:
        return {}
    if not isinstance(data, dict):
        errors[section] = "must be a mapping"
        return {}
    clean = {}
    for key, value in data.items():
        path = f"{section}.{key}"
        if key not in limits:
            errors[path] = "unknown field"
            continue
        lo, hi = limits[key]
        msg = check_range(key, value, lo, hi)
        if msg is not None:
            errors[path] = msg
        else:
            clean[key] = float(value)
    return clean


def _parse_atmosphere(data, errors: dict[str, str]) -> Atmosphere:
    if data is None:
        return Atmosphere()
    if not isinstance(data, dict):
        errors["atmosphere"] = "must be a mapping"
        return Atmosphere()
    kwargs = {}
    for key, value in data.items():
        path = f"atmosphere.{key}"
        if key == "model":
            if value not in ATMOSPHERE_MODELS:
                errors[path] = f"must be one of {', '.join(ATMOSPHERE_MODELS)}"
            else:
                kwargs["model"] = value
        elif key in ATMOSPHERE_LIMITS:
            lo, hi = ATMOSPHERE_LIMITS[key]
            msg = check_range(key, value, lo, hi)
            if msg is not None:
                errors[path] = msg
            else:
                kwargs[key] = float(value)
        else:
            errors[path] = "unknown field"
    try:
        return Atmosphere(**kwargs)
    except ConfigError as exc:
        errors["atmosphere"] = str(exc)
        return Atmosphere()


def parse_sizing_request(
        data: dict) -> tuple[VehicleParams, MissionConstraints, Atmosphere]:
    """Validate a {vehicle, constraints, atmosphere} mapping; raises
    RequestValidationError carrying per-field messages."""
    errors: dict[str, str] = {}
    if not isinstance(data, dict):
        raise RequestValidationError({"body": "must be a JSON object"})
    known = {"vehicle", "constraints", "atmosphere"}
    for key in data:
        if key not in known:
            errors[str(key)] = "unknown section"
    vehicle_kwargs = _check_section(data.get("vehicle"), "vehicle",
                                    VEHICLE_LIMITS, errors)
    constraint_kwargs = _check_section(data.get("constraints"), "constraints",
                                       CONSTRAINT_LIMITS, errors)
    atmosphere = _parse_atmosphere(data.get("atmosphere"), errors)

    params = None
    constraints = None
    if not errors:
        try:
            params = VehicleParams(**vehicle_kwargs)
        except ConfigError as exc:
            errors["vehicle"] = str(exc)
        try:
            constraints = MissionConstraints(**constraint_kwargs)
        except ConfigError as exc:
            errors["constraints"] = str(exc)
    if errors:
        raise RequestValidationError(errors)
    return params, constraints, atmosphere


# ---------------------------------------------------------------------------
# simulation scenarios (YAML)
# ---------------------------------------------------------------------------

_GEOFENCE_FIELDS = {"enabled", "radius_m", "top_m", "cone_base_radius_m",
                    "cone_slope", "nominal_top_m", "v_up_max_mps",
                    "v_lat_max_mps", "margin_factor"}
_GUST_FIELDS = {"amplitude_mps", "start_s", "duration_s", "direction_x",
                "direction_y"}
_SIM_FIELDS = {"dt_s", "max_time_s", "manual_hold_s", "abort_action",
               "abort_on_fault", "planning_ceiling_margin_m"}


def _parse_plain(data, section: str, allowed: set[str],
                 errors: dict[str, str]) -> dict:
    if data is None:
        return {}
    if not isinstance(data, dict):
        errors[section] = "must be a mapping"
        return {}
    out = {}
    for key, value in data.items():
        if key in allowed:
            out[key] = value
        else:
            errors[f"{section}.{key}"] = "unknown field"
    return out


def parse_scenario(data: dict) -> ScenarioConfig:
    """Build a ScenarioConfig from a plain mapping (YAML-decoded)."""
    if not isinstance(data, dict):
        raise RequestValidationError({"body": "must be a mapping"})
    errors: dict[str, str] = {}
    known = {"vehicle", "constraints", "atmosphere", "geofence", "gust",
             "faults", "sim"}
    for key in data:
        if key not in known:
            errors[str(key)] = "unknown section"

    sizing_part = {k: data.get(k) for k in ("vehicle", "constraints",
                                            "atmosphere")}
    params = constraints = atmosphere = None
    try:
        params, constraints, atmosphere = parse_sizing_request(sizing_part)
    except RequestValidationError as exc:
        errors.update(exc.errors)

    geofence_kwargs = _parse_plain(data.get("geofence"), "geofence",
                                   _GEOFENCE_FIELDS, errors)
    gust_kwargs = _parse_plain(data.get("gust"), "gust", _GUST_FIELDS, errors)
    sim_kwargs = _parse_plain(data.get("sim"), "sim", _SIM_FIELDS, errors)
    if ("abort_action" in sim_kwargs
            and sim_kwargs["abort_action"] not in (ABORT_BRAKE_RECOVER,
                                                   ABORT_POWER_CUT)):
        errors["sim.abort_action"] = (
            f"must be {ABORT_BRAKE_RECOVER!r} or {ABORT_POWER_CUT!r}")
        del sim_kwargs["abort_action"]

    faults = []
    raw_faults = data.get("faults")
    if raw_faults is not None:
        if not isinstance(raw_faults, list):
            errors["faults"] = "must be a list"
        else:
            for i, item in enumerate(raw_faults):
                if not isinstance(item, dict):
                    errors[f"faults[{i}]"] = "must be a mapping"
                    continue
                try:
                    faults.append(FaultInjection(**item))
                except (TypeError, ValueError) as exc:
                    errors[f"faults[{i}]"] = str(exc)

    if errors:
        raise RequestValidationError(errors)

    fence_enabled = bool(geofence_kwargs.pop("enabled", True))
    kwargs = dict(params=params, constraints=constraints,
                  atmosphere=atmosphere, faults=tuple(faults), **sim_kwargs)
    try:
        kwargs["gust"] = GustConfig(**gust_kwargs)
    except (TypeError, ValueError) as exc:
        raise RequestValidationError({"gust": str(exc)}) from None
    if data.get("geofence") is not None:
        if not fence_enabled:
            kwargs["geofence"] = None
        else:
            try:
                kwargs["geofence"] = GeofenceConfig(**geofence_kwargs)
            except (TypeError, ValueError) as exc:
                raise RequestValidationError({"geofence": str(exc)}) from None
    return ScenarioConfig(**kwargs)


def load_scenario(path: str | Path) -> ScenarioConfig:
    with open(path) as fh:
        data = yaml.safe_load(fh)
    if data is None:
        data = {}
    return parse_scenario(data)


def load_sizing_config(
        path: str | Path) -> tuple[VehicleParams, MissionConstraints,
                                    Atmosphere]:
    """Sizing subset of a scenario file; extra scenario sections are
    tolerated and ignored."""
    with open(path) as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise RequestValidationError({"body": "must be a mapping"})
    part = {k: data.get(k) for k in ("vehicle", "constraints", "atmosphere")
            if data.get(k) is not None}
    return parse_sizing_request(part)
