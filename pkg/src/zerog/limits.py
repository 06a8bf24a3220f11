"""Validation limits for config fields.

Single source of truth shared by dataclass validation, the sizing service's
request validation, and the browser form (frontend/src/limits.json mirrors
this table; a test keeps the two in sync). Bounds are inclusive.
"""

from __future__ import annotations

# field -> (low, high), inclusive on both ends
VEHICLE_LIMITS: dict[str, tuple[float, float]] = {
    "mass_kg": (0.1, 100.0),
    "inertia_xx_kgm2": (1e-4, 50.0),
    "inertia_yy_kgm2": (1e-4, 50.0),
    "inertia_zz_kgm2": (1e-4, 50.0),
    "reference_area_m2": (1e-3, 5.0),
    "drag_coeff": (0.0, 5.0),
    "drag_coeff_brake": (0.0, 20.0),
    "engine_power_w": (10.0, 100000.0),
    "prop_diameter_m": (0.05, 2.0),
    "thrust_derating": (0.1, 1.0),
    "servo_tau_s": (1e-3, 1.0),
    "servo_deadband_rad": (0.0, 0.01),
    "max_deflection_rad": (0.01, 0.5),
    "thrust_gain_n_per_rad": (1.0, 1e4),
    "drag_torque_gain_nm_per_rad": (1e-3, 100.0),
    "arm_x_m": (0.01, 2.0),
    "arm_y_m": (0.01, 2.0),
}

# Regulatory ceiling: 400 ft. Ceilings above it are rejected, not clamped.
REGULATORY_CEILING_M = 121.92

CONSTRAINT_LIMITS: dict[str, tuple[float, float]] = {
    "max_altitude_m": (5.0, REGULATORY_CEILING_M),
    "park_altitude_m": (0.5, 100.0),
    "min_microgravity_duration_s": (0.5, 30.0),
    "microgravity_threshold_g": (1e-5, 0.1),
    "countdown_s": (0.0, 60.0),
    "initial_launch_speed_mps": (0.0, 50.0),
}

ATMOSPHERE_LIMITS: dict[str, tuple[float, float]] = {
    "rho0_kgm3": (0.1, 2.0),
}

ATMOSPHERE_MODELS = ("constant", "standard-lapse")


def check_range(field: str, value: float, lo: float, hi: float) -> str | None:
    """Return an error message naming the field, or None if in range."""
    try:
        v = float(value)
    except (TypeError, ValueError):
        return f"{field}: expected a number, got {value!r}"
    if v != v:  # NaN
        return f"{field}: must not be NaN"
    if v < lo or v > hi:
        return f"{field}: {v} outside allowed range [{lo}, {hi}]"
    return None
