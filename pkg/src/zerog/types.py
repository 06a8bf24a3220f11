"""Vehicle and mission parameter types.

All fields carry units in their names. Validation rejects out-of-range
values (raising ConfigError naming the offending field) rather than
clamping them; a config that survives construction is usable as-is.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .atmosphere import GRAVITY_MPS2, ConfigError
from .limits import CONSTRAINT_LIMITS, VEHICLE_LIMITS, check_range

# Synthetic thrust-curve enrichment at full deflection: T(a_max) = K_T*a_max*(1+0.35).
# Shared with the actuation module so the default gain rule below stays exact.
SYNTHETIC_CURVE_ENRICHMENT = 0.35


def default_thrust_gain(mass_kg: float, max_deflection_rad: float) -> float:
    """Thrust gain K_T sized so four rotors at max deflection give T/W = 2."""
    full = max_deflection_rad * (1.0 + SYNTHETIC_CURVE_ENRICHMENT)
    return 2.0 * mass_kg * GRAVITY_MPS2 / (4.0 * full)


@dataclass(frozen=True)
class VehicleParams:
    """Physical and actuator parameters of one vehicle.

    Thrust/torque gains and arm lengths define the linear allocation model;
    the servo fields define the identified actuator dynamics. thrust_gain
    and drag_torque_gain default to a rule-of-thumb sizing (thrust-to-weight
    2.0 at full deflection; torque gain scaled by a 0.016 m arm ratio).
    """

    mass_kg: float = 2.0
    inertia_xx_kgm2: float = 0.022
    inertia_yy_kgm2: float = 0.022
    inertia_zz_kgm2: float = 0.038
    reference_area_m2: float = 0.05
    drag_coeff: float = 1.0
    drag_coeff_brake: float = 2.5
    engine_power_w: float = 800.0
    prop_diameter_m: float = 0.40
    thrust_derating: float = 0.7
    servo_tau_s: float = 0.075
    servo_deadband_rad: float = 0.0009
    max_deflection_rad: float = 0.09
    thrust_gain_n_per_rad: float | None = None
    drag_torque_gain_nm_per_rad: float | None = None
    arm_x_m: float = 0.20
    arm_y_m: float = 0.20

    def __post_init__(self) -> None:
        if self.thrust_gain_n_per_rad is None:
            object.__setattr__(
                self, "thrust_gain_n_per_rad",
                default_thrust_gain(self.mass_kg, self.max_deflection_rad))
        if self.drag_torque_gain_nm_per_rad is None:
            object.__setattr__(
                self, "drag_torque_gain_nm_per_rad",
                0.016 * self.thrust_gain_n_per_rad)
        errors = []
        for name, (lo, hi) in VEHICLE_LIMITS.items():
            err = check_range(f"vehicle.{name}", getattr(self, name), lo, hi)
            if err:
                errors.append(err)
        if self.drag_coeff_brake < self.drag_coeff:
            errors.append(
                "vehicle.drag_coeff_brake: must be >= drag_coeff "
                f"({self.drag_coeff_brake} < {self.drag_coeff})")
        if errors:
            raise ConfigError("; ".join(errors))

    @property
    def weight_n(self) -> float:
        return self.mass_kg * GRAVITY_MPS2


@dataclass(frozen=True)
class MissionConstraints:
    """Mission envelope: ceiling, park altitude, duration and timing rules."""

    max_altitude_m: float = 121.92
    park_altitude_m: float = 10.0
    min_microgravity_duration_s: float = 4.0
    microgravity_threshold_g: float = 1e-3
    countdown_s: float = 5.0
    initial_launch_speed_mps: float = 0.0

    def __post_init__(self) -> None:
        errors = []
        for name, (lo, hi) in CONSTRAINT_LIMITS.items():
            err = check_range(f"constraints.{name}", getattr(self, name), lo, hi)
            if err:
                errors.append(err)
        if self.park_altitude_m >= self.max_altitude_m:
            errors.append(
                "constraints.park_altitude_m: must be below max_altitude_m "
                f"({self.park_altitude_m} >= {self.max_altitude_m})")
        if errors:
            raise ConfigError("; ".join(errors))
