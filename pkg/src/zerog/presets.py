"""Curated vehicle/mission presets.

Every preset must size feasibly and leave the actuator envelope at least 5%
above the planned static thrust, so the closed loop can track the plan; the
test suite enforces both. The nominal preset is the reference vehicle for
the end-to-end mission scenarios.
"""

from __future__ import annotations

from dataclasses import dataclass

from .types import MissionConstraints, VehicleParams


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    params: VehicleParams
    constraints: MissionConstraints


_PRESETS = (
    Preset(
        name="nominal",
        description="Reference 2 kg testbed flying the full-height parabola.",
        params=VehicleParams(engine_power_w=745.0,
                             thrust_gain_n_per_rad=84.0),
        constraints=MissionConstraints(),
    ),
    Preset(
        name="featherweight",
        description="1.2 kg trainer on a shorter parabola.",
        params=VehicleParams(mass_kg=1.2, inertia_xx_kgm2=0.012,
                             inertia_yy_kgm2=0.012, inertia_zz_kgm2=0.02,
                             reference_area_m2=0.04, engine_power_w=520.0,
                             prop_diameter_m=0.35, arm_x_m=0.16,
                             arm_y_m=0.16, thrust_gain_n_per_rad=61.0),
        constraints=MissionConstraints(max_altitude_m=80.0,
                                       park_altitude_m=8.0,
                                       min_microgravity_duration_s=3.0),
    ),
    Preset(
        name="heavy",
        description="3.6 kg payload carrier with slower servos.",
        params=VehicleParams(mass_kg=3.6, inertia_xx_kgm2=0.05,
                             inertia_yy_kgm2=0.05, inertia_zz_kgm2=0.09,
                             reference_area_m2=0.07, drag_coeff=1.1,
                             drag_coeff_brake=2.8, engine_power_w=1500.0,
                             prop_diameter_m=0.5, servo_tau_s=0.09,
                             arm_x_m=0.25, arm_y_m=0.25,
                             thrust_gain_n_per_rad=156.0),
        constraints=MissionConstraints(park_altitude_m=12.0,
                                       min_microgravity_duration_s=4.5),
    ),
    Preset(
        name="low-ceiling",
        description="Nominal vehicle limited to a 60 m site.",
        params=VehicleParams(engine_power_w=745.0,
                             thrust_gain_n_per_rad=84.0),
        constraints=MissionConstraints(max_altitude_m=60.0,
                                       park_altitude_m=8.0,
                                       min_microgravity_duration_s=2.5),
    ),
    Preset(
        name="turbo",
        description="Overpowered 1.8 kg build chasing the longest window.",
        params=VehicleParams(mass_kg=1.8, inertia_xx_kgm2=0.02,
                             inertia_yy_kgm2=0.02, inertia_zz_kgm2=0.034,
                             reference_area_m2=0.045, engine_power_w=1100.0,
                             prop_diameter_m=0.45,
                             thrust_gain_n_per_rad=118.0),
        constraints=MissionConstraints(min_microgravity_duration_s=5.0),
    ),
)

PRESETS: dict[str, Preset] = {p.name: p for p in _PRESETS}


def preset_names() -> list[str]:
    return list(PRESETS.keys())


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        known = ", ".join(preset_names())
        raise KeyError(f"unknown preset {name!r} (known: {known})") from None
