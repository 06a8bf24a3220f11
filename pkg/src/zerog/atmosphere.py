"""Atmosphere and gravity models.

Gravity is a fixed constant over the sub-400 ft operating band; altitude
dependence of g is far below sensor resolution there. Density supports a
constant model (default) and a standard-lapse model for sensitivity studies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .limits import ATMOSPHERE_LIMITS, ATMOSPHERE_MODELS, check_range

GRAVITY_MPS2 = 9.80665  # standard gravity, fixed over the operating band

# standard-lapse constants (troposphere)
_LAPSE_K_PER_M = 0.0065
_T0_K = 288.15
_R_AIR = 287.053


class ConfigError(ValueError):
    """Raised when a config value is out of range; message names the field."""


@dataclass(frozen=True)
class Atmosphere:
    """Air density model.

    model: "constant" holds rho0 at all altitudes; "standard-lapse" applies
    the tropospheric lapse-rate profile scaled to rho0 at altitude zero.
    """

    model: str = "constant"
    rho0_kgm3: float = 1.225

    def __post_init__(self) -> None:
        if self.model not in ATMOSPHERE_MODELS:
            raise ConfigError(
                f"atmosphere.model: {self.model!r} not one of {ATMOSPHERE_MODELS}"
            )
        err = check_range("atmosphere.rho0_kgm3", self.rho0_kgm3,
                          *ATMOSPHERE_LIMITS["rho0_kgm3"])
        if err:
            raise ConfigError(err)


def gravity() -> float:
    """Gravitational acceleration in m/s^2 (constant)."""
    return GRAVITY_MPS2


def density(atmosphere: Atmosphere, altitude_m: float) -> float:
    """Air density in kg/m^3 at the given altitude above the launch datum."""
    if altitude_m < -100.0 or altitude_m > 10000.0:
        raise ValueError(f"altitude_m: {altitude_m} outside modeled band")
    if atmosphere.model == "constant":
        return atmosphere.rho0_kgm3
    # standard lapse: rho = rho0 * (1 - L h / T0)^(g/(R L) - 1)
    base = 1.0 - _LAPSE_K_PER_M * altitude_m / _T0_K
    expo = GRAVITY_MPS2 / (_R_AIR * _LAPSE_K_PER_M) - 1.0
    return atmosphere.rho0_kgm3 * math.pow(base, expo)
