"""Sizing and closed-loop simulation of parabolic microgravity flights
flown by a variable-pitch quadrotor."""

from .atmosphere import Atmosphere, ConfigError, density, gravity
from .sizing import (InfeasibleMissionError, MissionPlan, Trajectory1D,
                     grid_search_mission, solve_mission, static_thrust,
                     propeller_efficiency, thrust_available)
from .types import MissionConstraints, VehicleParams
from .simulation import (FaultInjection, GustConfig, MissionMetrics,
                         ScenarioConfig, SimResult, run_mission)
from .safety import (GeofenceConfig, GeofenceVerdict, monte_carlo_containment,
                     get_geofence_tables)
from .presets import PRESETS, Preset, get_preset, preset_names

__version__ = "0.1.0"

__all__ = [
    "Atmosphere", "ConfigError", "density", "gravity",
    "InfeasibleMissionError", "MissionPlan", "Trajectory1D",
    "grid_search_mission", "solve_mission", "static_thrust",
    "propeller_efficiency", "thrust_available",
    "MissionConstraints", "VehicleParams",
    "FaultInjection", "GustConfig", "MissionMetrics", "ScenarioConfig",
    "SimResult", "run_mission",
    "GeofenceConfig", "GeofenceVerdict", "monte_carlo_containment",
    "get_geofence_tables",
    "PRESETS", "Preset", "get_preset", "preset_names",
    "__version__",
]
