"""Shared fixtures.

The closed-loop scenario runs cost seconds each, so every test that needs
one shares a single session-scoped simulation. Tests must treat the results
as read-only.
"""

import pytest
from hypothesis import settings

from zerog.atmosphere import Atmosphere
from zerog.presets import PRESETS
from zerog.safety import (GeofenceConfig, build_geofence_tables,
                          monte_carlo_containment)
from zerog.simulation import (FaultInjection, GustConfig, ScenarioConfig,
                              run_mission)
from zerog.sizing import solve_mission

settings.register_profile("suite", deadline=None)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def nominal_params():
    return PRESETS["nominal"].params


@pytest.fixture(scope="session")
def nominal_constraints():
    return PRESETS["nominal"].constraints


@pytest.fixture(scope="session")
def atmosphere():
    return Atmosphere()


@pytest.fixture(scope="session")
def nominal_plan(nominal_params, nominal_constraints, atmosphere):
    return solve_mission(nominal_params, nominal_constraints, atmosphere)


@pytest.fixture(scope="session")
def nominal_run(nominal_params, nominal_constraints):
    return run_mission(ScenarioConfig(params=nominal_params,
                                      constraints=nominal_constraints))


@pytest.fixture(scope="session")
def gust_run(nominal_params, nominal_constraints):
    # lateral 1-cos pulse hitting mid-coast
    gust = GustConfig(amplitude_mps=2.0, start_s=15.0, duration_s=2.0,
                      direction_x=1.0)
    return run_mission(ScenarioConfig(params=nominal_params,
                                      constraints=nominal_constraints,
                                      gust=gust))


@pytest.fixture(scope="session")
def fault_run(nominal_params, nominal_constraints):
    # rotor 2 freezes during the boost, while commands are active
    return run_mission(ScenarioConfig(
        params=nominal_params, constraints=nominal_constraints,
        faults=(FaultInjection(rotor=2, time_s=8.0),)))


@pytest.fixture(scope="session")
def geofence_setup(nominal_params, atmosphere):
    cfg = GeofenceConfig()
    tables = build_geofence_tables(nominal_params, atmosphere, cfg)
    return cfg, tables


@pytest.fixture(scope="session")
def mc_result(nominal_params, atmosphere, geofence_setup):
    cfg, tables = geofence_setup
    return monte_carlo_containment(nominal_params, atmosphere, cfg, tables,
                                   samples=1000, seed=0)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo the acceptance scoreboard after the test summary."""
    try:
        import test_acceptance
    except ImportError:
        return
    lines = getattr(test_acceptance, "REPORT_LINES", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
