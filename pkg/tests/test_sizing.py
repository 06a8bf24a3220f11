"""Vertical sizing model and the bang-coast-bang solver.

Derived numbers are checked against the independent implementations in
oracles.py (plain bisection, longhand RK4 grid search); trivial identities
are asserted directly.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from zerog.atmosphere import Atmosphere, GRAVITY_MPS2
from zerog.presets import PRESETS
from zerog.sizing import (InfeasibleMissionError, accel_1d, grid_search_mission,
                          integrate_phase, propeller_efficiency, solve_mission,
                          static_thrust, thrust_available)
from zerog.types import MissionConstraints, VehicleParams

ATM = Atmosphere()
NOMINAL = PRESETS["nominal"]


# ---------------------------------------------------------------------------
# propulsion model
# ---------------------------------------------------------------------------

def test_static_thrust_formula():
    # cube root of (pi/2) D^2 rho P^2, checked digit-for-digit
    t = static_thrust(745.0, 0.40, 1.225)
    assert t == pytest.approx(((math.pi / 2) * 0.16 * 1.225 * 745.0 ** 2) ** (1 / 3),
                              rel=1e-15)
    assert t == pytest.approx(oracles.static_thrust(745.0, 0.40, 1.225), rel=1e-14)


def test_derated_static_thrust_pinned():
    # 0.7 derating at two power points; 745 W is the nominal powerplant
    assert 0.7 * static_thrust(800.0, 0.40, 1.225) == pytest.approx(
        40.73333923762141, abs=1e-9)
    assert 0.7 * static_thrust(745.0, 0.40, 1.225) == pytest.approx(
        38.844321322579844, abs=1e-9)


def test_static_thrust_scaling_laws():
    base = static_thrust(800.0, 0.4, 1.225)
    assert static_thrust(800.0 * 8, 0.4, 1.225) == pytest.approx(base * 4, rel=1e-12)
    assert static_thrust(800.0, 0.8, 1.225) == pytest.approx(
        base * 2 ** (2 / 3), rel=1e-12)
    assert static_thrust(800.0, 0.4, 2.45) == pytest.approx(
        base * 2 ** (1 / 3), rel=1e-12)


def test_efficiency_zero_at_rest_and_rejects_descent():
    assert propeller_efficiency(745.0, 0.4, 1.225, 0.0) == 0.0
    with pytest.raises(ValueError):
        propeller_efficiency(745.0, 0.4, 1.225, -1.0)


@pytest.mark.parametrize("hdot", [0.5, 2.0, 5.0, 10.0, 14.235835222452843, 25.0])
def test_efficiency_satisfies_defining_relation(hdot):
    eta = propeller_efficiency(745.0, 0.4, 1.225, hdot)
    scale = 2.0 * 745.0 / (math.pi * 1.225 * 0.16)
    assert eta * (scale / (1.0 - eta)) ** (1 / 3) == pytest.approx(hdot, rel=1e-10)


@pytest.mark.parametrize("hdot", [0.5, 2.0, 5.0, 10.0, 14.235835222452843, 25.0])
def test_efficiency_matches_bisection_oracle(hdot):
    eta = propeller_efficiency(745.0, 0.4, 1.225, hdot)
    assert eta == pytest.approx(
        oracles.efficiency_bisect(745.0, 0.4, 1.225, hdot), abs=1e-9)
    assert 0.0 < eta < 1.0


def test_efficiency_monotone_in_speed():
    etas = [propeller_efficiency(745.0, 0.4, 1.225, v)
            for v in np.linspace(0.1, 30.0, 60)]
    assert all(b > a for a, b in zip(etas, etas[1:]))


def test_thrust_available_static_point():
    p = NOMINAL.params
    t0 = thrust_available(p, ATM, 0.0, 0.0)
    assert t0 == pytest.approx(
        p.thrust_derating * static_thrust(p.engine_power_w, p.prop_diameter_m, 1.225),
        rel=1e-14)


def test_thrust_available_continuous_through_blend():
    p = NOMINAL.params
    below = thrust_available(p, ATM, 0.0, 2.0 - 1e-9)
    above = thrust_available(p, ATM, 0.0, 2.0 + 1e-9)
    assert below == pytest.approx(above, abs=1e-6)


def test_thrust_available_envelope_decreases_with_speed():
    p = NOMINAL.params
    ts = [thrust_available(p, ATM, 0.0, v) for v in np.linspace(0.0, 30.0, 121)]
    assert all(b <= a + 1e-12 for a, b in zip(ts, ts[1:]))


def test_thrust_available_symmetric_in_climb_sign():
    p = NOMINAL.params
    assert thrust_available(p, ATM, 5.0, 7.0) == thrust_available(p, ATM, 5.0, -7.0)


def test_accel_1d_longhand():
    p = VehicleParams()
    # descent with brake drag: drag acts upward
    drag = -0.5 * 1.225 * 0.05 * 2.5 * (-20.0) * 20.0
    want = (10.0 + drag) / 2.0 - GRAVITY_MPS2
    assert accel_1d(p, ATM, 0.0, -20.0, 10.0, drag_coeff=2.5) == pytest.approx(
        want, rel=1e-14)


def test_accel_1d_hover_and_free_fall():
    p = VehicleParams()
    assert accel_1d(p, ATM, 0.0, 0.0, p.weight_n) == pytest.approx(0.0, abs=1e-12)
    assert accel_1d(p, ATM, 0.0, 0.0, 0.0) == -GRAVITY_MPS2


# ---------------------------------------------------------------------------
# phase integrator
# ---------------------------------------------------------------------------

def test_integrate_phase_grid_and_stop():
    p = NOMINAL.params
    ts, hs, vs, accs, thrusts = integrate_phase(
        p, ATM, 0.0, 0.0, lambda t, h, v: thrust_available(p, ATM, h, v),
        lambda t, h, v: t >= 1.0 - 0.002)
    assert ts[0] == 0.0
    assert np.all(np.diff(ts) > 0.0)
    assert len(ts) == len(hs) == len(vs) == len(accs) == len(thrusts)
    assert ts[-1] == pytest.approx(1.0, abs=0.004)


def test_integrate_phase_refinement():
    """Halving dt ten-fold moves a fixed-time endpoint by far less than the
    0.0001 m acceptance bound (RK4 on a smooth policy)."""
    p = VehicleParams(drag_coeff=0.5)

    def policy(t, h, v):
        return thrust_available(p, ATM, h, v)

    def stop_for(dt):
        return lambda t, h, v: t >= 2.0 - dt / 2

    _, h_c, _, _, _ = integrate_phase(p, ATM, 0.0, 0.0, policy,
                                      stop_for(0.004), dt_s=0.004)
    _, h_f, _, _, _ = integrate_phase(p, ATM, 0.0, 0.0, policy,
                                      stop_for(0.0004), dt_s=0.0004)
    assert abs(h_c[-1] - h_f[-1]) < 1e-4
    assert h_c[-1] == pytest.approx(15.148600309118383, abs=1e-6)


def test_integrate_phase_timeout_names_constraint():
    p = VehicleParams()
    with pytest.raises(InfeasibleMissionError) as e:
        integrate_phase(p, ATM, 0.0, 0.0, lambda t, h, v: p.weight_n,
                        lambda t, h, v: False, max_time_s=1.0)
    assert e.value.violated_constraint == "phase_timeout"


def test_integrate_phase_rejects_bad_dt():
    with pytest.raises(ValueError):
        integrate_phase(VehicleParams(), ATM, 0.0, 0.0,
                        lambda t, h, v: 0.0, lambda t, h, v: True, dt_s=0.0)


# ---------------------------------------------------------------------------
# mission solver
# ---------------------------------------------------------------------------

def test_nominal_plan_pinned():
    plan = solve_mission(NOMINAL.params, NOMINAL.constraints, ATM)
    assert plan.t_switch1_s == pytest.approx(8.445622239535982, abs=1e-8)
    assert plan.t_switch2_s == pytest.approx(14.068732153136455, abs=1e-8)
    assert plan.t_stop_s == pytest.approx(16.048566013508495, abs=1e-8)
    assert plan.microgravity_duration_s == pytest.approx(5.623109913600473, abs=1e-8)
    assert plan.apogee_m == pytest.approx(121.92, abs=1e-6)
    assert plan.entry_altitude_m == pytest.approx(111.5872663712466, abs=1e-6)
    assert plan.entry_speed_mps == pytest.approx(14.235835222452843, abs=1e-6)
    assert plan.brake_altitude_m == pytest.approx(36.59690915792868, abs=1e-6)
    assert plan.brake_speed_mps == pytest.approx(-40.90803561175723, abs=1e-6)
    assert plan.stop_altitude_m == pytest.approx(10.0, abs=1e-6)


def test_plan_identities(nominal_plan):
    plan = nominal_plan
    g = GRAVITY_MPS2
    assert plan.microgravity_duration_s == plan.t_switch2_s - plan.t_switch1_s
    assert plan.apogee_m == pytest.approx(
        plan.entry_altitude_m + plan.entry_speed_mps ** 2 / (2 * g), rel=1e-12)
    assert plan.ceiling_m == 121.92
    assert plan.park_altitude_m == 10.0
    assert plan.meets_min_duration(NOMINAL.constraints)
    assert plan.max_climb_speed_mps == pytest.approx(
        float(np.max(plan.trajectory.hdot_mps)), rel=1e-12)
    assert plan.max_descent_speed_mps == pytest.approx(
        float(-np.min(plan.trajectory.hdot_mps)), rel=1e-12)


def test_plan_trajectory_structure(nominal_plan):
    tr = nominal_plan.trajectory
    assert np.all(np.diff(tr.t_s) > 0.0)
    # phases appear in flight order, each exactly once
    seen = []
    for ph in tr.phase:
        if not seen or seen[-1] != ph:
            seen.append(ph)
    assert seen == ["boost", "microgravity", "brake", "parked"]


def test_plan_coast_is_exactly_ballistic(nominal_plan):
    """During the coast the sampled profile must follow the closed-form
    parabola and the thrust must cancel drag exactly (hddot = -g)."""
    plan = nominal_plan
    tr = plan.trajectory
    g = GRAVITY_MPS2
    mask = tr.phase == "microgravity"
    tau = tr.t_s[mask] - plan.t_switch1_s
    h_analytic = (plan.entry_altitude_m + plan.entry_speed_mps * tau
                  - 0.5 * g * tau ** 2)
    assert np.allclose(tr.h_m[mask], h_analytic, atol=1e-9)
    assert np.allclose(tr.hddot_mps2[mask], -g, atol=1e-12)
    v = tr.hdot_mps[mask]
    drag_cancel = 0.5 * 1.225 * 0.05 * 1.0 * v * np.abs(v)
    assert np.allclose(tr.thrust_n[mask], drag_cancel, atol=1e-9)


def test_plan_apogee_never_exceeds_ceiling(nominal_plan):
    assert float(np.max(nominal_plan.trajectory.h_m)) <= 121.92 + 1e-6


def test_solver_deterministic():
    a = solve_mission(NOMINAL.params, NOMINAL.constraints, ATM)
    b = solve_mission(NOMINAL.params, NOMINAL.constraints, ATM)
    assert a.t_switch1_s == b.t_switch1_s
    assert a.t_switch2_s == b.t_switch2_s
    assert a.microgravity_duration_s == b.microgravity_duration_s
    assert np.array_equal(a.trajectory.h_m, b.trajectory.h_m)


@pytest.mark.parametrize("name", ["nominal", "featherweight"])
def test_solver_against_independent_grid_search(name):
    """The refined switch times must sit within one 0.004 s grid cell of an
    independently written brute-force grid solution."""
    pre = PRESETS[name]
    plan = solve_mission(pre.params, pre.constraints, ATM)
    model = oracles.Mission1D(
        mass=pre.params.mass_kg, area=pre.params.reference_area_m2,
        cd=pre.params.drag_coeff, cd_brake=pre.params.drag_coeff_brake,
        power=pre.params.engine_power_w, diameter=pre.params.prop_diameter_m,
        derating=pre.params.thrust_derating, rho=1.225)
    ref = oracles.grid_search_mission(model, pre.constraints.max_altitude_m,
                                      pre.constraints.park_altitude_m,
                                      pre.constraints.initial_launch_speed_mps)
    assert abs(plan.t_switch1_s - ref.t_switch1) <= 0.01
    assert abs(plan.t_switch2_s - ref.t_switch2) <= 0.01
    assert abs(plan.microgravity_duration_s - ref.duration) <= 0.01


def test_in_package_grid_search_brackets_solver(nominal_plan):
    grid = grid_search_mission(NOMINAL.params, NOMINAL.constraints, ATM)
    assert abs(grid.t_switch1_s - nominal_plan.t_switch1_s) <= 0.004
    assert abs(grid.t_switch2_s - nominal_plan.t_switch2_s) <= 0.008
    assert grid.apogee_m <= 121.92 + 1e-9


def test_drag_free_coast_matches_closed_form():
    """With zero drag the whole mission collapses to algebra; the sized coast
    duration must agree with the quadratic-formula solution to 1e-3 s."""
    p = VehicleParams(drag_coeff=0.0, drag_coeff_brake=0.0,
                      engine_power_w=745.0, thrust_gain_n_per_rad=84.0)
    c = MissionConstraints()
    plan = solve_mission(p, c, ATM)
    brake_acc = 0.7 * oracles.static_thrust(745.0, 0.4, 1.225) / 2.0 - GRAVITY_MPS2
    want = oracles.drag_free_coast_duration(
        plan.entry_altitude_m, plan.entry_speed_mps, c.park_altitude_m, brake_acc)
    assert plan.microgravity_duration_s == pytest.approx(want, abs=1e-3)


def test_duration_grows_with_power():
    durs = []
    for p_w in (745.0, 900.0, 1100.0):
        p = VehicleParams(engine_power_w=p_w, thrust_gain_n_per_rad=84.0)
        durs.append(solve_mission(p, MissionConstraints(), ATM)
                    .microgravity_duration_s)
    assert durs[0] < durs[1] < durs[2]


def test_duration_grows_with_air_brake():
    durs = []
    for cdb in (2.5, 3.5):
        p = VehicleParams(engine_power_w=745.0, thrust_gain_n_per_rad=84.0,
                          drag_coeff_brake=cdb)
        durs.append(solve_mission(p, MissionConstraints(), ATM)
                    .microgravity_duration_s)
    assert durs[0] < durs[1]


def test_hover_thrust_infeasibility():
    p = VehicleParams(engine_power_w=60.0)
    with pytest.raises(InfeasibleMissionError) as e:
        solve_mission(p, MissionConstraints(), ATM)
    assert e.value.violated_constraint == "hover_thrust"
    assert "weight" in e.value.message


def test_launch_speed_already_above_ceiling():
    c = MissionConstraints(initial_launch_speed_mps=50.0)
    with pytest.raises(InfeasibleMissionError) as e:
        solve_mission(NOMINAL.params, c, ATM)
    assert e.value.violated_constraint == "max_altitude"


def test_all_presets_feasible_with_margin():
    # curated presets must size and keep 5% envelope margin for tracking
    for pre in PRESETS.values():
        plan = solve_mission(pre.params, pre.constraints, ATM)
        assert plan.meets_min_duration(pre.constraints), pre.name
        envelope = (pre.params.thrust_gain_n_per_rad
                    * pre.params.max_deflection_rad * 1.35 * 4.0)
        need = float(np.max(plan.trajectory.thrust_n))
        assert envelope >= 1.05 * need, pre.name
