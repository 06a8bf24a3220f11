"""Rigid-body model: frames, quaternion algebra, force composition, and the
fixed-step 3(2) integrator's conservation behaviour."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from zerog.atmosphere import Atmosphere, GRAVITY_MPS2
from zerog.dynamics import (BodyForcesMoments, ROTOR_SPIN_SIGNS, SimState,
                            compose_forces, euler_from_quat, quat_from_euler,
                            quat_multiply, quat_normalize, quat_rotate,
                            quat_rotate_inverse, rotor_positions,
                            state_derivative, step)
from zerog.types import VehicleParams

ATM = Atmosphere()

angles = st.floats(min_value=-1.4, max_value=1.4)
yaws = st.floats(min_value=-3.0, max_value=3.0)
vecs = st.tuples(*[st.floats(min_value=-20.0, max_value=20.0)] * 3)


# ---------------------------------------------------------------------------
# quaternions
# ---------------------------------------------------------------------------

def test_quat_normalize():
    q = quat_normalize((2.0, 0.0, 0.0, 0.0))
    assert q == (1.0, 0.0, 0.0, 0.0)
    q = quat_normalize((1.0, 1.0, 1.0, 1.0))
    assert math.hypot(*q) == pytest.approx(1.0, abs=1e-15)


@given(angles, angles, yaws)
def test_euler_round_trip(phi, theta, psi):
    q = quat_from_euler(phi, theta, psi)
    assert math.sqrt(sum(c * c for c in q)) == pytest.approx(1.0, abs=1e-12)
    back = euler_from_quat(q)
    assert back[0] == pytest.approx(phi, abs=1e-10)
    assert back[1] == pytest.approx(theta, abs=1e-10)
    assert back[2] == pytest.approx(psi, abs=1e-10)


def test_from_euler_matches_axis_angle_oracle():
    for ang in (-1.2, -0.3, 0.0, 0.4, 1.5):
        assert quat_from_euler(ang, 0.0, 0.0) == pytest.approx(
            oracles.axis_angle_quat(1.0, 0.0, 0.0, ang), abs=1e-15)
        assert quat_from_euler(0.0, ang, 0.0) == pytest.approx(
            oracles.axis_angle_quat(0.0, 1.0, 0.0, ang), abs=1e-15)
        assert quat_from_euler(0.0, 0.0, ang) == pytest.approx(
            oracles.axis_angle_quat(0.0, 0.0, 1.0, ang), abs=1e-15)


@given(angles, angles, yaws, vecs)
def test_rotate_inverse_is_inverse(phi, theta, psi, v):
    q = quat_from_euler(phi, theta, psi)
    assert quat_rotate_inverse(q, quat_rotate(q, v)) == pytest.approx(v, abs=1e-9)
    # rotation preserves length
    assert math.hypot(*quat_rotate(q, v)) == pytest.approx(math.hypot(*v),
                                                           abs=1e-9)


@given(angles, angles, yaws, angles, angles, yaws, vecs)
def test_multiply_composes_rotations(a1, a2, a3, b1, b2, b3, v):
    qa = quat_from_euler(a1, a2, a3)
    qb = quat_from_euler(b1, b2, b3)
    lhs = quat_rotate(quat_multiply(qa, qb), v)
    rhs = quat_rotate(qa, quat_rotate(qb, v))
    assert lhs == pytest.approx(rhs, abs=1e-9)


def test_known_roll_rotation():
    # 90 deg roll: body +y maps to world-frame +z (z down), +z to -y
    q = quat_from_euler(math.pi / 2, 0.0, 0.0)
    assert quat_rotate(q, (0.0, 1.0, 0.0)) == pytest.approx((0.0, 0.0, 1.0),
                                                            abs=1e-12)
    assert quat_rotate(q, (0.0, 0.0, 1.0)) == pytest.approx((0.0, -1.0, 0.0),
                                                            abs=1e-12)


# ---------------------------------------------------------------------------
# state container
# ---------------------------------------------------------------------------

def test_at_rest_and_altitude():
    s = SimState.at_rest(z_m=30.0)
    assert s.altitude_m == 30.0
    assert s.euler_angles() == pytest.approx((0.0, 0.0, 0.0), abs=1e-15)
    assert s.world_velocity() == (0.0, 0.0, 0.0)


def test_world_velocity_sign():
    # body z axis points down at level attitude: positive w is descent
    s = SimState(0, 0, 50, 1, 0, 0, 0, 3.0, -1.0, 2.0, 0, 0, 0)
    assert s.world_velocity() == pytest.approx((3.0, -1.0, -2.0), abs=1e-15)


def test_rotor_layout():
    p = VehicleParams()
    assert rotor_positions(p) == ((0.2, 0.2), (-0.2, 0.2),
                                  (-0.2, -0.2), (0.2, -0.2))
    assert ROTOR_SPIN_SIGNS == (1.0, -1.0, 1.0, -1.0)


# ---------------------------------------------------------------------------
# force composition
# ---------------------------------------------------------------------------

def test_hover_balance():
    p = VehicleParams()
    s = SimState.at_rest(z_m=20.0)
    f = compose_forces(s, p, ATM, (p.weight_n / 4,) * 4, (0.0,) * 4)
    assert f.fx_n == pytest.approx(0.0, abs=1e-12)
    assert f.fy_n == pytest.approx(0.0, abs=1e-12)
    assert f.fz_n == pytest.approx(0.0, abs=1e-12)
    assert (f.mx_nm, f.my_nm, f.mz_nm) == (0.0, 0.0, 0.0)
    assert f.specific_force_mps2(p.mass_kg) == pytest.approx(
        (0.0, 0.0, -GRAVITY_MPS2), abs=1e-12)


def test_gravity_resolves_by_attitude():
    p = VehicleParams()
    for phi, theta in ((0.3, -0.2), (-0.7, 0.5), (0.0, 1.1)):
        q = quat_from_euler(phi, theta, 0.8)
        s = SimState(0, 0, 50, *q, 0, 0, 0, 0, 0, 0)
        f = compose_forces(s, p, ATM, (0.0,) * 4, (0.0,) * 4)
        mg = p.mass_kg * GRAVITY_MPS2
        assert f.grav_fx_n == pytest.approx(-mg * math.sin(theta), abs=1e-9)
        assert f.grav_fy_n == pytest.approx(mg * math.sin(phi) * math.cos(theta),
                                            abs=1e-9)
        assert f.grav_fz_n == pytest.approx(mg * math.cos(phi) * math.cos(theta),
                                            abs=1e-9)


def test_roll_moment_from_thrust_pairs():
    p = VehicleParams()
    s = SimState.at_rest(z_m=10.0)
    t0, d = 5.0, 0.5
    f = compose_forces(s, p, ATM, (t0 - d, t0 - d, t0 + d, t0 + d), (0.0,) * 4)
    assert f.mx_nm == pytest.approx(4 * p.arm_y_m * d, rel=1e-12)
    assert f.my_nm == pytest.approx(0.0, abs=1e-12)
    assert f.fz_n == pytest.approx(p.weight_n - 4 * t0, rel=1e-12)


def test_pitch_moment_from_thrust_pairs():
    p = VehicleParams()
    s = SimState.at_rest(z_m=10.0)
    t0, d = 5.0, 0.5
    f = compose_forces(s, p, ATM, (t0 + d, t0 - d, t0 - d, t0 + d), (0.0,) * 4)
    assert f.my_nm == pytest.approx(4 * p.arm_x_m * d, rel=1e-12)
    assert f.mx_nm == pytest.approx(0.0, abs=1e-12)


def test_yaw_moment_is_torque_sum():
    p = VehicleParams()
    s = SimState.at_rest(z_m=10.0)
    f = compose_forces(s, p, ATM, (1.0,) * 4, (0.02, -0.01, 0.03, -0.015))
    assert f.mz_nm == pytest.approx(0.025, rel=1e-12)


def test_drag_opposes_airspeed():
    p = VehicleParams()
    s = SimState(0, 0, 50, 1, 0, 0, 0, 10.0, 0.0, 0.0, 0, 0, 0)
    f = compose_forces(s, p, ATM, (0.0,) * 4, (0.0,) * 4)
    assert f.fx_n == pytest.approx(-0.5 * 1.225 * 0.05 * 1.0 * 100.0, rel=1e-12)
    # matching wind cancels the airspeed entirely
    f2 = compose_forces(s, p, ATM, (0.0,) * 4, (0.0,) * 4,
                        wind_world_mps=(10.0, 0.0, 0.0))
    assert f2.fx_n == pytest.approx(0.0, abs=1e-12)


def test_updraft_pushes_up_in_body_frame():
    p = VehicleParams()
    s = SimState.at_rest(z_m=50.0)
    f = compose_forces(s, p, ATM, (0.0,) * 4, (0.0,) * 4,
                       wind_world_mps=(0.0, 0.0, 5.0))
    drag = -0.5 * 1.225 * 0.05 * 1.0 * 25.0
    assert f.fz_n - f.grav_fz_n == pytest.approx(drag, rel=1e-12)


def test_drag_coeff_override():
    p = VehicleParams()
    s = SimState(0, 0, 50, 1, 0, 0, 0, 8.0, 0.0, 0.0, 0, 0, 0)
    base = compose_forces(s, p, ATM, (0.0,) * 4, (0.0,) * 4)
    brake = compose_forces(s, p, ATM, (0.0,) * 4, (0.0,) * 4,
                           drag_coeff=p.drag_coeff_brake)
    assert brake.fx_n == pytest.approx(2.5 * base.fx_n, rel=1e-12)


# ---------------------------------------------------------------------------
# derivative
# ---------------------------------------------------------------------------

def test_translational_terms():
    p = VehicleParams()
    s = SimState(0, 0, 50, 1, 0, 0, 0, 1.0, 2.0, 3.0, 0.1, 0.2, 0.3)
    f = BodyForcesMoments(4.0, -2.0, 6.0, 0, 0, 0, 0, 0, 0)
    d = state_derivative(s, f, p)
    m = p.mass_kg
    assert d[7] == pytest.approx(2.0 * 0.3 - 3.0 * 0.2 + 4.0 / m, abs=1e-12)
    assert d[8] == pytest.approx(3.0 * 0.1 - 1.0 * 0.3 + -2.0 / m, abs=1e-12)
    assert d[9] == pytest.approx(1.0 * 0.2 - 2.0 * 0.1 + 6.0 / m, abs=1e-12)


def test_gyroscopic_terms():
    p = VehicleParams(inertia_yy_kgm2=0.03)
    s = SimState(0, 0, 50, 1, 0, 0, 0, 0, 0, 0, 2.0, 1.0, 0.5)
    f = BodyForcesMoments(0, 0, 0, 0, 0, 0, 0, 0, 0)
    d = state_derivative(s, f, p)
    ixx, iyy, izz = 0.022, 0.03, 0.038
    assert d[10] == pytest.approx(1.0 * 0.5 * (iyy - izz) / ixx, abs=1e-12)
    assert d[11] == pytest.approx(2.0 * 0.5 * (izz - ixx) / iyy, abs=1e-12)
    assert d[12] == pytest.approx(2.0 * 1.0 * (ixx - iyy) / izz, abs=1e-12)


def test_quaternion_derivative_is_half_product():
    q = quat_from_euler(0.4, -0.3, 1.1)
    s = SimState(0, 0, 50, *q, 0, 0, 0, 0.7, -0.4, 0.9)
    f = BodyForcesMoments(0, 0, 0, 0, 0, 0, 0, 0, 0)
    d = state_derivative(s, f, VehicleParams())
    want = quat_multiply(q, (0.0, 0.7, -0.4, 0.9))
    assert d[3:7] == pytest.approx(tuple(0.5 * c for c in want), abs=1e-15)


def test_position_derivative_is_world_velocity():
    q = quat_from_euler(0.2, 0.1, -0.5)
    s = SimState(0, 0, 50, *q, 3.0, -1.0, 2.0, 0, 0, 0)
    d = state_derivative(s, BodyForcesMoments(0, 0, 0, 0, 0, 0, 0, 0, 0),
                         VehicleParams())
    assert d[0:3] == pytest.approx(s.world_velocity(), abs=1e-15)


# ---------------------------------------------------------------------------
# integrator
# ---------------------------------------------------------------------------

def _ballistic_deriv(p):
    def deriv(s):
        f = compose_forces(s, p, ATM, (0.0,) * 4, (0.0,) * 4)
        return state_derivative(s, f, p)
    return deriv


def test_free_fall_kinematics():
    # 250 steps of 0.004 s = 1 s of drag-free fall
    p = VehicleParams(drag_coeff=0.0, drag_coeff_brake=0.0)
    s = SimState.at_rest(z_m=100.0)
    deriv = _ballistic_deriv(p)
    for _ in range(250):
        s, _ = step(s, deriv, 0.004)
    g = GRAVITY_MPS2
    assert s.z_m - 100.0 == pytest.approx(-0.5 * g, abs=1e-9)
    assert s.world_velocity()[2] == pytest.approx(-g, abs=1e-9)
    assert s.w_mps == pytest.approx(g, abs=1e-9)  # body z is down


def test_quaternion_norm_stays_unit():
    p = VehicleParams(inertia_yy_kgm2=0.03)
    fm = BodyForcesMoments(0, 0, 0, 0.01, -0.02, 0.005, 0, 0, 0)
    s = SimState(0, 0, 100, 1, 0, 0, 0, 0, 0, 0, 2.0, 1.0, 0.5)
    worst = 0.0
    for _ in range(2000):
        s, _ = step(s, lambda st: state_derivative(st, fm, p), 0.004)
        n = math.sqrt(s.qw ** 2 + s.qx ** 2 + s.qy ** 2 + s.qz ** 2)
        worst = max(worst, abs(n - 1.0))
    assert worst < 1e-12


def test_conservation_in_ballistic_tumble():
    """Drag-free tumbling fall over 5 s: total energy within 1e-6 relative,
    inertial angular momentum within 1e-8."""
    p = VehicleParams(drag_coeff=0.0, drag_coeff_brake=0.0)
    s = SimState(0, 0, 100, 1, 0, 0, 0, 1.0, -0.5, 0.3, 2.0, 1.0, 0.5)
    inertia = np.diag([p.inertia_xx_kgm2, p.inertia_yy_kgm2, p.inertia_zz_kgm2])
    g = GRAVITY_MPS2

    def energy(st):
        vw = st.world_velocity()
        w = np.array([st.p_radps, st.q_radps, st.r_radps])
        return (0.5 * p.mass_kg * sum(v * v for v in vw)
                + 0.5 * w @ inertia @ w + p.mass_kg * g * st.z_m)

    def ang_mom(st):
        w = np.array([st.p_radps, st.q_radps, st.r_radps])
        return np.array(quat_rotate((st.qw, st.qx, st.qy, st.qz),
                                    tuple(inertia @ w)))

    deriv = _ballistic_deriv(p)
    e0 = energy(s)
    l0 = np.linalg.norm(ang_mom(s))
    for _ in range(1250):
        s, _ = step(s, deriv, 0.004)
        assert abs(energy(s) - e0) / abs(e0) < 1e-6
        assert abs(np.linalg.norm(ang_mom(s)) - l0) / l0 < 1e-8


def test_specific_force_zero_in_ballistic_flight():
    p = VehicleParams(drag_coeff=0.0, drag_coeff_brake=0.0)
    s = SimState(0, 0, 80, *quat_from_euler(0.2, -0.1, 0.3), 4.0, 1.0, -2.0,
                 0.5, 0.2, -0.3)
    f = compose_forces(s, p, ATM, (0.0,) * 4, (0.0,) * 4)
    assert f.specific_force_mps2(p.mass_kg) == pytest.approx((0, 0, 0),
                                                             abs=1e-12)


def test_constant_rate_spin_matches_axis_angle():
    p = VehicleParams()  # ixx = iyy so a pure roll spin stays pure
    s = SimState(0, 0, 50, 1, 0, 0, 0, 0, 0, 0, 1.0, 0.0, 0.0)
    fm = BodyForcesMoments(0, 0, 0, 0, 0, 0, 0, 0, 0)
    for k in range(500):
        s, _ = step(s, lambda st: state_derivative(st, fm, p), 0.004)
    want = oracles.axis_angle_quat(1.0, 0.0, 0.0, 2.0)
    assert (s.qw, s.qx, s.qy, s.qz) == pytest.approx(want, abs=1e-9)
    assert s.p_radps == pytest.approx(1.0, abs=1e-12)


def test_convergence_order_at_least_three():
    p = VehicleParams(inertia_yy_kgm2=0.03)
    fm = BodyForcesMoments(0.5, -0.3, 0.2, 0.01, -0.02, 0.005, 0, 0, 0)

    def endpoint(dt, t_end=1.0):
        s = SimState(0, 0, 100, 1, 0, 0, 0, 0.3, -0.2, 0.1, 2.0, 1.0, 0.5)
        for _ in range(round(t_end / dt)):
            s, _ = step(s, lambda st: state_derivative(st, fm, p), dt)
        return np.array(s)

    ref = endpoint(0.0002)
    e1 = float(np.max(np.abs(endpoint(0.004) - ref)))
    e2 = float(np.max(np.abs(endpoint(0.002) - ref)))
    order = math.log2(e1 / e2)
    assert e1 < 1e-7
    assert order >= 2.9


def test_step_error_estimate_shrinks_with_dt():
    p = VehicleParams(inertia_yy_kgm2=0.03)
    fm = BodyForcesMoments(0.5, -0.3, 0.2, 0.01, -0.02, 0.005, 0, 0, 0)
    s = SimState(0, 0, 100, 1, 0, 0, 0, 0.3, -0.2, 0.1, 2.0, 1.0, 0.5)
    _, err_c = step(s, lambda st: state_derivative(st, fm, p), 0.004)
    _, err_f = step(s, lambda st: state_derivative(st, fm, p), 0.001)
    assert 0.0 < err_f < err_c
