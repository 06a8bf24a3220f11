"""Rigid-body six-degree-of-freedom dynamics.

FRAME CONVENTIONS -- the single authoritative statement for every
sign-sensitive piece of this package; tests reference this docstring.

* World frame W: right-handed, x_E/y_E horizontal, z_E UP. Positions and
  altitudes are expressed in W (altitude h = z_E above the launch datum).
* Navigation frame N (internal): x_N = x_E, y_N = y_E, z_N = -z_E (down).
  The attitude quaternion q (scalar-first, unit norm) rotates body vectors
  into N. Identity quaternion = level attitude, nose along +x_E.
* Body frame B: x forward, y right, z DOWN. Rotor thrust acts along -z_B.
* Euler angles are 3-2-1 (yaw psi about z_N, pitch theta, roll phi); at the
  pitch singularity (|theta| = pi/2) yaw is reported as 0 by convention.
* Gravity is (0, 0, +g) in N, equivalently (0, 0, -g) in W.
* Velocity bookkeeping: world velocity = R(q) applied to body velocity with
  the z component negated, i.e. zdot_E = -(R(q) (u,v,w))_z.

Rotor geometry (indices match the physical allocation matrix sign pattern):

  rotor 1 (+arm_x, +arm_y)  spin +      rotor 2 (-arm_x, +arm_y)  spin -
  rotor 3 (-arm_x, -arm_y)  spin +      rotor 4 (+arm_x, -arm_y)  spin -

A rotor's drag torque about z_B is spin_sign * K_D * deflection; its thrust
contributes roll moment -y_i*T_i and pitch moment +x_i*T_i.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple, Sequence

from .atmosphere import GRAVITY_MPS2, Atmosphere, density
from .types import VehicleParams

SIM_DT_S = 0.004  # fixed closed-loop step

# spin signs per rotor index, fixed by the allocation matrix sign pattern
ROTOR_SPIN_SIGNS = (1.0, -1.0, 1.0, -1.0)


def rotor_positions(params: VehicleParams) -> tuple[tuple[float, float], ...]:
    """Body-frame (x, y) of the four rotors, indexed as documented above."""
    lx, ly = params.arm_x_m, params.arm_y_m
    return ((lx, ly), (-lx, ly), (-lx, -ly), (lx, -ly))


# ---------------------------------------------------------------------------
# quaternion helpers (scalar-first, body -> N)
# ---------------------------------------------------------------------------

def quat_normalize(q: Sequence[float]) -> tuple[float, float, float, float]:
    w, x, y, z = q
    n = math.sqrt(w * w + x * x + y * y + z * z)
    return (w / n, x / n, y / n, z / n)


def quat_multiply(a: Sequence[float],
                  b: Sequence[float]) -> tuple[float, float, float, float]:
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return (aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw)


def quat_rotate(q: Sequence[float],
                v: Sequence[float]) -> tuple[float, float, float]:
    """Rotate a body-frame vector into N."""
    w, x, y, z = q
    vx, vy, vz = v
    # R(q) v, expanded
    return (
        (1.0 - 2.0 * (y * y + z * z)) * vx + 2.0 * (x * y - w * z) * vy
        + 2.0 * (x * z + w * y) * vz,
        2.0 * (x * y + w * z) * vx + (1.0 - 2.0 * (x * x + z * z)) * vy
        + 2.0 * (y * z - w * x) * vz,
        2.0 * (x * z - w * y) * vx + 2.0 * (y * z + w * x) * vy
        + (1.0 - 2.0 * (x * x + y * y)) * vz,
    )


def quat_rotate_inverse(q: Sequence[float],
                        v: Sequence[float]) -> tuple[float, float, float]:
    """Rotate an N-frame vector into the body frame."""
    w, x, y, z = q
    return quat_rotate((w, -x, -y, -z), v)


def quat_from_euler(phi: float, theta: float,
                    psi: float) -> tuple[float, float, float, float]:
    """3-2-1 Euler angles to quaternion."""
    cph, sph = math.cos(phi / 2.0), math.sin(phi / 2.0)
    cth, sth = math.cos(theta / 2.0), math.sin(theta / 2.0)
    cps, sps = math.cos(psi / 2.0), math.sin(psi / 2.0)
    return (cps * cth * cph + sps * sth * sph,
            cps * cth * sph - sps * sth * cph,
            cps * sth * cph + sps * cth * sph,
            sps * cth * cph - cps * sth * sph)


def euler_from_quat(q: Sequence[float]) -> tuple[float, float, float]:
    """Quaternion to 3-2-1 Euler angles (phi, theta, psi).

    At the pitch singularity only phi +/- psi is observable; psi is reported
    as 0 and phi carries the full twist.
    """
    w, x, y, z = q
    s = 2.0 * (w * y - x * z)
    if abs(s) >= 1.0 - 1e-12:
        theta = math.copysign(math.pi / 2.0, s)
        r12 = 2.0 * (x * y - w * z)
        r13 = 2.0 * (x * z + w * y)
        if s > 0.0:
            phi = math.atan2(r12, r13)
        else:
            phi = math.atan2(-r12, -r13)
        return phi, theta, 0.0
    theta = math.asin(s)
    phi = math.atan2(2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y))
    psi = math.atan2(2.0 * (x * y + w * z), 1.0 - 2.0 * (y * y + z * z))
    return phi, theta, psi


# ---------------------------------------------------------------------------
# state and forces
# ---------------------------------------------------------------------------

class SimState(NamedTuple):
    """13-state rigid-body state. See module docstring for frames."""

    x_m: float           # world position, z up
    y_m: float
    z_m: float
    qw: float            # attitude quaternion body -> N, scalar first
    qx: float
    qy: float
    qz: float
    u_mps: float         # body-frame velocity
    v_mps: float
    w_mps: float
    p_radps: float       # body rates
    q_radps: float
    r_radps: float

    @property
    def altitude_m(self) -> float:
        return self.z_m

    def euler_angles(self) -> tuple[float, float, float]:
        return euler_from_quat((self.qw, self.qx, self.qy, self.qz))

    def world_velocity(self) -> tuple[float, float, float]:
        vn = quat_rotate((self.qw, self.qx, self.qy, self.qz),
                         (self.u_mps, self.v_mps, self.w_mps))
        return (vn[0], vn[1], -vn[2])

    @staticmethod
    def at_rest(x_m: float = 0.0, y_m: float = 0.0, z_m: float = 0.0) -> "SimState":
        return SimState(x_m, y_m, z_m, 1.0, 0.0, 0.0, 0.0,
                        0.0, 0.0, 0.0, 0.0, 0.0, 0.0)


def euler_angles(state: SimState) -> tuple[float, float, float]:
    """3-2-1 Euler angles of a state (phi, theta, psi)."""
    return state.euler_angles()


class BodyForcesMoments(NamedTuple):
    """Total body-frame forces/moments; gravity included and also reported
    separately so the accelerometer-equivalent specific force is exact."""

    fx_n: float
    fy_n: float
    fz_n: float
    mx_nm: float
    my_nm: float
    mz_nm: float
    grav_fx_n: float
    grav_fy_n: float
    grav_fz_n: float

    def specific_force_mps2(self, mass_kg: float) -> tuple[float, float, float]:
        """(F_total - F_gravity)/m in body axes: what an accelerometer reads."""
        return ((self.fx_n - self.grav_fx_n) / mass_kg,
                (self.fy_n - self.grav_fy_n) / mass_kg,
                (self.fz_n - self.grav_fz_n) / mass_kg)


def compose_forces(state: SimState, params: VehicleParams,
                   atmosphere: Atmosphere,
                   thrusts_n: Sequence[float],
                   drag_torques_nm: Sequence[float],
                   wind_world_mps: tuple[float, float, float] = (0.0, 0.0, 0.0),
                   drag_coeff: float | None = None) -> BodyForcesMoments:
    """Sum gravity, rotor thrust, and aerodynamic drag into body axes.

    thrusts_n are per-rotor thrust magnitudes along -z_B (negative values
    allowed: variable pitch produces reverse thrust). drag_torques_nm are
    per-rotor signed torques about z_B (caller applies spin signs). Drag
    acts on the body-relative airspeed including wind (given in W, z up).
    """
    q = (state.qw, state.qx, state.qy, state.qz)
    m = params.mass_kg
    cd = params.drag_coeff if drag_coeff is None else drag_coeff

    # gravity: (0, 0, +mg) in N, rotated into body axes
    gfx, gfy, gfz = quat_rotate_inverse(q, (0.0, 0.0, m * GRAVITY_MPS2))

    # propulsion: thrust along -z_B, moments from the arm geometry
    t1, t2, t3, t4 = thrusts_n
    thrust_total = t1 + t2 + t3 + t4
    mx = 0.0
    my = 0.0
    for (rx, ry), t in zip(rotor_positions(params), thrusts_n):
        mx += -ry * t
        my += rx * t
    mz = sum(drag_torques_nm)

    # aerodynamic drag on body-relative airspeed
    wind_n = (wind_world_mps[0], wind_world_mps[1], -wind_world_mps[2])
    wbx, wby, wbz = quat_rotate_inverse(q, wind_n)
    ax = state.u_mps - wbx
    ay = state.v_mps - wby
    az = state.w_mps - wbz
    speed = math.sqrt(ax * ax + ay * ay + az * az)
    rho = density(atmosphere, state.z_m)
    k = -0.5 * rho * params.reference_area_m2 * cd * speed
    dx, dy, dz = k * ax, k * ay, k * az

    return BodyForcesMoments(
        fx_n=gfx + dx,
        fy_n=gfy + dy,
        fz_n=gfz + dz - thrust_total,
        mx_nm=mx, my_nm=my, mz_nm=mz,
        grav_fx_n=gfx, grav_fy_n=gfy, grav_fz_n=gfz)


def state_derivative(state: SimState, forces: BodyForcesMoments,
                     params: VehicleParams) -> tuple[float, ...]:
    """Newton-Euler derivative of the 13-state vector.

    Rotational coupling terms follow the body-axis equations (udot = vr - wq
    + Fx/m and cyclic, with gravity already inside the force vector), and the
    rate equations use the diagonal inertia gyroscopic form.
    """
    qw, qx, qy, qz = state.qw, state.qx, state.qy, state.qz
    u, v, w = state.u_mps, state.v_mps, state.w_mps
    p, qr_, r = state.p_radps, state.q_radps, state.r_radps
    m = params.mass_kg
    ixx, iyy, izz = (params.inertia_xx_kgm2, params.inertia_yy_kgm2,
                     params.inertia_zz_kgm2)

    vn = quat_rotate((qw, qx, qy, qz), (u, v, w))

    udot = v * r - w * qr_ + forces.fx_n / m
    vdot = w * p - u * r + forces.fy_n / m
    wdot = u * qr_ - v * p + forces.fz_n / m

    pdot = (qr_ * r * (iyy - izz) + forces.mx_nm) / ixx
    qdot = (p * r * (izz - ixx) + forces.my_nm) / iyy
    rdot = (p * qr_ * (ixx - iyy) + forces.mz_nm) / izz

    # qdot = 1/2 q x (0, p, q, r)
    dqw = 0.5 * (-qx * p - qy * qr_ - qz * r)
    dqx = 0.5 * (qw * p + qy * r - qz * qr_)
    dqy = 0.5 * (qw * qr_ - qx * r + qz * p)
    dqz = 0.5 * (qw * r + qx * qr_ - qy * p)

    return (vn[0], vn[1], -vn[2],
            dqw, dqx, dqy, dqz,
            udot, vdot, wdot,
            pdot, qdot, rdot)


# ---------------------------------------------------------------------------
# fixed-step Bogacki-Shampine 3(2)
# ---------------------------------------------------------------------------

# Butcher tableau: c = (0, 1/2, 3/4, 1); third-order weights b, embedded
# second-order weights bh; the propagated solution is third order and the
# last stage sits at the step end (FSAL position).
_B1, _B2, _B3 = 2.0 / 9.0, 1.0 / 3.0, 4.0 / 9.0
_E1, _E2, _E3, _E4 = (2.0 / 9.0 - 7.0 / 24.0, 1.0 / 3.0 - 1.0 / 4.0,
                      4.0 / 9.0 - 1.0 / 3.0, -1.0 / 8.0)

DerivFn = Callable[[SimState], tuple[float, ...]]


def step(state: SimState, deriv: DerivFn, dt: float) -> tuple[SimState, float]:
    """One Bogacki-Shampine 3(2) step at fixed dt.

    deriv(state) -> 13-component derivative; forces are re-evaluated at each
    of the four stages. Returns the third-order update (quaternion
    renormalized) and the infinity norm of the embedded 3rd/2nd-order
    difference as an error estimate.
    """
    k1 = deriv(state)
    s2 = SimState(*(yi + dt * 0.5 * ki for yi, ki in zip(state, k1)))
    k2 = deriv(s2)
    s3 = SimState(*(yi + dt * 0.75 * ki for yi, ki in zip(state, k2)))
    k3 = deriv(s3)
    ynew = [yi + dt * (_B1 * a + _B2 * b + _B3 * c)
            for yi, a, b, c in zip(state, k1, k2, k3)]
    k4 = deriv(SimState(*ynew))
    err = max(abs(dt * (_E1 * a + _E2 * b + _E3 * c + _E4 * d))
              for a, b, c, d in zip(k1, k2, k3, k4))
    qw, qx, qy, qz = quat_normalize(ynew[3:7])
    ynew[3], ynew[4], ynew[5], ynew[6] = qw, qx, qy, qz
    return SimState(*ynew), err
