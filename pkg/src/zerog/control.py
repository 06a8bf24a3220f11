"""Flight controllers: PID primitive, filters, attitude/altitude cascades.

All controllers are explicit-state and advance with the caller's fixed step,
so runs are bit-reproducible. Angles are radians in the NED navigation frame
used by the dynamics module; normalized outputs live in the mixer's [-1, 1]
command space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .numerics import clamp


def wrap_angle(a: float) -> float:
    """Wrap to (-pi, pi]."""
    a = math.fmod(a + math.pi, 2.0 * math.pi)
    if a <= 0.0:
        a += 2.0 * math.pi
    return a - math.pi


# ---------------------------------------------------------------------------
# PID
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PidGains:
    kp: float
    ki: float = 0.0
    kd: float = 0.0
    out_min: float = -math.inf
    out_max: float = math.inf


@dataclass
class PidState:
    integral: float = 0.0
    prev_error: float = 0.0
    prev_measurement: float = 0.0
    initialized: bool = False

    def reset(self) -> None:
        self.integral = 0.0
        self.prev_error = 0.0
        self.prev_measurement = 0.0
        self.initialized = False


def pid_update(gains: PidGains, state: PidState, error: float,
               measurement: float, dt_s: float) -> float:
    """One PID step: trapezoidal integral, derivative on measurement,
    conditional integration when the output saturates."""
    if dt_s <= 0.0:
        raise ValueError("pid_update: dt_s must be > 0")
    if not state.initialized:
        state.prev_error = 0.0
        state.prev_measurement = measurement
        state.initialized = True
    candidate = state.integral + 0.5 * (error + state.prev_error) * dt_s
    deriv = -(measurement - state.prev_measurement) / dt_s
    out = gains.kp * error + gains.ki * candidate + gains.kd * deriv
    pushing_past_rail = ((out > gains.out_max and error > 0.0)
                         or (out < gains.out_min and error < 0.0))
    if pushing_past_rail:
        out = gains.kp * error + gains.ki * state.integral + gains.kd * deriv
    else:
        state.integral = candidate
    state.prev_error = error
    state.prev_measurement = measurement
    return clamp(out, gains.out_min, gains.out_max)


# ---------------------------------------------------------------------------
# low-pass filter (two exact first-order stages, unity DC gain)
# ---------------------------------------------------------------------------

@dataclass
class LowPass2:
    cutoff_hz: float = 8.0
    y1: float = 0.0
    y2: float = 0.0
    initialized: bool = False

    def update(self, x: float, dt_s: float) -> float:
        if dt_s <= 0.0:
            raise ValueError("LowPass2.update: dt_s must be > 0")
        if not self.initialized:
            self.y1 = x
            self.y2 = x
            self.initialized = True
            return x
        a = 1.0 - math.exp(-2.0 * math.pi * self.cutoff_hz * dt_s)
        self.y1 += a * (x - self.y1)
        self.y2 += a * (self.y1 - self.y2)
        return self.y2


# ---------------------------------------------------------------------------
# attitude cascade: angle P loops feeding body-rate PIDs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AttitudeGains:
    roll_angle_kp: float = 8.0
    pitch_angle_kp: float = 8.0
    yaw_angle_kp: float = 4.0
    roll_rate: PidGains = PidGains(kp=0.12, ki=0.05, kd=0.002,
                                   out_min=-1.0, out_max=1.0)
    pitch_rate: PidGains = PidGains(kp=0.12, ki=0.05, kd=0.002,
                                    out_min=-1.0, out_max=1.0)
    yaw_rate: PidGains = PidGains(kp=0.10, ki=0.02, kd=0.0,
                                  out_min=-1.0, out_max=1.0)
    max_rate_radps: float = 6.0


@dataclass
class AttitudeController:
    gains: AttitudeGains = field(default_factory=AttitudeGains)
    roll_state: PidState = field(default_factory=PidState)
    pitch_state: PidState = field(default_factory=PidState)
    yaw_state: PidState = field(default_factory=PidState)

    def reset(self) -> None:
        self.roll_state.reset()
        self.pitch_state.reset()
        self.yaw_state.reset()

    def update(self, roll: float, pitch: float, yaw: float,
               p: float, q: float, r: float,
               roll_sp: float, pitch_sp: float, yaw_sp: float,
               dt_s: float) -> tuple[float, float, float]:
        """Normalized (roll, pitch, yaw) moment commands in [-1, 1]."""
        g = self.gains
        lim = g.max_rate_radps
        p_sp = clamp(g.roll_angle_kp * wrap_angle(roll_sp - roll), -lim, lim)
        q_sp = clamp(g.pitch_angle_kp * wrap_angle(pitch_sp - pitch), -lim, lim)
        r_sp = clamp(g.yaw_angle_kp * wrap_angle(yaw_sp - yaw), -lim, lim)
        u_roll = pid_update(g.roll_rate, self.roll_state, p_sp - p, p, dt_s)
        u_pitch = pid_update(g.pitch_rate, self.pitch_state, q_sp - q, q, dt_s)
        u_yaw = pid_update(g.yaw_rate, self.yaw_state, r_sp - r, r, dt_s)
        return u_roll, u_pitch, u_yaw


# ---------------------------------------------------------------------------
# vertical specific-force trim
# ---------------------------------------------------------------------------

@dataclass
class VerticalAccelController:
    """Trims normalized collective thrust so the filtered body-z specific
    force tracks a target; the free-fall target is 0. Works on top of a
    feed-forward, so output limits are a correction budget, not authority.
    """

    gains: PidGains = PidGains(kp=0.04, ki=0.35, kd=0.0,
                               out_min=-0.08, out_max=0.08)
    filter: LowPass2 = field(default_factory=LowPass2)
    state: PidState = field(default_factory=PidState)

    def reset(self) -> None:
        self.filter = LowPass2(cutoff_hz=self.filter.cutoff_hz)
        self.state.reset()

    def update(self, specific_force_z_mps2: float, target_mps2: float,
               dt_s: float) -> float:
        filtered = self.filter.update(specific_force_z_mps2, dt_s)
        # body z points down, thrust acts along -z_B: a too-negative reading
        # means too much thrust, so the error sign flips once here
        err = filtered - target_mps2
        return pid_update(self.gains, self.state, err, filtered, dt_s)


# ---------------------------------------------------------------------------
# lateral position hold (PD to tilt setpoints)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PositionHoldGains:
    kp: float = 0.6
    kd: float = 0.9
    tilt_limit_rad: float = 0.3


def position_hold_tilts(gains: PositionHoldGains,
                        x_err_n_m: float, y_err_n_m: float,
                        vx_n_mps: float, vy_n_mps: float,
                        gravity_mps2: float) -> tuple[float, float]:
    """Roll/pitch setpoints steering the vehicle toward a hold point.

    Errors and velocities are in the NED navigation frame with yaw held at
    zero. Small-angle statics: accel_x = -g*pitch, accel_y = +g*roll.
    """
    ax = gains.kp * x_err_n_m - gains.kd * vx_n_mps
    ay = gains.kp * y_err_n_m - gains.kd * vy_n_mps
    lim = gains.tilt_limit_rad
    pitch_sp = clamp(-ax / gravity_mps2, -lim, lim)
    roll_sp = clamp(ay / gravity_mps2, -lim, lim)
    return roll_sp, pitch_sp
