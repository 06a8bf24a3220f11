"""Closed-loop parabolic mission simulation.

Wires the planner, mission sequencing, controllers, actuator models, fault
monitor, and geofence around the rigid-body integrator. Per step, in order:
sense, advance the mission mode, update the fault monitor with the previous
step's commands, classify against the geofence, run the mode's controllers,
apply a latched power cut if any, actuate the servos, integrate, log.

The executor tracks the plan rather than re-deriving thrust limits: during
ascent and brake it feeds the planned thrust forward and closes a PID around
planned altitude and climb rate, and during free fall it feeds the planned
drag-cancellation thrust forward with a specific-force trim loop on top.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from .actuation import (ActuatorCommand, MIX_ROW_FOR_ROTOR, ServoModel,
                        ThrustCurve, default_thrust_curve, inverse_deflection,
                        mix, thrust_from_deflection, tracking_command,
                        servo_step)
from .atmosphere import Atmosphere, density, gravity
from .autonomy import (ABORT_BRAKE_RECOVER, MissionMode, MissionStateMachine)
from .control import (AttitudeController, PositionHoldGains,
                      VerticalAccelController, position_hold_tilts)
from .dynamics import (ROTOR_SPIN_SIGNS, SIM_DT_S, SimState, compose_forces,
                       state_derivative, step as integrate_step)
from .numerics import clamp
from .safety import (GeofenceConfig, GeofenceVerdict, ServoFaultMonitor,
                     geofence_check, get_geofence_tables)
from .sizing import MissionPlan, solve_mission
from .types import MissionConstraints, VehicleParams


@dataclass(frozen=True)
class GustConfig:
    """1-cos lateral wind pulse in the world frame."""

    amplitude_mps: float = 0.0
    start_s: float = 0.0
    duration_s: float = 1.0
    direction_x: float = 1.0
    direction_y: float = 0.0

    def wind_at(self, t_s: float) -> tuple[float, float, float]:
        if self.amplitude_mps == 0.0 or not (
                self.start_s <= t_s < self.start_s + self.duration_s):
            return (0.0, 0.0, 0.0)
        phase = (t_s - self.start_s) / self.duration_s
        w = self.amplitude_mps * 0.5 * (1.0 - math.cos(2.0 * math.pi * phase))
        n = math.hypot(self.direction_x, self.direction_y) or 1.0
        return (w * self.direction_x / n, w * self.direction_y / n, 0.0)


@dataclass(frozen=True)
class FaultInjection:
    """Plant-side servo fault. 'stuck' freezes the deflection from time_s."""

    rotor: int
    time_s: float
    kind: str = "stuck"

    def __post_init__(self) -> None:
        if self.rotor not in (0, 1, 2, 3):
            raise ValueError("FaultInjection.rotor must be 0..3")
        if self.kind != "stuck":
            raise ValueError(f"unsupported fault kind {self.kind!r}")


@dataclass(frozen=True)
class ScenarioConfig:
    params: VehicleParams = field(default_factory=VehicleParams)
    constraints: MissionConstraints = field(default_factory=MissionConstraints)
    atmosphere: Atmosphere = field(default_factory=Atmosphere)
    geofence: GeofenceConfig | None = field(default_factory=GeofenceConfig)
    gust: GustConfig = field(default_factory=GustConfig)
    faults: tuple[FaultInjection, ...] = ()
    dt_s: float = SIM_DT_S
    max_time_s: float = 120.0
    manual_hold_s: float = 1.0
    abort_action: str = ABORT_BRAKE_RECOVER
    abort_on_fault: bool = True
    # the plan targets this far below the ceiling so the closed loop,
    # which switches on the time grid, cannot overshoot past the limit
    planning_ceiling_margin_m: float = 0.5


# free-fall trim holds off this many steps after the phase switch while the
# servos slew down from boost thrust
_MG_SETTLE_STEPS = 8


class LogRecord(NamedTuple):
    t_s: float
    mode: str
    verdict: str
    x_m: float
    y_m: float
    altitude_m: float
    vx_mps: float
    vy_mps: float
    climb_rate_mps: float
    roll_rad: float
    pitch_rad: float
    yaw_rad: float
    p_radps: float
    q_radps: float
    r_radps: float
    sp_x_mps2: float
    sp_y_mps2: float
    sp_z_mps2: float
    thrust_n: float
    defl0_rad: float
    defl1_rad: float
    defl2_rad: float
    defl3_rad: float
    cmd0_rad: float
    cmd1_rad: float
    cmd2_rad: float
    cmd3_rad: float
    fault_mask: int


@dataclass(frozen=True)
class MissionMetrics:
    apogee_m: float
    microgravity_window_s: float
    window_start_s: float
    window_end_s: float
    final_altitude_m: float
    final_climb_rate_mps: float
    max_lateral_m: float
    completed: bool
    aborted: bool
    abort_reason: str | None
    power_cut: bool
    flagged_rotors: tuple[int, ...]
    launch_time_s: float | None
    wall_time_s: float


@dataclass(frozen=True)
class SimResult:
    plan: MissionPlan
    records: list[LogRecord]
    events: list[tuple[float, str]]
    metrics: MissionMetrics


def microgravity_window(records: list[LogRecord], threshold_g: float,
                        dt_s: float) -> tuple[float, float, float]:
    """Longest contiguous span with specific-force magnitude at or below the
    threshold. Returns (duration, start, end); zero duration if none."""
    limit = threshold_g * gravity()
    best = (0.0, 0.0, 0.0)
    run_start = None
    prev_t = None
    for r in records:
        mag = math.sqrt(r.sp_x_mps2 ** 2 + r.sp_y_mps2 ** 2 + r.sp_z_mps2 ** 2)
        if mag <= limit:
            if run_start is None:
                run_start = r.t_s
            prev_t = r.t_s
            if prev_t - run_start > best[0]:
                best = (prev_t - run_start, run_start, prev_t)
        else:
            run_start = None
    return best


class _Executor:
    """One mission run; collects records and events."""

    def __init__(self, cfg: ScenarioConfig):
        self.cfg = cfg
        self.params = cfg.params
        self.atm = cfg.atmosphere
        self.g = gravity()
        plan_constraints = replace(
            cfg.constraints,
            max_altitude_m=cfg.constraints.max_altitude_m
            - cfg.planning_ceiling_margin_m)
        self.plan = solve_mission(self.params, plan_constraints, self.atm,
                                  dt_s=cfg.dt_s)
        self.curve = default_thrust_curve(self.params)
        self.full_scale_n = self.curve.max_thrust_n
        self.tables = (get_geofence_tables(self.params, self.atm, cfg.geofence)
                       if cfg.geofence is not None else None)
        self.machine = MissionStateMachine(
            plan=self.plan, countdown_s=cfg.constraints.countdown_s,
            manual_hold_s=cfg.manual_hold_s, abort_action=cfg.abort_action)
        self.servos = [ServoModel.from_params(self.params) for _ in range(4)]
        self.monitor = ServoFaultMonitor.from_params(self.params)
        self.attitude = AttitudeController()
        self.vertical = VerticalAccelController()
        self.pos_gains = PositionHoldGains()
        # plan lookup tables (time -> altitude, climb rate, thrust)
        tr = self.plan.trajectory
        self._plan_t = tr.t_s
        self._plan_h = tr.h_m
        self._plan_v = tr.hdot_mps
        self._plan_thrust = tr.thrust_n
        self.records: list[LogRecord] = []
        self._mg_steps = 0
        self._pending_monitor: tuple[tuple, tuple] | None = None
        self._fault_start = [math.inf] * 4
        for f in cfg.faults:
            self._fault_start[f.rotor] = min(self._fault_start[f.rotor],
                                             f.time_s)

    # ------------------------------------------------------------------
    def _plan_at(self, tm: float) -> tuple[float, float, float]:
        h = float(np.interp(tm, self._plan_t, self._plan_h))
        v = float(np.interp(tm, self._plan_t, self._plan_v))
        thrust = float(np.interp(tm, self._plan_t, self._plan_thrust))
        return h, v, thrust

    def _hold_tilts(self, state: SimState) -> tuple[float, float]:
        vx, vy, _ = state.world_velocity()
        return position_hold_tilts(self.pos_gains, -state.x_m, state.y_m,
                                   vx, -vy, self.g)

    def _hover_thrust_cmd(self, alt: float, climb: float, roll: float,
                          pitch: float, target_m: float,
                          vmax: float = 3.0) -> float:
        v_sp = clamp(1.2 * (target_m - alt), -vmax, vmax)
        t_n = self.params.mass_kg * (self.g + 2.5 * (v_sp - climb))
        t_n /= max(math.cos(roll) * math.cos(pitch), 0.5)
        return clamp(t_n / (4.0 * self.full_scale_n), -1.0, 1.0)

    def _controllers(self, mode: MissionMode, t: float, state: SimState,
                     sp_meas: tuple[float, float, float],
                     dt: float) -> tuple[ActuatorCommand, float]:
        """Returns the normalized command set and the plant drag coefficient
        (air brakes swap the airframe drag model)."""
        alt = state.altitude_m
        _, _, climb = state.world_velocity()
        roll, pitch, yaw = state.euler_angles()
        cd = self.params.drag_coeff
        park = self.cfg.constraints.park_altitude_m
        tm = self.machine.mission_time_s(t)
        if mode is not MissionMode.MICROGRAVITY:
            self._mg_steps = 0

        roll_sp, pitch_sp = self._hold_tilts(state)
        if mode in (MissionMode.ASCENT, MissionMode.BRAKE):
            h_p, v_p, t_p = self._plan_at(tm if tm is not None else 0.0)
            t_n = t_p + self.params.mass_kg * (2.0 * (h_p - alt)
                                               + 3.0 * (v_p - climb))
            t_n /= max(math.cos(roll) * math.cos(pitch), 0.5)
            thrust_cmd = clamp(t_n / (4.0 * self.full_scale_n), -1.0, 1.0)
            if mode is MissionMode.BRAKE:
                cd = self.params.drag_coeff_brake
        elif mode is MissionMode.MICROGRAVITY:
            # cancel drag for the measured state, not the planned one: any
            # velocity offset picked up at the phase switch would otherwise
            # sit in the trim loop as a slowly-settling bias
            rho = density(self.atm, alt)
            cancel_n = (0.5 * rho * self.params.reference_area_m2
                        * self.params.drag_coeff * climb * abs(climb))
            # the accelerometer stream and the servos both carry boost-phase
            # residue for a few samples after the switch; trimming on them
            # would wind the integrator into a long recovery
            if self._mg_steps == 0:
                self.vertical.reset()
            self._mg_steps += 1
            if self._mg_steps <= _MG_SETTLE_STEPS:
                trim = 0.0
            else:
                trim = self.vertical.update(sp_meas[2], 0.0, dt)
            thrust_cmd = clamp(cancel_n / (4.0 * self.full_scale_n) + trim,
                               -1.0, 1.0)
            roll_sp, pitch_sp = 0.0, 0.0
        elif mode is MissionMode.ABORT:
            v_sp = clamp(1.0 * (park - alt), -6.0, 6.0)
            t_n = self.params.mass_kg * (self.g + 2.0 * (v_sp - climb))
            t_n /= max(math.cos(roll) * math.cos(pitch), 0.5)
            thrust_cmd = clamp(t_n / (4.0 * self.full_scale_n), -1.0, 1.0)
            if climb < -5.0:
                cd = self.params.drag_coeff_brake
        else:  # MANUAL, COUNTDOWN, STABILIZE: hold the park point
            thrust_cmd = self._hover_thrust_cmd(alt, climb, roll, pitch, park)

        p, q, r = state.p_radps, state.q_radps, state.r_radps
        u_roll, u_pitch, u_yaw = self.attitude.update(
            roll, pitch, yaw, p, q, r, roll_sp, pitch_sp, 0.0, dt)
        return ActuatorCommand(u_roll, u_pitch, u_yaw, thrust_cmd), cd

    def _actuate(self, cmd: ActuatorCommand, t: float,
                 dt: float) -> tuple[tuple, tuple, tuple, tuple]:
        """Mix, shape servo commands, advance plant servos (honoring injected
        faults), and return (commands, deflections, thrusts, drag torques)."""
        u = mix(cmd)
        kd = self.params.drag_torque_gain_nm_per_rad
        cmds, defls, thrusts, torques = [], [], [], []
        for i in range(4):
            target_n = u[MIX_ROW_FOR_ROTOR[i]] * self.full_scale_n
            target_rad, _ = inverse_deflection(self.curve, target_n)
            c = tracking_command(self.servos[i], target_rad, dt)
            if t < self._fault_start[i]:
                servo_step(self.servos[i], c, dt)
            d = self.servos[i].deflection_rad
            thrust, _ = thrust_from_deflection(self.curve, d)
            cmds.append(c)
            defls.append(d)
            thrusts.append(thrust)
            torques.append(ROTOR_SPIN_SIGNS[i] * kd * d)
        return tuple(cmds), tuple(defls), tuple(thrusts), tuple(torques)

    # ------------------------------------------------------------------
    def run(self) -> SimResult:
        cfg = self.cfg
        dt = cfg.dt_s
        state = SimState.at_rest(0.0, 0.0, cfg.constraints.park_altitude_m)
        sp_meas = (0.0, 0.0, -self.g)
        completed = False
        t = 0.0
        wall_start = time.perf_counter()
        n_steps = int(round(cfg.max_time_s / dt))

        for _ in range(n_steps):
            alt = state.altitude_m
            vx, vy, climb = state.world_velocity()

            prev_mode = self.machine.mode
            mode = self.machine.step(t, alt, climb)
            if (prev_mode is MissionMode.STABILIZE
                    and mode is MissionMode.MANUAL):
                completed = True

            if self._pending_monitor is not None:
                cmds_prev, defls_prev = self._pending_monitor
                newly = self.monitor.update(t, cmds_prev, defls_prev, dt)
                for i in newly:
                    self.machine.events.append((t, f"servo fault flagged on rotor {i}"))
                    if cfg.abort_on_fault:
                        self.machine.trigger_abort(t, f"servo fault rotor {i}")
                self._pending_monitor = None

            verdict = GeofenceVerdict.INSIDE
            if self.tables is not None:
                verdict = geofence_check(cfg.geofence, self.tables,
                                         state.x_m, state.y_m, alt)
                if verdict is GeofenceVerdict.OUTSIDE_CRITICAL:
                    self.machine.trigger_abort(t, "geofence critical breach",
                                               power_cut=True)
                elif verdict is GeofenceVerdict.OUTSIDE_NOMINAL:
                    self.machine.trigger_abort(t, "geofence corridor breach",
                                               power_cut=False)
            mode = self.machine.mode

            if self.machine.power_cut:
                cmds = defls = (0.0, 0.0, 0.0, 0.0)
                thrusts = torques = (0.0, 0.0, 0.0, 0.0)
                cd = self.params.drag_coeff
            else:
                cmd, cd = self._controllers(mode, t, state, sp_meas, dt)
                cmds, defls, thrusts, torques = self._actuate(cmd, t, dt)
                self._pending_monitor = (cmds, defls)

            wind = cfg.gust.wind_at(t)
            forces = compose_forces(state, self.params, self.atm, thrusts,
                                    torques, wind, cd)
            sp_meas = forces.specific_force_mps2(self.params.mass_kg)

            roll, pitch, yaw = state.euler_angles()
            mask = sum(1 << i for i in range(4) if self.monitor.flagged[i])
            self.records.append(LogRecord(
                t, mode.value, verdict.value, state.x_m, state.y_m, alt,
                vx, vy, climb, roll, pitch, yaw,
                state.p_radps, state.q_radps, state.r_radps,
                sp_meas[0], sp_meas[1], sp_meas[2], sum(thrusts),
                defls[0], defls[1], defls[2], defls[3],
                cmds[0], cmds[1], cmds[2], cmds[3], mask))

            if completed:
                break
            if alt <= 0.0:
                self.machine.events.append(
                    (t, "ground contact" if self.machine.power_cut else "crash"))
                break

            state = self._integrate(state, thrusts, torques, wind, cd, dt)
            t += dt
        else:
            self.machine.events.append((t, "time limit reached"))

        wall = time.perf_counter() - wall_start
        return SimResult(plan=self.plan, records=self.records,
                         events=list(self.machine.events),
                         metrics=self._metrics(completed, wall))

    def _integrate(self, state: SimState, thrusts, torques, wind, cd,
                   dt: float) -> SimState:
        def deriv(s: SimState):
            f = compose_forces(s, self.params, self.atm, thrusts, torques,
                               wind, cd)
            return state_derivative(s, f, self.params)

        new_state, _ = integrate_step(state, deriv, dt)
        return new_state

    def _metrics(self, completed: bool, wall: float) -> MissionMetrics:
        recs = self.records
        apogee = max((r.altitude_m for r in recs), default=0.0)
        win, w0, w1 = microgravity_window(
            recs, self.cfg.constraints.microgravity_threshold_g, self.cfg.dt_s)
        last = recs[-1] if recs else None
        max_lat = max((math.hypot(r.x_m, r.y_m) for r in recs), default=0.0)
        flagged = tuple(i for i in range(4) if self.monitor.flagged[i])
        return MissionMetrics(
            apogee_m=apogee, microgravity_window_s=win, window_start_s=w0,
            window_end_s=w1,
            final_altitude_m=last.altitude_m if last else 0.0,
            final_climb_rate_mps=last.climb_rate_mps if last else 0.0,
            max_lateral_m=max_lat, completed=completed,
            aborted=self.machine.abort_reason is not None,
            abort_reason=self.machine.abort_reason,
            power_cut=self.machine.power_cut, flagged_rotors=flagged,
            launch_time_s=self.machine.launch_time_s, wall_time_s=wall)


def run_mission(cfg: ScenarioConfig) -> SimResult:
    """Plan and fly one full mission; deterministic for a given config."""
    return _Executor(cfg).run()
