"""Time-optimal vertical mission sizing.

The planned profile is bang-coast-bang: a full-power boost, a ballistic
coast whose thrust exactly cancels drag (the microgravity arc), and a
maximum-effort brake with air brakes that stops the descent at the park
altitude. The two switching times are the roots of two monotone event
functions:

  boost -> coast   the coast-ahead apogee h + hdot^2/(2g) reaches the ceiling
  coast -> brake   the brake-ahead stop altitude falls to the park altitude

Events are Newton-solved (damped secant with bisection fallback) on top of
fixed-step integration with fractional final steps, so switch times are not
grid-quantized. A pure grid search over switch times is available as a
fallback and as a cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .atmosphere import GRAVITY_MPS2, Atmosphere, density
from .numerics import solve_root_bracketed
from .types import MissionConstraints, VehicleParams

SIZING_DT_S = 0.004     # fixed integration step for planning
V_BLEND_MPS = 2.0       # below this climb speed the momentum model is blended

PHASE_BOOST = "boost"
PHASE_MICROGRAVITY = "microgravity"
PHASE_BRAKE = "brake"
PHASE_PARKED = "parked"

_PARKED_TAIL_S = 1.0
_MAX_PHASE_TIME_S = 600.0


class InfeasibleMissionError(Exception):
    """Mission cannot be flown; names the first violated constraint."""

    def __init__(self, violated_constraint: str, message: str) -> None:
        super().__init__(message)
        self.violated_constraint = violated_constraint
        self.message = message


# ---------------------------------------------------------------------------
# propulsion model
# ---------------------------------------------------------------------------

def static_thrust(power_w: float, diameter_m: float, rho_kgm3: float) -> float:
    """Ideal static thrust of the full rotor set at shaft power P (momentum
    theory hover limit): T = ((pi/2) D^2 rho P^2)^(1/3)."""
    return ((math.pi / 2.0) * diameter_m ** 2 * rho_kgm3 * power_w ** 2) ** (1.0 / 3.0)


def propeller_efficiency(power_w: float, diameter_m: float, rho_kgm3: float,
                         hdot_mps: float) -> float:
    """Propulsive efficiency eta in [0, 1) at axial speed hdot.

    Solves hdot = eta * (2 P / (pi rho D^2 (1 - eta)))^(1/3), which has a
    single root: the right side grows monotonically from 0 (eta=0) and
    diverges as eta -> 1.
    """
    if hdot_mps < 0.0:
        raise ValueError("propeller_efficiency: hdot_mps must be >= 0")
    if hdot_mps == 0.0:
        return 0.0
    scale = 2.0 * power_w / (math.pi * rho_kgm3 * diameter_m ** 2)

    def f(eta: float) -> float:
        return eta * (scale / (1.0 - eta)) ** (1.0 / 3.0) - hdot_mps

    return solve_root_bracketed(f, 0.0, 1.0 - 1e-12, xtol=1e-14)


def thrust_available(params: VehicleParams, atmosphere: Atmosphere,
                     altitude_m: float, hdot_mps: float) -> float:
    """Maximum deliverable thrust magnitude (derated) at a flight condition.

    Above the blend speed: momentum-theory axial model T = eta P / |hdot|.
    At rest: the static limit. In between: linear interpolation, which keeps
    the envelope continuous through the |hdot| -> 0 singularity of the
    axial model.
    """
    rho = density(atmosphere, altitude_m)
    p = params.engine_power_w
    d = params.prop_diameter_m
    v = abs(hdot_mps)
    t_static = params.thrust_derating * static_thrust(p, d, rho)
    if v >= V_BLEND_MPS:
        eta = propeller_efficiency(p, d, rho, v)
        return params.thrust_derating * eta * p / v
    eta_b = propeller_efficiency(p, d, rho, V_BLEND_MPS)
    t_blend = params.thrust_derating * eta_b * p / V_BLEND_MPS
    w = v / V_BLEND_MPS
    return (1.0 - w) * t_static + w * t_blend


def accel_1d(params: VehicleParams, atmosphere: Atmosphere, altitude_m: float,
             hdot_mps: float, thrust_n: float,
             drag_coeff: float | None = None) -> float:
    """Vertical acceleration in m/s^2. Thrust positive up; quadratic drag
    opposes the direction of motion (F_d = -1/2 rho S C_d hdot |hdot|)."""
    cd = params.drag_coeff if drag_coeff is None else drag_coeff
    rho = density(atmosphere, altitude_m)
    drag = -0.5 * rho * params.reference_area_m2 * cd * hdot_mps * abs(hdot_mps)
    return (thrust_n + drag) / params.mass_kg - GRAVITY_MPS2


# ---------------------------------------------------------------------------
# fixed-step integration
# ---------------------------------------------------------------------------

def _rk4_step(params: VehicleParams, atmosphere: Atmosphere, t: float,
              h: float, v: float, dt: float,
              thrust_policy: Callable[[float, float, float], float],
              drag_coeff: float | None) -> tuple[float, float]:
    def acc(tt: float, hh: float, vv: float) -> float:
        return accel_1d(params, atmosphere, hh, vv,
                        thrust_policy(tt, hh, vv), drag_coeff)
    k1h = v
    k1v = acc(t, h, v)
    k2h = v + 0.5 * dt * k1v
    k2v = acc(t + 0.5 * dt, h + 0.5 * dt * k1h, v + 0.5 * dt * k1v)
    k3h = v + 0.5 * dt * k2v
    k3v = acc(t + 0.5 * dt, h + 0.5 * dt * k2h, v + 0.5 * dt * k2v)
    k4h = v + dt * k3v
    k4v = acc(t + dt, h + dt * k3h, v + dt * k3v)
    h_next = h + dt * (k1h + 2.0 * k2h + 2.0 * k3h + k4h) / 6.0
    v_next = v + dt * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0
    return h_next, v_next


def integrate_phase(params: VehicleParams, atmosphere: Atmosphere,
                    h0_m: float, hdot0_mps: float,
                    thrust_policy: Callable[[float, float, float], float],
                    stop: Callable[[float, float, float], bool],
                    dt_s: float = SIZING_DT_S,
                    drag_coeff: float | None = None,
                    t0_s: float = 0.0,
                    max_time_s: float = _MAX_PHASE_TIME_S,
                    ) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Integrate one phase of the vertical model at a fixed step.

    thrust_policy(t, h, hdot) -> thrust in N; stop(t, h, hdot) -> bool.
    Returns (t, h, hdot, hddot, thrust) arrays; time is strictly increasing
    and the last sample is the first one satisfying the stop predicate
    (within one step of the crossing).
    """
    if dt_s <= 0.0:
        raise ValueError("integrate_phase: dt_s must be > 0")
    ts, hs, vs, accs, thrusts = [], [], [], [], []
    t, h, v = t0_s, h0_m, hdot0_mps
    while True:
        thr = thrust_policy(t, h, v)
        ts.append(t)
        hs.append(h)
        vs.append(v)
        accs.append(accel_1d(params, atmosphere, h, v, thr, drag_coeff))
        thrusts.append(thr)
        if stop(t, h, v):
            break
        if t - t0_s >= max_time_s:
            raise InfeasibleMissionError(
                "phase_timeout", f"phase exceeded {max_time_s} s without stopping")
        h, v = _rk4_step(params, atmosphere, t, h, v, dt_s, thrust_policy, drag_coeff)
        t += dt_s
    return (np.asarray(ts), np.asarray(hs), np.asarray(vs),
            np.asarray(accs), np.asarray(thrusts))


# ---------------------------------------------------------------------------
# mission plan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Trajectory1D:
    """Sampled vertical profile. Arrays share one strictly increasing grid."""

    t_s: np.ndarray
    h_m: np.ndarray
    hdot_mps: np.ndarray
    hddot_mps2: np.ndarray
    thrust_n: np.ndarray
    phase: np.ndarray  # str per sample: boost|microgravity|brake|parked

    def __post_init__(self) -> None:
        n = len(self.t_s)
        for name in ("h_m", "hdot_mps", "hddot_mps2", "thrust_n", "phase"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"Trajectory1D: {name} length != t_s length")
        if n > 1 and not np.all(np.diff(self.t_s) > 0.0):
            raise ValueError("Trajectory1D: t_s must be strictly increasing")


@dataclass(frozen=True)
class MissionPlan:
    """Solved bang-coast-bang profile plus its switch times and summary."""

    trajectory: Trajectory1D
    t_switch1_s: float          # boost -> microgravity
    t_switch2_s: float          # microgravity -> brake
    t_stop_s: float             # brake -> parked (hdot crosses zero)
    microgravity_duration_s: float
    apogee_m: float
    entry_altitude_m: float     # state when the coast begins
    entry_speed_mps: float
    brake_altitude_m: float     # state when the brake begins
    brake_speed_mps: float      # signed, negative (descending)
    stop_altitude_m: float
    max_climb_speed_mps: float
    max_descent_speed_mps: float  # magnitude
    ceiling_m: float
    park_altitude_m: float

    def meets_min_duration(self, constraints: MissionConstraints) -> bool:
        return self.microgravity_duration_s >= constraints.min_microgravity_duration_s


def _boost_policy(params: VehicleParams,
                  atmosphere: Atmosphere) -> Callable[[float, float, float], float]:
    def policy(t: float, h: float, v: float) -> float:
        return thrust_available(params, atmosphere, h, v)
    return policy


def _coast_thrust(params: VehicleParams, atmosphere: Atmosphere,
                  h: float, v: float) -> float:
    # exact drag cancellation: specific force zero, hddot = -g
    rho = density(atmosphere, h)
    return 0.5 * rho * params.reference_area_m2 * params.drag_coeff * v * abs(v)


def _brake_policy(params: VehicleParams,
                  atmosphere: Atmosphere) -> Callable[[float, float, float], float]:
    # descent braking uses the static envelope; air brakes add drag separately
    def policy(t: float, h: float, v: float) -> float:
        return params.thrust_derating * static_thrust(
            params.engine_power_w, params.prop_diameter_m, density(atmosphere, h))
    return policy


def _march_boost(params: VehicleParams, constraints: MissionConstraints,
                 atmosphere: Atmosphere, dt: float,
                 ) -> tuple[list[tuple[float, float]], int]:
    """Boost grid states until the coast-ahead apogee reaches the ceiling.

    Returns (nodes, k) where nodes[i] is the state at t = i*dt and k is the
    first index whose apogee-ahead value is >= the ceiling.
    """
    g = GRAVITY_MPS2
    ceiling = constraints.max_altitude_m
    policy = _boost_policy(params, atmosphere)
    h = constraints.park_altitude_m
    v = constraints.initial_launch_speed_mps
    if h + max(v, 0.0) ** 2 / (2.0 * g) > ceiling:
        raise InfeasibleMissionError(
            "max_altitude",
            "initial state already coasts above the ceiling; cannot merge below it")
    nodes = [(h, v)]
    k = 0
    while h + max(v, 0.0) ** 2 / (2.0 * g) < ceiling:
        if k * dt > _MAX_PHASE_TIME_S:
            raise InfeasibleMissionError(
                "hover_thrust", "boost cannot reach the ceiling parabola")
        if k > 0 and v <= 0.0:
            raise InfeasibleMissionError(
                "hover_thrust", "vehicle cannot climb; thrust below weight plus drag")
        h, v = _rk4_step(params, atmosphere, k * dt, h, v, dt, policy, None)
        k += 1
        nodes.append((h, v))
    return nodes, k


def _brake_stop(params: VehicleParams, atmosphere: Atmosphere, dt: float,
                h2: float, v2: float) -> tuple[float, float]:
    """Integrate the brake from (h2, v2) until hdot crosses zero.

    Returns (stop altitude, brake duration); the zero crossing is refined
    with a fractional final step.
    """
    policy = _brake_policy(params, atmosphere)
    cd = params.drag_coeff_brake
    if v2 >= 0.0:
        return h2, 0.0
    t, h, v = 0.0, h2, v2
    while True:
        h_next, v_next = _rk4_step(params, atmosphere, t, h, v, dt, policy, cd)
        if v_next >= 0.0:
            break
        t, h, v = t + dt, h_next, v_next
        if t > _MAX_PHASE_TIME_S:
            raise InfeasibleMissionError(
                "park_altitude", "brake phase does not arrest the descent")
    if v_next == 0.0:
        return h_next, t + dt

    def vel_at(frac_dt: float) -> float:
        return _rk4_step(params, atmosphere, t, h, v, frac_dt, policy, cd)[1]

    tau = solve_root_bracketed(vel_at, 0.0, dt, v, v_next, xtol=1e-12)
    h_stop = _rk4_step(params, atmosphere, t, h, v, tau, policy, cd)[0]
    return h_stop, t + tau


def solve_mission(params: VehicleParams, constraints: MissionConstraints,
                  atmosphere: Atmosphere, dt_s: float = SIZING_DT_S) -> MissionPlan:
    """Solve the time-optimal bang-coast-bang mission.

    The boost ends at the unique instant where coasting just grazes the
    ceiling; the brake starts at the unique instant from which a
    maximum-effort stop ends exactly at the park altitude. Both boundary
    conditions maximize the microgravity duration, and perturbing either
    switch time violates a constraint or shortens the window.
    """
    g = GRAVITY_MPS2
    dt = dt_s
    ceiling = constraints.max_altitude_m
    park = constraints.park_altitude_m

    hover = thrust_available(params, atmosphere, park, 0.0)
    if hover <= params.weight_n:
        raise InfeasibleMissionError(
            "hover_thrust",
            f"derated static thrust {hover:.2f} N does not exceed weight "
            f"{params.weight_n:.2f} N")

    nodes, k = _march_boost(params, constraints, atmosphere, dt)
    boost_policy = _boost_policy(params, atmosphere)

    if k == 0:
        t1, (h1, v1) = 0.0, nodes[0]
    else:
        ta, (ha, va) = (k - 1) * dt, nodes[k - 1]

        def apogee_err(t1c: float) -> float:
            frac = t1c - ta
            if frac <= 0.0:
                hh, vv = ha, va
            else:
                hh, vv = _rk4_step(params, atmosphere, ta, ha, va, frac,
                                   boost_policy, None)
            return hh + max(vv, 0.0) ** 2 / (2.0 * g) - ceiling

        t1 = solve_root_bracketed(apogee_err, ta, k * dt, xtol=1e-9)
        h1, v1 = _rk4_step(params, atmosphere, ta, ha, va, t1 - ta,
                           boost_policy, None) if t1 > ta else (ha, va)

    apogee = h1 + max(v1, 0.0) ** 2 / (2.0 * g)

    # coast is exactly ballistic: h(tau) = h1 + v1 tau - g tau^2 / 2
    def coast_state(tau: float) -> tuple[float, float]:
        return h1 + v1 * tau - 0.5 * g * tau * tau, v1 - g * tau

    tau_apogee = max(v1, 0.0) / g

    def stop_err(tau: float) -> float:
        h2, v2 = coast_state(tau)
        return _brake_stop(params, atmosphere, dt, h2, v2)[0] - park

    # bracket the brake event by marching down the coast
    tau_a = tau_apogee
    err_a = stop_err(tau_a)
    if err_a < 0.0:
        raise InfeasibleMissionError(
            "park_altitude", "cannot stop above the park altitude even from apogee")
    step = 0.05
    tau_b = tau_a
    while True:
        tau_b += step
        hb, _ = coast_state(tau_b)
        if hb <= 0.0:
            raise InfeasibleMissionError(
                "park_altitude", "coast reaches the ground before a stop is possible")
        err_b = stop_err(tau_b)
        if err_b < 0.0:
            break
        tau_a, err_a = tau_b, err_b
    tau2 = solve_root_bracketed(stop_err, tau_a, tau_b, err_a, err_b, xtol=1e-9)

    return _assemble_plan(params, constraints, atmosphere, dt,
                          nodes, t1, h1, v1, tau2)


def grid_search_mission(params: VehicleParams, constraints: MissionConstraints,
                        atmosphere: Atmosphere,
                        dt_s: float = SIZING_DT_S) -> MissionPlan:
    """Brute-force fallback: both switch times restricted to the 0.004 s grid.

    The boost-end candidate is the last grid node whose coast-ahead apogee
    stays at or below the ceiling, and the brake-start candidate is the last
    grid offset whose stop altitude stays at or above the park altitude;
    both scans exploit the monotonicity of their event functions.
    """
    g = GRAVITY_MPS2
    dt = dt_s
    ceiling = constraints.max_altitude_m
    park = constraints.park_altitude_m

    hover = thrust_available(params, atmosphere, park, 0.0)
    if hover <= params.weight_n:
        raise InfeasibleMissionError(
            "hover_thrust", "derated static thrust does not exceed weight")

    nodes, k = _march_boost(params, constraints, atmosphere, dt)
    k1 = max(k - 1, 0)  # last node at or below the ceiling parabola
    t1 = k1 * dt
    h1, v1 = nodes[k1]

    def coast_state(tau: float) -> tuple[float, float]:
        return h1 + v1 * tau - 0.5 * g * tau * tau, v1 - g * tau

    def stop_ok(j: int) -> bool:
        h2, v2 = coast_state(j * dt)
        if h2 <= 0.0:
            return False
        return _brake_stop(params, atmosphere, dt, h2, v2)[0] >= park

    if not stop_ok(0):
        raise InfeasibleMissionError(
            "park_altitude", "cannot stop above the park altitude")
    lo = 0
    hi = 1
    while stop_ok(hi):
        lo = hi
        hi *= 2
        if hi * dt > _MAX_PHASE_TIME_S:
            raise InfeasibleMissionError(
                "park_altitude", "coast never forces a brake decision")
    while hi - lo > 1:  # binary search over the grid (stop_ok is monotone)
        mid = (lo + hi) // 2
        if stop_ok(mid):
            lo = mid
        else:
            hi = mid
    tau2 = lo * dt

    return _assemble_plan(params, constraints, atmosphere, dt,
                          nodes, t1, h1, v1, tau2)


def _assemble_plan(params: VehicleParams, constraints: MissionConstraints,
                   atmosphere: Atmosphere, dt: float,
                   boost_nodes: Sequence[tuple[float, float]],
                   t1: float, h1: float, v1: float, tau2: float) -> MissionPlan:
    g = GRAVITY_MPS2
    boost_policy = _boost_policy(params, atmosphere)

    ts: list[float] = []
    hs: list[float] = []
    vs: list[float] = []
    accs: list[float] = []
    thrusts: list[float] = []
    phases: list[str] = []

    def push(t: float, h: float, v: float, acc: float, thr: float, ph: str) -> None:
        ts.append(t)
        hs.append(h)
        vs.append(v)
        accs.append(acc)
        thrusts.append(thr)
        phases.append(ph)

    # boost: cached grid nodes strictly below t1, then the exact switch state
    i = 0
    while i * dt < t1 - 1e-12:
        h, v = boost_nodes[i]
        thr = boost_policy(i * dt, h, v)
        push(i * dt, h, v, accel_1d(params, atmosphere, h, v, thr), thr, PHASE_BOOST)
        i += 1
    thr1 = boost_policy(t1, h1, v1)
    push(t1, h1, v1, accel_1d(params, atmosphere, h1, v1, thr1), thr1, PHASE_BOOST)

    # coast: analytic ballistic arc, thrust trimmed to cancel drag exactly
    def coast_state(tau: float) -> tuple[float, float]:
        return h1 + v1 * tau - 0.5 * g * tau * tau, v1 - g * tau

    tau = dt
    while tau < tau2 - 1e-12:
        h, v = coast_state(tau)
        push(t1 + tau, h, v, -g, _coast_thrust(params, atmosphere, h, v),
             PHASE_MICROGRAVITY)
        tau += dt
    h2, v2 = coast_state(tau2)
    push(t1 + tau2, h2, v2, -g, _coast_thrust(params, atmosphere, h2, v2),
         PHASE_MICROGRAVITY)
    t2 = t1 + tau2

    # brake: integrate to the refined hdot = 0 crossing
    brake_policy = _brake_policy(params, atmosphere)
    cd_b = params.drag_coeff_brake
    t, h, v = 0.0, h2, v2
    if v2 < 0.0:
        while True:
            h_next, v_next = _rk4_step(params, atmosphere, t, h, v, dt,
                                       brake_policy, cd_b)
            if v_next >= 0.0:
                break
            t, h, v = t + dt, h_next, v_next
            thr = brake_policy(t, h, v)
            push(t2 + t, h, v, accel_1d(params, atmosphere, h, v, thr, cd_b),
                 thr, PHASE_BRAKE)
        if v_next == 0.0:
            tau_c, h_stop = dt, h_next
        else:
            def vel_at(frac: float) -> float:
                return _rk4_step(params, atmosphere, t, h, v, frac,
                                 brake_policy, cd_b)[1]
            tau_c = solve_root_bracketed(vel_at, 0.0, dt, v, v_next, xtol=1e-12)
            h_stop = _rk4_step(params, atmosphere, t, h, v, tau_c,
                               brake_policy, cd_b)[0]
        t_stop = t2 + t + tau_c
    else:
        h_stop, t_stop = h2, t2
    thr = brake_policy(t_stop, h_stop, 0.0)
    push(t_stop, h_stop, 0.0,
         accel_1d(params, atmosphere, h_stop, 0.0, thr, cd_b), thr, PHASE_BRAKE)

    # parked tail: hover at the stop altitude
    hover_thr = params.weight_n
    tau = dt
    while tau <= _PARKED_TAIL_S + 1e-12:
        push(t_stop + tau, h_stop, 0.0, 0.0, hover_thr, PHASE_PARKED)
        tau += dt

    traj = Trajectory1D(
        t_s=np.asarray(ts), h_m=np.asarray(hs), hdot_mps=np.asarray(vs),
        hddot_mps2=np.asarray(accs), thrust_n=np.asarray(thrusts),
        phase=np.asarray(phases, dtype=object))

    apogee = h1 + max(v1, 0.0) ** 2 / (2.0 * g)
    return MissionPlan(
        trajectory=traj,
        t_switch1_s=t1,
        t_switch2_s=t2,
        t_stop_s=t_stop,
        microgravity_duration_s=t2 - t1,
        apogee_m=apogee,
        entry_altitude_m=h1,
        entry_speed_mps=v1,
        brake_altitude_m=h2,
        brake_speed_mps=v2,
        stop_altitude_m=h_stop,
        max_climb_speed_mps=max(v1, constraints.initial_launch_speed_mps),
        max_descent_speed_mps=abs(min(v2, 0.0)),
        ceiling_m=constraints.max_altitude_m,
        park_altitude_m=constraints.park_altitude_m,
    )
