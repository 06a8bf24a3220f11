"""Actuators: pitch servos, thrust curve, allocation, priority mixing.

Two command spaces exist side by side and must not be conflated:

* the physical space of Newtons and Newton-meters, handled by allocate()
  through the linear allocation matrix (see allocation_matrix), and
* the normalized mixer space, where roll/pitch/yaw/thrust commands and
  per-rotor outputs live in [-1, 1] and saturation is resolved by priority.

normalize_wrench() is the documented bridge between them, and
MIX_ROW_FOR_ROTOR is the fixed permutation mapping mixer output rows onto
the physical rotor indices of the dynamics module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np

from .numerics import clamp
from .types import SYNTHETIC_CURVE_ENRICHMENT, VehicleParams


# ---------------------------------------------------------------------------
# servo
# ---------------------------------------------------------------------------

@dataclass
class ServoModel:
    """First-order pitch servo with command dead-band and travel limits.

    deflection_rad is the current output; servo_step advances it with the
    exact discretization of 1/(tau s + 1). Commands within deadband_rad of
    the current output are ignored (measured PWM quantization), and
    commands beyond the travel limits are clamped.
    """

    tau_s: float = 0.075
    deadband_rad: float = 0.0009
    max_deflection_rad: float = 0.09
    deflection_rad: float = 0.0

    @staticmethod
    def from_params(params: VehicleParams) -> "ServoModel":
        return ServoModel(tau_s=params.servo_tau_s,
                          deadband_rad=params.servo_deadband_rad,
                          max_deflection_rad=params.max_deflection_rad)

    def copy(self) -> "ServoModel":
        return replace(self)


def servo_step(model: ServoModel, commanded_rad: float, dt_s: float) -> float:
    """Advance the servo one step; returns and stores the new deflection."""
    if dt_s <= 0.0:
        raise ValueError("servo_step: dt_s must be > 0")
    cmd = clamp(commanded_rad, -model.max_deflection_rad, model.max_deflection_rad)
    if abs(cmd - model.deflection_rad) <= model.deadband_rad:
        cmd = model.deflection_rad
    lam = 1.0 - math.exp(-dt_s / model.tau_s)
    model.deflection_rad += lam * (cmd - model.deflection_rad)
    return model.deflection_rad


def tracking_command(model: ServoModel, target_rad: float, dt_s: float) -> float:
    """Command that places the servo output at target_rad after one step.

    Inverts the discrete lag (amplifying the increment by 1/lambda) so the
    identified model is dead-beat when the command stays within travel.
    Sub-resolution errors (|target - y| <= deadband * lambda) are held at the
    current output instead of chattering across the dead-band. Near the
    travel limits the clamped command may fall back inside the dead-band and
    stall up to one dead-band width short; callers keep commanded thrust a
    few percent below the envelope edge.
    """
    lam = 1.0 - math.exp(-dt_s / model.tau_s)
    err = target_rad - model.deflection_rad
    if abs(err) <= model.deadband_rad * lam:
        return model.deflection_rad
    cmd = model.deflection_rad + err / lam
    return clamp(cmd, -model.max_deflection_rad, model.max_deflection_rad)


# ---------------------------------------------------------------------------
# thrust curve
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThrustCurve:
    """Tabulated deflection -> thrust map with its monotone inverse.

    Both columns must be strictly increasing and the curve must pass near
    (0, 0); forward and inverse lookups are piecewise-linear on the same
    breakpoints, so round trips are exact up to float arithmetic.
    """

    deflection_rad: np.ndarray
    thrust_n: np.ndarray

    def __post_init__(self) -> None:
        d = np.asarray(self.deflection_rad, dtype=float)
        t = np.asarray(self.thrust_n, dtype=float)
        object.__setattr__(self, "deflection_rad", d)
        object.__setattr__(self, "thrust_n", t)
        if d.ndim != 1 or d.shape != t.shape or len(d) < 2:
            raise ValueError("ThrustCurve: need two equal-length 1-d columns")
        if not (np.all(np.diff(d) > 0.0) and np.all(np.diff(t) > 0.0)):
            raise ValueError("ThrustCurve: both columns must be strictly increasing")
        if d[0] > 0.0 or d[-1] < 0.0:
            raise ValueError("ThrustCurve: deflection range must span zero")
        t0 = float(np.interp(0.0, d, t))
        if abs(t0) > 0.05 * float(np.max(np.abs(t))):
            raise ValueError("ThrustCurve: curve must pass near (0, 0)")

    @property
    def max_thrust_n(self) -> float:
        return float(self.thrust_n[-1])

    @property
    def min_thrust_n(self) -> float:
        return float(self.thrust_n[0])


def default_thrust_curve(params: VehicleParams, n: int = 181) -> ThrustCurve:
    """Synthetic identified curve T(a) = K_T a (1 + 0.35 |a| / a_max)."""
    a_max = params.max_deflection_rad
    kt = params.thrust_gain_n_per_rad
    a = np.linspace(-a_max, a_max, n)
    t = kt * a * (1.0 + SYNTHETIC_CURVE_ENRICHMENT * np.abs(a) / a_max)
    return ThrustCurve(deflection_rad=a, thrust_n=t)


def load_thrust_curve(path: str) -> ThrustCurve:
    """Load a two-column (deflection_rad, thrust_n) text table."""
    data = np.loadtxt(path)
    if data.ndim != 2 or data.shape[1] != 2:
        raise ValueError(f"{path}: expected two columns")
    return ThrustCurve(deflection_rad=data[:, 0], thrust_n=data[:, 1])


def thrust_from_deflection(curve: ThrustCurve,
                           deflection_rad: float) -> tuple[float, bool]:
    """Thrust at a deflection; out-of-envelope inputs clamp to the edge and
    set the flag."""
    d = curve.deflection_rad
    clamped = deflection_rad < d[0] or deflection_rad > d[-1]
    x = clamp(deflection_rad, float(d[0]), float(d[-1]))
    return float(np.interp(x, d, curve.thrust_n)), clamped


def inverse_deflection(curve: ThrustCurve, thrust_n: float) -> tuple[float, bool]:
    """Deflection producing a thrust (static inversion); clamps + flags
    outside the achievable range."""
    t = curve.thrust_n
    clamped = thrust_n < t[0] or thrust_n > t[-1]
    x = clamp(thrust_n, float(t[0]), float(t[-1]))
    return float(np.interp(x, t, curve.deflection_rad)), clamped


# ---------------------------------------------------------------------------
# physical allocation (exact linear solve)
# ---------------------------------------------------------------------------

def allocation_matrix(params: VehicleParams) -> np.ndarray:
    """Rows map per-rotor deflections to (thrust N, roll, pitch, yaw N*m)."""
    kt = params.thrust_gain_n_per_rad
    kd = params.drag_torque_gain_nm_per_rad
    lx, ly = params.arm_x_m, params.arm_y_m
    return np.array([
        [kt, kt, kt, kt],
        [-kt * ly, -kt * ly, kt * ly, kt * ly],
        [kt * lx, -kt * lx, -kt * lx, kt * lx],
        [kd, -kd, kd, -kd],
    ])


def allocate(params: VehicleParams, thrust_n: float, roll_nm: float,
             pitch_nm: float, yaw_nm: float) -> tuple[float, float, float, float]:
    """Per-rotor deflections (rad) realizing a wrench exactly in the linear
    model. No saturation handling: pure 4x4 solve; callers own feasibility."""
    w = np.array([thrust_n, roll_nm, pitch_nm, yaw_nm])
    a = np.linalg.solve(allocation_matrix(params), w)
    return float(a[0]), float(a[1]), float(a[2]), float(a[3])


# ---------------------------------------------------------------------------
# priority mixer (normalized space)
# ---------------------------------------------------------------------------

class ActuatorCommand(NamedTuple):
    """Normalized roll/pitch/yaw/thrust commands, each in [-1, 1]."""

    roll: float
    pitch: float
    yaw: float
    thrust: float


# mixer matrix: row i gives rotor output u_i from (roll, pitch, yaw, thrust)
MIX_K = ((-1.0, 1.0, 1.0, 1.0),
         (1.0, -1.0, 1.0, 1.0),
         (1.0, 1.0, -1.0, 1.0),
         (-1.0, -1.0, -1.0, 1.0))

# mixer row feeding each physical rotor (see dynamics rotor geometry): the
# two matrices number rotors differently; this permutation lines up their
# sign patterns so positive roll/pitch/yaw/thrust commands produce positive
# physical L/M/N/T through the allocation geometry.
MIX_ROW_FOR_ROTOR = (0, 3, 1, 2)


def _apply_k(roll: float, pitch: float, yaw: float,
             thrust: float) -> tuple[float, float, float, float]:
    return tuple(k[0] * roll + k[1] * pitch + k[2] * yaw + k[3] * thrust
                 for k in MIX_K)  # type: ignore[return-value]


# absorbs 1-ulp rail overshoot from the row arithmetic; outputs are
# clamped to [-1, 1] regardless, so the tolerance never leaks out.
_FEAS_EPS = 1e-9


def _feasible(u: Sequence[float]) -> bool:
    return all(-1.0 - _FEAS_EPS <= ui <= 1.0 + _FEAS_EPS for ui in u)


def _max_scale(base: Sequence[float], coeff: Sequence[float]) -> float | None:
    """Largest a in [0, 1] with |base_i + a coeff_i| <= 1 for all rows.

    Solves the two-sided row inequalities, so rows that need a nonzero
    coeff term to come off a rail impose a lower bound rather than making
    the problem look unsolvable. Returns None when no a in [0, 1] works.
    """
    lo, hi = 0.0, 1.0
    for b, c in zip(base, coeff):
        if c == 0.0:
            if not -1.0 - _FEAS_EPS <= b <= 1.0 + _FEAS_EPS:
                return None
            continue
        r0 = (-1.0 - b) / c
        r1 = (1.0 - b) / c
        if r1 < r0:
            r0, r1 = r1, r0
        if r0 > lo:
            lo = r0
        if r1 < hi:
            hi = r1
    if lo > hi + _FEAS_EPS:
        return None
    return lo if hi < lo else hi


def mix(cmd: ActuatorCommand) -> tuple[float, float, float, float]:
    """Map normalized commands to per-rotor outputs with priority saturation.

    If the raw combination leaves [-1, 1], yaw gives way first: it is scaled
    to the largest factor in [0, 1] that keeps every row off its rail with
    roll, pitch and thrust intact. If no such factor exists, yaw is dropped
    and thrust is scaled next; if still infeasible, roll and pitch are
    scaled jointly. Roll/pitch therefore always survive at no less than
    half amplitude, and the output is always feasible.
    """
    for name, v in zip(("roll", "pitch", "yaw", "thrust"), cmd):
        if not -1.0 <= v <= 1.0:
            raise ValueError(f"mix: {name} command {v} outside [-1, 1]")
    r, p, y, t = cmd

    u = _apply_k(r, p, y, t)
    if not _feasible(u):
        a = _max_scale(_apply_k(r, p, 0.0, t), tuple(k[2] * y for k in MIX_K))
        if a is not None:
            u = _apply_k(r, p, a * y, t)
        else:
            base = _apply_k(r, p, 0.0, 0.0)
            if _feasible(base):
                a = _max_scale(base, tuple(k[3] * t for k in MIX_K))
                u = _apply_k(r, p, 0.0, (a if a is not None else 0.0) * t)
            else:
                worst = max(abs(k[0] * r + k[1] * p) for k in MIX_K)
                s = 1.0 if worst <= 1.0 else 1.0 / worst
                u = _apply_k(s * r, s * p, 0.0, 0.0)
    return tuple(clamp(ui, -1.0, 1.0) for ui in u)  # type: ignore[return-value]


def full_scale_rotor_thrust(curve: ThrustCurve) -> float:
    """Per-rotor thrust magnitude at the positive travel limit; the unit of
    the normalized per-rotor command after static inversion."""
    return curve.max_thrust_n


def normalize_wrench(params: VehicleParams, curve: ThrustCurve, thrust_n: float,
                     roll_nm: float, pitch_nm: float,
                     yaw_nm: float) -> ActuatorCommand:
    """Bridge from physical wrench to normalized mixer commands.

    Channel scales follow the allocation structure: 4x the rotor full-scale
    thrust F for the thrust channel, 2*F*arm for roll and pitch, 4x the
    full-scale rotor torque for yaw. Values saturate into [-1, 1].
    """
    f = full_scale_rotor_thrust(curve)
    q = params.drag_torque_gain_nm_per_rad * params.max_deflection_rad
    return ActuatorCommand(
        roll=clamp(roll_nm / (2.0 * f * params.arm_y_m), -1.0, 1.0),
        pitch=clamp(pitch_nm / (2.0 * f * params.arm_x_m), -1.0, 1.0),
        yaw=clamp(yaw_nm / (4.0 * q), -1.0, 1.0),
        thrust=clamp(thrust_n / (4.0 * f), -1.0, 1.0))
