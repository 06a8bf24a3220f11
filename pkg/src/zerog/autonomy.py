"""Mission mode sequencing for a parabolic flight.

The machine owns only timing and transition logic; what each mode commands
is decided by the executor in the simulation module. Times are the
simulation clock in seconds. Phase switches into and out of free fall are
time-based against the plan (the planner's switch times are the contract);
a large speed mismatch at the first switch is recorded as a warning rather
than re-planned.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .sizing import MissionPlan

ABORT_BRAKE_RECOVER = "brake-recover"
ABORT_POWER_CUT = "power-cut"

# fraction of the planned entry speed beyond which the ascent is flagged
SPEED_MISMATCH_FRACTION = 0.05


class MissionMode(enum.Enum):
    MANUAL = "manual"
    COUNTDOWN = "countdown"
    ASCENT = "ascent"
    MICROGRAVITY = "microgravity"
    BRAKE = "brake"
    STABILIZE = "stabilize"
    ABORT = "abort"


@dataclass
class MissionStateMachine:
    plan: MissionPlan
    countdown_s: float = 5.0
    manual_hold_s: float = 1.0
    abort_action: str = ABORT_BRAKE_RECOVER
    settle_climb_tol_mps: float = 0.2
    settle_altitude_tol_m: float = 0.5
    settle_hold_s: float = 3.0

    mode: MissionMode = MissionMode.MANUAL
    mode_entry_s: float = 0.0
    launch_time_s: float | None = None
    settled_since_s: float | None = None
    abort_reason: str | None = None
    power_cut: bool = False
    events: list[tuple[float, str]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.abort_action not in (ABORT_BRAKE_RECOVER, ABORT_POWER_CUT):
            raise ValueError(f"unknown abort_action {self.abort_action!r}")

    # ------------------------------------------------------------------
    def mission_time_s(self, t_s: float) -> float | None:
        """Seconds since launch (ascent start), None before launch."""
        if self.launch_time_s is None:
            return None
        return t_s - self.launch_time_s

    def _enter(self, mode: MissionMode, t_s: float, note: str = "") -> None:
        self.mode = mode
        self.mode_entry_s = t_s
        self.events.append((t_s, f"mode -> {mode.value}" + (f" ({note})" if note else "")))

    def trigger_abort(self, t_s: float, reason: str,
                      power_cut: bool | None = None) -> None:
        """Abort from any mode. power_cut overrides the configured action;
        once latched, the power cut never releases."""
        cut = self.abort_action == ABORT_POWER_CUT if power_cut is None else power_cut
        if cut and not self.power_cut:
            self.power_cut = True
            self.events.append((t_s, f"power cut ({reason})"))
        if self.mode is not MissionMode.ABORT:
            self.abort_reason = reason
            self.settled_since_s = None
            self._enter(MissionMode.ABORT, t_s, reason)

    # ------------------------------------------------------------------
    def step(self, t_s: float, altitude_m: float,
             climb_rate_mps: float) -> MissionMode:
        """Advance transitions for this control step and return the mode."""
        m = self.mode
        if m is MissionMode.MANUAL:
            if t_s - self.mode_entry_s >= self.manual_hold_s:
                self._enter(MissionMode.COUNTDOWN, t_s)
        elif m is MissionMode.COUNTDOWN:
            if t_s - self.mode_entry_s >= self.countdown_s:
                self.launch_time_s = t_s
                self._enter(MissionMode.ASCENT, t_s)
        elif m is MissionMode.ASCENT:
            tm = self.mission_time_s(t_s)
            if tm is not None and tm >= self.plan.t_switch1_s:
                v_ref = self.plan.entry_speed_mps
                if v_ref > 0.0 and (abs(climb_rate_mps - v_ref)
                                    > SPEED_MISMATCH_FRACTION * v_ref):
                    self.events.append(
                        (t_s, f"entry speed {climb_rate_mps:.2f} m/s deviates "
                              f"from plan {v_ref:.2f} m/s by more than "
                              f"{SPEED_MISMATCH_FRACTION:.0%}"))
                self._enter(MissionMode.MICROGRAVITY, t_s)
        elif m is MissionMode.MICROGRAVITY:
            tm = self.mission_time_s(t_s)
            if tm is not None and tm >= self.plan.t_switch2_s:
                self._enter(MissionMode.BRAKE, t_s)
        elif m is MissionMode.BRAKE:
            if self._settled(altitude_m, climb_rate_mps):
                self.settled_since_s = None
                self._enter(MissionMode.STABILIZE, t_s)
        elif m is MissionMode.STABILIZE:
            if self._hold_settled(t_s, altitude_m, climb_rate_mps):
                self._enter(MissionMode.MANUAL, t_s, "mission complete")
        elif m is MissionMode.ABORT:
            if not self.power_cut and self._hold_settled(t_s, altitude_m,
                                                         climb_rate_mps):
                self._enter(MissionMode.MANUAL, t_s, "abort recovered")
        return self.mode

    def _settled(self, altitude_m: float, climb_rate_mps: float) -> bool:
        return (abs(climb_rate_mps) < self.settle_climb_tol_mps
                and abs(altitude_m - self.plan.park_altitude_m)
                < self.settle_altitude_tol_m)

    def _hold_settled(self, t_s: float, altitude_m: float,
                      climb_rate_mps: float) -> bool:
        """True once the settle condition has held for settle_hold_s."""
        if self._settled(altitude_m, climb_rate_mps):
            if self.settled_since_s is None:
                self.settled_since_s = t_s
            return t_s - self.settled_since_s >= self.settle_hold_s
        self.settled_since_s = None
        return False
