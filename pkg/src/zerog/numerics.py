"""Small deterministic numerical helpers."""

from __future__ import annotations

from typing import Callable


def solve_root_bracketed(f: Callable[[float], float], a: float, b: float,
                         fa: float | None = None, fb: float | None = None,
                         xtol: float = 1e-10, max_iter: int = 100) -> float:
    """Root of f on a bracketing interval [a, b] (f(a), f(b) opposite signs).

    Damped secant iteration with bisection fallback: a secant step is taken
    when it lands inside the current bracket and shrinks it enough, else the
    midpoint is used. Fully deterministic; converges for any continuous f.
    """
    fa = f(a) if fa is None else fa
    fb = f(b) if fb is None else fb
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0.0) == (fb > 0.0):
        raise ValueError("solve_root_bracketed: interval does not bracket a root")
    for _ in range(max_iter):
        if abs(b - a) <= xtol:
            break
        # secant candidate from current bracket endpoints
        denom = fb - fa
        x = b - fb * (b - a) / denom if denom != 0.0 else 0.5 * (a + b)
        lo, hi = (a, b) if a < b else (b, a)
        margin = 0.01 * (hi - lo)
        if not (lo + margin <= x <= hi - margin):
            x = 0.5 * (a + b)  # damped: fall back to bisection
        fx = f(x)
        if fx == 0.0:
            return x
        if (fx > 0.0) == (fa > 0.0):
            a, fa = x, fx
        else:
            b, fb = x, fx
    return 0.5 * (a + b)


def clamp(x: float, lo: float, hi: float) -> float:
    return lo if x < lo else hi if x > hi else x
