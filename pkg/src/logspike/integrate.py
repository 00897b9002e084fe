"""Adaptive Runge-Kutta integration of ``y'' = c(x) y``.

The Dormand-Prince 5(4) pair is hard-coded for the two-component system
``(y, y')`` and works on plain floats; every solve in the package goes
through here, so the inner loop avoids numpy overhead.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np

from .errors import ConfigurationError, DomainError, StiffnessError

DEFAULT_REL_TOL = 1e-10
DEFAULT_ABS_TOL = 1e-12
MIN_TOL, MAX_TOL = 1e-14, 1e-3

# Dormand-Prince tableau
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = (
    9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656)
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
# 5th minus embedded 4th order weights
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

_SAFETY = 0.9
_PI_ALPHA = 0.7 / 5
_PI_BETA = 0.4 / 5
_MIN_FACTOR, _MAX_FACTOR = 0.2, 5.0
_UNDERFLOW = 1e-15


@dataclass(frozen=True)
class IvpState:
    x: float
    y: float
    dy: float


@dataclass
class IvpSolution:
    """Result of :func:`integrate_ivp`.

    ``sign_changes`` counts sign flips of ``y`` between accepted steps,
    ignoring exact zeros. ``log_scale`` is nonzero only for callers that
    renormalize long solutions; the true solution is the stored one times
    ``exp(log_scale)``.
    """

    final: IvpState
    trajectory: Optional[List[IvpState]] = None
    steps_taken: int = 0
    max_abs_y: float = 0.0
    max_abs_dy: float = 0.0
    sign_changes: int = 0
    log_scale: float = 0.0
    last_step: float = field(default=0.0, repr=False)

    def arrays(self):
        """Trajectory as ``(x, y, dy)`` numpy arrays."""
        if self.trajectory is None:
            raise ValueError("solution was computed with record=False")
        data = np.array([(s.x, s.y, s.dy) for s in self.trajectory])
        return data[:, 0], data[:, 1], data[:, 2]


def _check_tolerances(rel_tol, abs_tol):
    for name, tol in (("rel_tol", rel_tol), ("abs_tol", abs_tol)):
        if not (MIN_TOL <= tol <= MAX_TOL):
            raise ConfigurationError(
                f"{name}={tol!r} outside [{MIN_TOL:g}, {MAX_TOL:g}]")


def _eval(coefficient, x):
    c = coefficient(x)
    if not math.isfinite(c):
        raise DomainError(f"coefficient is not finite at x={x!r}")
    return c


def integrate_ivp(
    coefficient: Callable[[float], float],
    start: IvpState,
    to_x: float,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
    record: bool = False,
    first_step: Optional[float] = None,
) -> IvpSolution:
    """Advance ``y'' = coefficient(x) * y`` from ``start`` to ``to_x``.

    Integration runs in either direction. Each accepted step keeps the local
    error estimate of both ``y`` and ``y'`` below ``abs_tol + rel_tol*|.|``.
    With ``record=True`` the state after every accepted step is kept.
    ``first_step`` overrides the default initial step of
    ``1e-4 * |to_x - start.x|``.
    """
    _check_tolerances(rel_tol, abs_tol)
    x, y, v = float(start.x), float(start.y), float(start.dy)
    to_x = float(to_x)
    if not all(map(math.isfinite, (x, y, v, to_x))):
        raise DomainError("initial state and end point must be finite")
    span = to_x - x
    if span == 0.0:
        raise ConfigurationError("to_x must differ from the initial x")
    direction = 1.0 if span > 0 else -1.0
    min_step = _UNDERFLOW * abs(span)

    h = abs(first_step) if first_step else 1e-4 * abs(span)
    h = min(h, abs(span)) * direction

    trajectory = [IvpState(x, y, v)] if record else None
    max_y, max_dy = abs(y), abs(v)
    last_sign = 0 if y == 0.0 else (1 if y > 0 else -1)
    flips = 0
    steps = 0
    err_prev = 1.0

    c1 = _eval(coefficient, x)
    k1y, k1v = v, c1 * y
    while True:
        remaining = to_x - x
        proposed = h
        last = abs(h) >= abs(remaining)
        if last:
            h = remaining
        # stages
        y2 = y + h * _A21 * k1y
        v2 = v + h * _A21 * k1v
        k2y, k2v = v2, _eval(coefficient, x + _C2 * h) * y2
        y3 = y + h * (_A31 * k1y + _A32 * k2y)
        v3 = v + h * (_A31 * k1v + _A32 * k2v)
        k3y, k3v = v3, _eval(coefficient, x + _C3 * h) * y3
        y4 = y + h * (_A41 * k1y + _A42 * k2y + _A43 * k3y)
        v4 = v + h * (_A41 * k1v + _A42 * k2v + _A43 * k3v)
        k4y, k4v = v4, _eval(coefficient, x + _C4 * h) * y4
        y5 = y + h * (_A51 * k1y + _A52 * k2y + _A53 * k3y + _A54 * k4y)
        v5 = v + h * (_A51 * k1v + _A52 * k2v + _A53 * k3v + _A54 * k4v)
        k5y, k5v = v5, _eval(coefficient, x + _C5 * h) * y5
        y6 = y + h * (_A61 * k1y + _A62 * k2y + _A63 * k3y + _A64 * k4y
                      + _A65 * k5y)
        v6 = v + h * (_A61 * k1v + _A62 * k2v + _A63 * k3v + _A64 * k4v
                      + _A65 * k5v)
        x_new = to_x if last else x + h
        c_end = _eval(coefficient, x_new)
        k6y, k6v = v6, c_end * y6
        y_new = y + h * (_B1 * k1y + _B3 * k3y + _B4 * k4y + _B5 * k5y
                         + _B6 * k6y)
        v_new = v + h * (_B1 * k1v + _B3 * k3v + _B4 * k4v + _B5 * k5v
                         + _B6 * k6v)
        k7y, k7v = v_new, c_end * y_new

        ey = h * (_E1 * k1y + _E3 * k3y + _E4 * k4y + _E5 * k5y + _E6 * k6y
                  + _E7 * k7y)
        ev = h * (_E1 * k1v + _E3 * k3v + _E4 * k4v + _E5 * k5v + _E6 * k6v
                  + _E7 * k7v)
        sy = abs_tol + rel_tol * max(abs(y), abs(y_new))
        sv = abs_tol + rel_tol * max(abs(v), abs(v_new))
        err = max(abs(ey) / sy, abs(ev) / sv)
        if not math.isfinite(err):
            raise DomainError(f"non-finite solution near x={x!r}")

        if err <= 1.0:
            steps += 1
            x, y, v = x_new, y_new, v_new
            k1y, k1v = k7y, k7v
            if record:
                trajectory.append(IvpState(x, y, v))
            max_y = max(max_y, abs(y))
            max_dy = max(max_dy, abs(v))
            if y != 0.0:
                sign = 1 if y > 0 else -1
                if last_sign and sign != last_sign:
                    flips += 1
                last_sign = sign
            if last:
                break
            if err == 0.0:
                factor = _MAX_FACTOR
            else:
                factor = _SAFETY * err ** -_PI_ALPHA * err_prev ** _PI_BETA
                factor = min(_MAX_FACTOR, max(_MIN_FACTOR, factor))
            err_prev = max(err, 1e-4)
            h *= factor
        else:
            factor = max(_MIN_FACTOR, _SAFETY * err ** -0.2)
            h *= factor
            if abs(h) < min_step:
                raise StiffnessError(
                    f"step size underflow at x={x!r} (h={h:.3e})")

    return IvpSolution(
        final=IvpState(x, y, v),
        trajectory=trajectory,
        steps_taken=steps,
        max_abs_y=max_y,
        max_abs_dy=max_dy,
        sign_changes=flips,
        last_step=abs(proposed),
    )


def sample_ivp(
    coefficient: Callable[[float], float],
    start: IvpState,
    stops: Sequence[float],
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
) -> List[IvpState]:
    """Integrate through ``stops`` (monotone, away from ``start.x``) and
    return the state at each one.

    Each stop is hit exactly; the step size carries over between segments.
    """
    states = []
    state = start
    step = None
    for stop in stops:
        if stop == state.x:
            states.append(state)
            continue
        sol = integrate_ivp(coefficient, state, stop, rel_tol, abs_tol,
                            first_step=step)
        state = sol.final
        step = sol.last_step
        states.append(state)
    return states
