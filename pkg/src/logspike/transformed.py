"""The left half of the well in the variable ``lambda = -ln(-x)``.

With ``psi(x) = exp(-lambda/2) phi(lambda)`` the Schroedinger equation on
``(-1, 0)`` becomes ``phi'' = c(lambda) phi`` on the half-line, with

    c(lambda) = 1/4 - exp(-2 lambda) (E - 2 g lambda),

the wall at ``lambda = 0`` and the spike pushed out to infinity. Both
fundamental solutions grow or decay like ``exp(+-lambda/2)`` there, so the
energy only enters through the subdominant one. Integrating backward from a
finite ``lambda_max`` is therefore a badly conditioned way to locate
eigenvalues; :func:`conditioning_study` tabulates that failure. Production
eigenvalues come from :mod:`logspike.shooting`.
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .errors import ConfigurationError
from .integrate import IvpSolution, IvpState, integrate_ivp, sample_ivp

LAMBDA_CAP = 50.0
# Forward solutions are rescaled to unit amplitude beyond this size.
RENORM_THRESHOLD = 1e12


@dataclass(frozen=True)
class TransformedParams:
    g: float
    E: float
    lambda_max: float
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12

    def __post_init__(self):
        if not self.g > 0:
            raise ConfigurationError(f"g must be positive, got {self.g!r}")
        if not math.isfinite(self.E):
            raise ConfigurationError(f"E must be finite, got {self.E!r}")
        if not 1.0 <= self.lambda_max <= LAMBDA_CAP:
            raise ConfigurationError(
                f"lambda_max={self.lambda_max!r} outside [1, {LAMBDA_CAP:g}]")


@dataclass(frozen=True)
class ConditioningRow:
    E: float
    lambda_max: float
    phi_at_zero: float
    difference: Optional[float] = None


def transformed_coefficient(lam, E, g):
    """``c(lambda) = 1/4 - exp(-2 lambda) (E - 2 g lambda)``."""
    return 0.25 - math.exp(-2.0 * lam) * (E - 2.0 * g * lam)


def _left(E, g):
    def coefficient(lam):
        return 0.25 - math.exp(-2.0 * lam) * (E - 2.0 * g * lam)
    return coefficient


def _right(E, g):
    # second half-line, rho in (-lambda_max, 0)
    def coefficient(rho):
        return 0.25 - math.exp(2.0 * rho) * (E + 2.0 * g * rho)
    return coefficient


def forward_solve(params: TransformedParams, record: bool = False) -> IvpSolution:
    """Integrate from the wall (``phi(0) = 0, phi'(0) = 1``) to ``lambda_max``.

    The run is split into unit segments; after any segment where |phi|
    exceeds ``RENORM_THRESHOLD`` the state (and recorded trajectory) is
    rescaled to unit amplitude and the scale is accumulated in
    ``log_scale``.
    """
    coefficient = _left(params.E, params.g)
    state = IvpState(0.0, 0.0, 1.0)
    trajectory = [state] if record else None
    log_scale = 0.0
    steps = 0
    max_y = max_dy = 0.0
    flips = 0
    step = None
    edges = list(np.arange(1.0, params.lambda_max, 1.0)) + [params.lambda_max]
    for edge in edges:
        sol = integrate_ivp(coefficient, state, edge, params.rel_tol,
                            params.abs_tol, record=record, first_step=step)
        step = sol.last_step
        steps += sol.steps_taken
        flips += sol.sign_changes
        scale = math.exp(log_scale)
        max_y = max(max_y, sol.max_abs_y * scale)
        max_dy = max(max_dy, sol.max_abs_dy * scale)
        if record:
            trajectory.extend(sol.trajectory[1:])
        state = sol.final
        size = abs(state.y)
        if size > RENORM_THRESHOLD:
            state = IvpState(state.x, state.y / size, state.dy / size)
            log_scale += math.log(size)
            if record:
                trajectory = [IvpState(s.x, s.y / size, s.dy / size)
                              for s in trajectory]
    return IvpSolution(final=state, trajectory=trajectory, steps_taken=steps,
                       max_abs_y=max_y, max_abs_dy=max_dy, sign_changes=flips,
                       log_scale=log_scale)


def forward_sample(params: TransformedParams, lambdas: Sequence[float]):
    """``phi`` and ``phi'`` of the forward solution at increasing ``lambdas``."""
    states = sample_ivp(_left(params.E, params.g), IvpState(0.0, 0.0, 1.0),
                        lambdas, params.rel_tol, params.abs_tol)
    return (np.array([s.y for s in states]), np.array([s.dy for s in states]))


def backward_solve(params: TransformedParams) -> float:
    """``phi(0)`` after integrating down from ``phi(lambda_max) = 1``,
    ``phi'(lambda_max) = 0``."""
    sol = integrate_ivp(_left(params.E, params.g),
                        IvpState(params.lambda_max, 1.0, 0.0), 0.0,
                        params.rel_tol, params.abs_tol)
    return sol.final.y


def conditioning_study(E_values, lambda_max_values, g) -> List[ConditioningRow]:
    """Table of backward ``phi(0)`` over energies and cutoffs.

    Rows are grouped by energy, cutoffs increasing; ``difference`` is the
    change from the previous cutoff at the same energy.
    """
    lams = [float(v) for v in lambda_max_values]
    if any(b <= a for a, b in zip(lams, lams[1:])):
        raise ConfigurationError("lambda_max values must be strictly increasing")
    rows = []
    for E in E_values:
        prev = None
        for lam in lams:
            phi0 = backward_solve(TransformedParams(g, E, lam))
            diff = None if prev is None else phi0 - prev
            rows.append(ConditioningRow(E, lam, phi0, diff))
            prev = phi0
    return rows


def right_side_equivalence(E, g, lambda_max, samples=101) -> float:
    """Largest deviation between the right half-line problem, mapped by
    ``rho = -lambda``, and the left one.

    The right problem starts at ``rho = 0`` with ``phi'(0) = +-1`` (the two
    parities); each is compared with the correspondingly signed left
    solution on ``samples`` points.
    """
    params = TransformedParams(g, E, lambda_max)
    lams = np.linspace(0.0, lambda_max, samples)[1:]
    left, _ = forward_sample(params, lams)
    worst = 0.0
    for slope in (-1.0, 1.0):
        states = sample_ivp(_right(E, g), IvpState(0.0, 0.0, slope), -lams,
                            params.rel_tol, params.abs_tol)
        mapped = np.array([s.y for s in states])
        # phi_R(-lambda) solves the left equation with initial slope -slope
        worst = max(worst, float(np.max(np.abs(mapped - (-slope) * left))))
    return worst
