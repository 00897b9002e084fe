"""Parity shooting for the spiked square well, plus barrier approximations.

Only the left half ``[-1, 0)`` is integrated. Starting from the wall with
``psi(-1) = 0, psi'(-1) = 1``, the solution is carried to ``x = -delta``
where the origin condition is imposed: ``psi' = 0`` for even states and
``psi = 0`` for odd ones. The logarithmic singularity is integrable, so the
cutoff error is of order ``delta |ln delta|``.
"""

import enum
import math
import warnings
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy.integrate import simpson

from .errors import (
    ApproximationDomainError,
    BracketError,
    ConfigurationError,
    DomainError,
    StateError,
)
from .integrate import IvpState, integrate_ivp, sample_ivp
from .perturb import unperturbed_energy

SCAN_STEPS = 64
# Scaled mismatch a converged level must stay below (see wavefunction()).
RESIDUAL_LIMIT = 1e-6
NORMALIZATIONS = ("max", "l2")


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"

    @classmethod
    def of(cls, n):
        return cls.EVEN if n % 2 == 0 else cls.ODD

    @property
    def sign(self):
        """Reflection sign: ``psi(-x) = sign * psi(x)``."""
        return 1.0 if self is Parity.EVEN else -1.0


@dataclass(frozen=True)
class ModelParams:
    """Coupling ``g`` and the numerical settings of one solve."""

    g: float
    delta: float = 1e-10
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12

    def __post_init__(self):
        if not (math.isfinite(self.g) and self.g >= 0):
            raise ConfigurationError(f"g must be finite and >= 0, got {self.g!r}")
        if not (0 < self.delta < 0.01):
            raise ConfigurationError(
                f"delta must lie in (0, 0.01), got {self.delta!r}")
        for name in ("rel_tol", "abs_tol"):
            tol = getattr(self, name)
            if not (1e-14 <= tol <= 1e-3):
                raise ConfigurationError(f"{name}={tol!r} outside [1e-14, 1e-3]")


@dataclass(frozen=True)
class EnergyLevel:
    n: int
    parity: Parity
    energy: float


@dataclass
class WaveGrid:
    """Wavefunction samples on a grid.

    ``normalization`` is ``"max"`` (max |psi| = 1), ``"l2"`` (unit norm) or
    ``None`` for raw amplitudes. ``clamped`` is set when a local wavenumber
    had a negative radicand that was clamped to zero.
    """

    x: np.ndarray
    psi: np.ndarray
    normalization: Optional[str] = "max"
    energy: Optional[float] = None
    clamped: bool = False

    @property
    def samples(self):
        return list(zip(self.x.tolist(), self.psi.tolist()))

    def sign_changes(self):
        """Number of sign changes of psi along the grid, skipping zeros."""
        s = np.sign(self.psi)
        s = s[s != 0]
        return int(np.count_nonzero(s[1:] != s[:-1]))


@dataclass(frozen=True)
class BarrierApprox:
    """Rectangular stand-in for the spike at energy ``E``.

    The barrier occupies ``(-d, d)`` where ``d`` is the turning point; its
    height is the mean of V over that interval, ``E + 2g``, so the inner
    decay constant is ``kappa = sqrt(2g)``.
    """

    energy: float
    d: float
    k: float
    kappa: float

    @classmethod
    def at(cls, E, g):
        if not g > 0:
            raise DomainError(f"barrier approximation needs g > 0, got {g!r}")
        if not E > 0:
            raise DomainError(f"barrier approximation needs E > 0, got {E!r}")
        d = barrier_halfwidth(E, g)
        if not 0 < d < 1:
            raise ApproximationDomainError(f"turning point d={d!r} outside (0, 1)")
        return cls(E, d, math.sqrt(E), math.sqrt(2.0 * g))


def potential(x, g):
    """The spike ``-2 g ln|x|`` inside the well."""
    if x == 0:
        raise DomainError("potential is singular at x = 0")
    if abs(x) >= 1:
        raise DomainError(f"x={x!r} lies outside the well (|x| < 1)")
    return -2.0 * g * math.log(abs(x))


def barrier_halfwidth(E, g):
    """Turning point ``d(E) = exp(-E / (2g))`` where the spike equals ``E``."""
    if not g > 0:
        raise DomainError(f"g must be positive, got {g!r}")
    return math.exp(-E / (2.0 * g))


def _left_coefficient(E, g):
    two_g = 2.0 * g

    def coefficient(x):
        return -two_g * math.log(-x) - E

    return coefficient


def _shoot(E, params, record=False):
    return integrate_ivp(_left_coefficient(E, params.g), IvpState(-1.0, 0.0, 1.0),
                         -params.delta, params.rel_tol, params.abs_tol,
                         record=record)


def _scaled_mismatch(sol, parity):
    end = sol.final
    value = end.dy if parity is Parity.EVEN else end.y
    return value / max(sol.max_abs_y, sol.max_abs_dy)


def mismatch(E, params, parity):
    """Origin mismatch of the left-half solution at trial energy ``E``.

    Returns ``psi'(-delta)`` (even) or ``psi(-delta)`` (odd), divided by the
    largest |psi| or |psi'| met on the way. Zeros in ``E`` are eigenvalues.
    """
    if not math.isfinite(E):
        raise DomainError(f"energy must be finite, got {E!r}")
    return _scaled_mismatch(_shoot(E, params), Parity(parity))


def _scan(n, params, lo, hi):
    """First bracket in [lo, hi] holding level n, or None."""
    parity = Parity.of(n)
    target_nodes = n // 2
    step = (hi - lo) / SCAN_STEPS
    prev = None
    for i in range(SCAN_STEPS + 1):
        E = lo + i * step
        sol = _shoot(E, params)
        value = _scaled_mismatch(sol, parity)
        if prev is not None:
            E_prev, v_prev, nodes_prev = prev
            if v_prev == 0.0 and nodes_prev == target_nodes:
                return E_prev, E_prev, v_prev, v_prev
            if v_prev * value < 0 and nodes_prev == target_nodes:
                return E_prev, E, v_prev, value
            if nodes_prev > target_nodes:
                return None
        prev = (E, value, sol.sign_changes)
    return None


def eigenvalue(n, params, e_tol=1e-10):
    """Energy of level ``n`` by scan-and-bisect on the origin mismatch.

    The scan covers ``[E0 - h, E0 + 4g + 4]`` with ``E0`` the unperturbed
    energy and ``h`` one scan step; the first-order shift never exceeds
    ``3.2 g``, so the level sits inside. A bracket belongs to level ``n``
    when the left-half solution at its lower end has ``n // 2`` nodes.
    """
    if int(n) != n or n < 0:
        raise DomainError(f"n must be a nonnegative integer, got {n!r}")
    n = int(n)
    if e_tol < 1e-12:
        raise ConfigurationError(f"e_tol={e_tol!r} below 1e-12")
    parity = Parity.of(n)
    E0 = unperturbed_energy(n)
    width = 4.0 * params.g + 4.0
    step = width / SCAN_STEPS
    bracket = _scan(n, params, E0 - step, E0 + width)
    if bracket is None:
        # one retry on a doubled window before giving up
        bracket = _scan(n, params, E0 - step, E0 + 2 * width)
    if bracket is None:
        raise BracketError(
            f"no sign change for level n={n} in [{E0 - step:.6g}, "
            f"{E0 + 2 * width:.6g}] at g={params.g!r}", n=n)

    lo, hi, v_lo, v_hi = bracket
    while hi - lo > e_tol:
        mid = 0.5 * (lo + hi)
        v_mid = mismatch(mid, params, parity)
        if v_mid == 0.0:
            lo = hi = mid
            break
        if (v_mid < 0) == (v_lo < 0):
            lo, v_lo = mid, v_mid
        else:
            hi, v_hi = mid, v_mid
    return EnergyLevel(n, parity, 0.5 * (lo + hi))


def spectrum(params, n_max, e_tol=1e-10) -> List[EnergyLevel]:
    """Levels ``0..n_max`` in increasing order."""
    if int(n_max) != n_max or not 0 <= n_max <= 50:
        raise ConfigurationError(f"n_max must be an integer in [0, 50], got {n_max!r}")
    levels = [eigenvalue(n, params, e_tol) for n in range(int(n_max) + 1)]
    for a, b in zip(levels, levels[1:]):
        if not a.energy < b.energy:
            raise BracketError(
                f"levels {a.n} and {b.n} are out of order", n=b.n)
    return levels


def _normalize(psi, x, normalization):
    if normalization is None:
        return psi
    if normalization == "max":
        return psi / np.max(np.abs(psi))
    if normalization == "l2":
        return psi / math.sqrt(simpson(psi * psi, x=x))
    raise ConfigurationError(
        f"normalization must be one of {NORMALIZATIONS}, got {normalization!r}")


def wavefunction(level, params, points=401, normalization="max"):
    """Sample the eigenfunction of ``level`` on a uniform grid of [-1, 1].

    The left half is integrated with forced stops at the grid points and
    reflected with the parity sign. Grid points within ``delta`` of the
    origin are filled by linear continuation: constant for even states,
    through zero for odd ones. The overall sign has ``psi'(-1) > 0``.
    """
    if points < 16:
        raise ConfigurationError(f"points must be >= 16, got {points!r}")
    parity = level.parity
    if parity is not Parity.of(level.n):
        raise StateError(f"level n={level.n} carries the wrong parity {parity}")
    residual = mismatch(level.energy, params, parity)
    if abs(residual) > RESIDUAL_LIMIT:
        raise StateError(
            f"energy {level.energy!r} is not a converged eigenvalue "
            f"(scaled mismatch {residual:.3e})")

    x = np.linspace(-1.0, 1.0, points)
    half = points // 2
    left = x[:half]
    psi = np.zeros(points)
    coefficient = _left_coefficient(level.energy, params.g)
    start = IvpState(-1.0, 0.0, 1.0)
    inside = left[(left > -1.0) & (left <= -params.delta)]
    stops = list(inside)
    if not stops or stops[-1] != -params.delta:
        stops.append(-params.delta)
    states = sample_ivp(coefficient, start, stops, params.rel_tol, params.abs_tol)
    by_x = {s.x: s.y for s in states}
    edge = states[-1].y
    for j, xj in enumerate(left):
        if xj == -1.0:
            psi[j] = 0.0
        elif xj <= -params.delta:
            psi[j] = by_x[xj]
        elif parity is Parity.EVEN:
            psi[j] = edge
        else:
            psi[j] = edge * xj / -params.delta
    if points % 2:
        psi[half] = edge if parity is Parity.EVEN else 0.0
    psi[points - half:] = parity.sign * psi[:half][::-1]
    psi = _normalize(psi, x, normalization)
    return WaveGrid(x, psi, normalization, energy=level.energy)


def _as_parity(parity):
    return parity if isinstance(parity, Parity) else Parity(parity)


def rect_approx_wavefunction(E, g, parity, points=401, normalization="max"):
    """Piecewise elementary approximation with a rectangular inner barrier.

    Outer pieces are ``sin((x+1)k)`` and ``-+sin((x-1)k)`` with ``k =
    sqrt(E)``; the inner piece is ``cosh(kappa x)`` or ``sinh(kappa x)``
    with ``kappa = sqrt(2g)``, scaled to meet the outer pieces at ``+-d``.
    Pass ``normalization=None`` for the unscaled outer amplitude.
    """
    parity = _as_parity(parity)
    b = BarrierApprox.at(E, g)
    x = np.linspace(-1.0, 1.0, points)
    k, kappa, d = b.k, b.kappa, b.d
    edge = math.sin((1.0 - d) * k)
    if parity is Parity.EVEN:
        inner = edge / math.cosh(kappa * d) * np.cosh(kappa * x)
    else:
        inner = -edge / math.sinh(kappa * d) * np.sinh(kappa * x)
    outer_left = np.sin((x + 1.0) * k)
    outer_right = -parity.sign * np.sin((x - 1.0) * k)
    psi = np.where(x <= -d, outer_left, np.where(x >= d, outer_right, inner))
    return WaveGrid(x, _normalize(psi, x, normalization), normalization, energy=E)


def wkb_approx_wavefunction(E, g, parity, points=401, normalization="max"):
    """Locally adapted version of :func:`rect_approx_wavefunction`.

    The constant wavenumbers become ``mu(x) = sqrt(E - V(x))`` outside the
    turning points and ``nu(x) = sqrt(V(x) - E)`` inside. Negative radicands
    (rounding at ``+-d``) are clamped to zero and flagged on the grid.
    """
    parity = _as_parity(parity)
    b = BarrierApprox.at(E, g)
    d = b.d
    x = np.linspace(-1.0, 1.0, points)
    ax = np.abs(x)
    with np.errstate(divide="ignore"):
        V = np.where(ax > 0, -2.0 * g * np.log(np.where(ax > 0, ax, 1.0)), np.inf)
    outer_mask = ax >= d
    inner_mask = ~outer_mask
    mu2 = E - V
    nu2 = V - E
    clamped = bool(np.any(mu2[outer_mask] < 0) or np.any(nu2[inner_mask] < 0))
    if clamped:
        warnings.warn("negative local radicand clamped to zero", RuntimeWarning,
                      stacklevel=2)
    mu = np.sqrt(np.clip(np.where(outer_mask, mu2, 0.0), 0.0, None))
    with np.errstate(invalid="ignore"):
        # nu * x -> 0 at the origin although nu diverges
        nu_x = np.where(ax > 0, np.sqrt(np.clip(np.where(inner_mask, nu2, 0.0),
                                                0.0, None)) * x, 0.0)

    # Amplitude matching at the turning points, where mu = nu = 0.
    edge = math.sin(0.0 * (1.0 - d))
    if parity is Parity.EVEN:
        inner = edge * np.cosh(nu_x)
    else:
        inner = edge * np.sinh(nu_x)
    outer_left = np.sin(mu * (x + 1.0))
    outer_right = -parity.sign * np.sin(mu * (x - 1.0))
    psi = np.where(x <= -d, outer_left, np.where(x >= d, outer_right, inner))
    return WaveGrid(x, _normalize(psi, x, normalization), normalization,
                    energy=E, clamped=clamped)


def _rect_matching(E, g, parity):
    # d may underflow to 0 at tiny g; the matching stays well defined
    k, kappa, d = math.sqrt(E), math.sqrt(2.0 * g), barrier_halfwidth(E, g)
    s, c = math.sin(k * (1.0 - d)), math.cos(k * (1.0 - d))
    if parity is Parity.EVEN:
        return k * c * math.cosh(kappa * d) + kappa * math.sinh(kappa * d) * s
    return k * c * math.sinh(kappa * d) / kappa + math.cosh(kappa * d) * s


def rect_approx_energy(n, g, e_tol=1e-10):
    """Energy of level ``n`` in the rectangular-barrier approximation.

    Root of the log-derivative continuity at ``x = -d(E)``; for even states
    ``k cot(k(1-d)) = -kappa tanh(kappa d)``, for odd ones with ``coth``.
    Returns ``None`` (with a warning) when the scan finds no root.
    """
    if not g > 0:
        raise DomainError(f"g must be positive, got {g!r}")
    parity = Parity.of(n)
    E0 = unperturbed_energy(n)
    width = 4.0 * g + 4.0
    step = width / SCAN_STEPS
    lo = max(E0 - step, 0.5 * E0)
    f_lo = _rect_matching(lo, g, parity)
    for i in range(1, SCAN_STEPS + 2):
        hi = E0 - step + i * step
        f_hi = _rect_matching(hi, g, parity)
        if f_lo == 0.0:
            return lo
        if f_lo * f_hi < 0:
            break
        lo, f_lo = hi, f_hi
    else:
        warnings.warn(f"no rectangular-barrier root for n={n} at g={g}",
                      RuntimeWarning, stacklevel=2)
        return None
    while hi - lo > e_tol:
        mid = 0.5 * (lo + hi)
        f_mid = _rect_matching(mid, g, parity)
        if f_mid == 0.0:
            return mid
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
