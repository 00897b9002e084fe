"""First-order Rayleigh-Schroedinger perturbation theory for the spiked well.

The unperturbed problem is the square well on [-1, 1] with energies
``((n+1) pi / 2)**2``. The spike ``-2 g ln|x|`` shifts level ``n`` by
``g * first_order(n)`` at first order, and the shift has a closed form in
terms of the sine integral.
"""

import math
from dataclasses import dataclass
from typing import Optional

from scipy import integrate

from .errors import ConfigurationError, DomainError
from .specfun import si

# Inner/outer split of [0, 1] for the quadrature oracle.
_QUAD_SPLIT = 1e-3


def _check_index(n, name="n"):
    if int(n) != n or n < 0:
        raise DomainError(f"{name} must be a nonnegative integer, got {n!r}")
    return int(n)


def unperturbed_energy(n):
    """Energy ``((n+1) pi/2)**2`` of level ``n`` of the empty well."""
    n = _check_index(n)
    return ((n + 1) * math.pi / 2) ** 2


def first_order_even(p):
    """First-order coefficient of the even level ``n = 2p``."""
    p = _check_index(p, "p")
    a = (2 * p + 1) * math.pi
    return 2.0 + 2.0 / a * si(a)


def first_order_odd(q):
    """First-order coefficient of the odd level ``n = 2q + 1``."""
    q = _check_index(q, "q")
    a = (2 * q + 2) * math.pi
    return 2.0 - 2.0 / a * si(a)


def first_order(n):
    """First-order energy coefficient of level ``n`` (closed form)."""
    n = _check_index(n)
    if n % 2 == 0:
        return first_order_even(n // 2)
    return first_order_odd((n - 1) // 2)


def first_order_quadrature(n, tol=1e-10):
    """First-order coefficient of level ``n`` by direct quadrature.

    Integrates ``-4 * int_0^1 u_n(x)**2 ln(x) dx`` where ``u_n`` is the
    unperturbed eigenfunction on the right half (``cos`` for even ``n``,
    ``sin`` for odd). The logarithmic endpoint is handled by splitting at
    ``1e-3`` and substituting ``x = exp(-u)`` on the inner piece, which
    turns it into a smooth, exponentially decaying integrand on
    ``[ln 1000, inf)``. Independent of the sine integral, so it serves as an
    oracle for :func:`first_order`.
    """
    n = _check_index(n)
    if not (1e-14 <= tol <= 1e-4):
        raise ConfigurationError(f"tol={tol!r} outside [1e-14, 1e-4]")
    k = (n + 1) * math.pi / 2
    if n % 2 == 0:
        def weight(x):
            return math.cos(k * x) ** 2
    else:
        def weight(x):
            return math.sin(k * x) ** 2

    def outer(x):
        return weight(x) * math.log(x)

    def inner(u):
        x = math.exp(-u)
        return -weight(x) * u * x

    # Half the budget per piece; the oscillatory outer piece needs a deep
    # subdivision limit at large n.
    limit = 200 + 20 * n
    a, _ = integrate.quad(outer, _QUAD_SPLIT, 1.0, epsabs=tol / 4,
                          epsrel=0.0, limit=limit)
    b, _ = integrate.quad(inner, -math.log(_QUAD_SPLIT), math.inf,
                          epsabs=tol / 4, epsrel=0.0, limit=limit)
    return -4.0 * (a + b)


def tail_bound_even(R):
    """``int_0^{exp(-R)} ln x dx = -(R+1) exp(-R)``.

    Leading estimate of the even-state contribution from ``(0, exp(-R))``.
    """
    if not R > 0:
        raise DomainError(f"R must be positive, got {R!r}")
    return -(R + 1.0) * math.exp(-R)


def tail_bound_odd(R):
    """``int_0^{exp(-R)} x**2 ln x dx = -(3R+1) exp(-3R) / 9``."""
    if not R > 0:
        raise DomainError(f"R must be positive, got {R!r}")
    return -(3.0 * R + 1.0) * math.exp(-3.0 * R) / 9.0


def linear_energy(n, g):
    """Energy of level ``n`` truncated after the term linear in ``g``."""
    if g < 0:
        raise DomainError(f"g must be nonnegative, got {g!r}")
    return unperturbed_energy(n) + g * first_order(n)


@dataclass(frozen=True)
class CrossingEstimate:
    """Coupling at which the first-order lines of levels m < n intersect.

    ``spurious`` marks crossings between levels of equal parity, which the
    exact spectrum cannot reproduce.
    """

    m: int
    n: int
    g_cross: float
    spurious: bool


def crossing(m, n) -> Optional[CrossingEstimate]:
    """Positive coupling where ``linear_energy(m, g) == linear_energy(n, g)``.

    Returns ``None`` if the two first-order lines do not meet at ``g > 0``.
    """
    m = _check_index(m, "m")
    n = _check_index(n, "n")
    if m >= n:
        raise DomainError(f"crossing() requires m < n, got m={m}, n={n}")
    slope_gap = first_order(m) - first_order(n)
    if slope_gap <= 0:
        return None
    g = (unperturbed_energy(n) - unperturbed_energy(m)) / slope_gap
    return CrossingEstimate(m, n, g, spurious=(m % 2 == n % 2))
