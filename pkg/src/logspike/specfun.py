"""Sine integral Si(x) = int_0^x sin(t)/t dt for real arguments.

Small arguments use the Maclaurin series. Above ``SERIES_LIMIT`` the
auxiliary functions f and g are taken from the continued fraction of
``exp(ix) E1(ix) = g(x) - i f(x)`` and

    Si(x) = pi/2 - f(x) cos(x) - g(x) sin(x).
"""

import math

SERIES_LIMIT = 4.0
# Terms are dropped once they fall below this fraction of the partial sum.
SERIES_RTOL = 1e-17
_CF_EPS = 1e-16
_CF_MAXITER = 500
_TINY = 1e-300


def _si_series(x):
    term = x
    total = x
    k = 0
    while True:
        k += 1
        term *= -x * x / ((2 * k) * (2 * k + 1))
        contrib = term / (2 * k + 1)
        total += contrib
        if abs(contrib) <= SERIES_RTOL * abs(total):
            return total


def auxiliary_fg(x):
    """Return the auxiliary functions ``(f(x), g(x))`` for ``x > 0``.

    Evaluated with the modified Lentz algorithm on the continued fraction
    of ``exp(z) E1(z)`` at ``z = ix``. Converges quickly for ``x >= 2``.
    """
    z = complex(0.0, x)
    b = z + 1.0
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _CF_MAXITER):
        a = -float(i * i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta.real - 1.0) + abs(delta.imag) < _CF_EPS:
            break
    else:  # pragma: no cover - the fraction converges for every x >= 2
        raise ArithmeticError(f"continued fraction failed to converge at x={x}")
    return -h.imag, h.real


def si(x):
    """Sine integral of a finite real argument.

    Absolute error stays below 1e-12 on ``|x| <= 100``.

    >>> si(0.0)
    0.0
    """
    x = float(x)
    if not math.isfinite(x):
        from .errors import DomainError

        raise DomainError(f"si() requires a finite argument, got {x!r}")
    if x == 0.0:
        return 0.0
    ax = abs(x)
    if ax <= SERIES_LIMIT:
        value = _si_series(ax)
    else:
        f, g = auxiliary_fg(ax)
        value = 0.5 * math.pi - f * math.cos(ax) - g * math.sin(ax)
    return value if x > 0 else -value
