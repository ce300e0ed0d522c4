"""Gamma-function kernel.

Every recurrence in the package needs Gamma at arguments of the form
``m*alpha + 1``.  Those overflow a double once ``m*alpha`` passes ~170, so
ratios are taken in log space unless both arguments are small enough for the
direct quotient, which is a few ulps more accurate.
"""

from __future__ import annotations

import math

# Gamma(171.6) is the last finite double.
_DIRECT_LIMIT = 171.0


class GammaDomainError(ValueError):
    """Raised for arguments outside (0, inf)."""


def _check(x: float) -> float:
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise GammaDomainError(f"gamma argument must be finite and positive, got {x!r}")
    return x


def gamma(x: float) -> float:
    """Gamma(x) for 0 < x <= 170; use :func:`log_gamma` beyond that."""
    x = _check(x)
    if x > _DIRECT_LIMIT:
        raise GammaDomainError(f"gamma({x!r}) overflows; use log_gamma")
    return math.gamma(x)


def log_gamma(x: float) -> float:
    return math.lgamma(_check(x))


def log_gamma_ratio(a: float, b: float) -> float:
    """ln(Gamma(a) / Gamma(b))."""
    a = _check(a)
    b = _check(b)
    if a == b:
        return 0.0
    return math.lgamma(a) - math.lgamma(b)


def gamma_ratio(a: float, b: float) -> float:
    """Gamma(a) / Gamma(b) without intermediate overflow (e.g. a = 501)."""
    a = _check(a)
    b = _check(b)
    if a == b:
        return 1.0
    if a < _DIRECT_LIMIT and b < _DIRECT_LIMIT:
        return math.gamma(a) / math.gamma(b)
    return math.exp(math.lgamma(a) - math.lgamma(b))
