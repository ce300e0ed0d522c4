"""Coefficient march and residual check.

Multiplying the equation by X**2 and matching the coefficient of X**m gives,
for every m >= 2,

    L(m) A_m + sum_t c_t Q^(t)_(m-2-s_t) = r_(m-2)

where ``L(m) = Gamma(m a+1) [1/Gamma((m-2) a+1) + k/Gamma((m-1) a+1)]`` and
``Q^(t)`` is the series of the t-th nonlinearity.  ``Q^(t)_j`` only needs
``A_0..A_j`` with ``j <= m-2``, so each step is explicit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .eqmodel import EquationSpec, Exp, Power, SourceKind, SpecError, validate
from .fracseries import (
    FracSeries,
    MillerPower,
    exp_coeff,
    frac_deriv,
    frac_exp,
    frac_power,
    linear_combine,
    product_coeff,
)
from .gammafn import gamma, gamma_ratio

OVERFLOW_LIMIT = 1e300


class SingularRecurrenceError(ArithmeticError):
    def __init__(self, order: int):
        super().__init__(f"recurrence factor L({order}) vanishes")
        self.order = order


class SeriesOverflowError(ArithmeticError):
    def __init__(self, order: int, value: float):
        super().__init__(f"coefficient A_{order} = {value!r} overflowed")
        self.order = order


@dataclass(frozen=True)
class SeriesSolution:
    spec: EquationSpec
    series: FracSeries
    compositions: tuple[FracSeries, ...] = ()

    @property
    def coeffs(self) -> tuple[float, ...]:
        return self.series.coeffs


@dataclass(frozen=True)
class ResidualReport:
    orders: tuple[int, ...]
    residual_coeffs: tuple[float, ...]
    max_abs: float
    scale: float

    @property
    def relative(self) -> float:
        return self.max_abs / self.scale if self.scale > 0 else self.max_abs


def lhs_factor(m: int, alpha: float, k: float) -> float:
    """Factor multiplying A_m once D^a D^a y + (k/x^a) D^a y is matched at X^m."""
    if m < 2:
        raise ValueError(f"lhs_factor needs m >= 2, got {m}")
    top = m * alpha + 1.0
    return gamma_ratio(top, top - 2 * alpha) + k * gamma_ratio(top, top - alpha)


class _Composer:
    """Grows the series of F(y) one coefficient at a time.

    Shares the coefficient list ``a`` with the march, so it always sees the
    latest A_m.  Uses the same kernels as ``frac_power``/``frac_exp`` and
    therefore reproduces them bitwise.
    """

    def __init__(self, kind: SourceKind, alpha: float, a: list[float]):
        self.kind = kind
        self.alpha = alpha
        self.a = a
        self.out: list[float] = []
        self.chain: list[list[float]] = []
        if isinstance(kind, Power) and kind.n >= 2 and a[0] == 0.0:
            # y^2, y^3, ..., y^n built by repeated products
            self.chain = [[] for _ in range(kind.n - 1)]
        elif isinstance(kind, Power) and kind.n >= 2:
            self.miller = MillerPower(alpha, a, kind.n)

    def coeff(self, j: int) -> float:
        while len(self.out) <= j:
            self._extend(len(self.out))
        return self.out[j]

    def _extend(self, j: int) -> None:
        a, alpha, kind = self.a, self.alpha, self.kind
        if isinstance(kind, Exp):
            v = math.exp(kind.lam * a[0]) if j == 0 else exp_coeff(alpha, a, self.out, j, kind.lam)
        elif kind.n == 0:
            v = 1.0 if j == 0 else 0.0
        elif kind.n == 1:
            v = a[j]
        elif self.chain:
            prev = a
            for p in self.chain:
                p.append(product_coeff(alpha, prev, a, j))
                prev = p
            v = prev[j]
        else:
            v = self.miller.coeff(j)
        self.out.append(v)


def solve(spec: EquationSpec, M: int = 30) -> SeriesSolution:
    """March the recurrence up to A_M."""
    problems = validate(spec)
    if problems:
        raise SpecError("; ".join(problems))
    if M < 2:
        raise ValueError(f"need at least M = 2 terms, got {M}")
    alpha, k = spec.alpha, spec.k
    a = [float(spec.y0), spec.dy0 / gamma(alpha + 1.0)]
    composers = [_Composer(t.kind, alpha, a) for t in spec.terms]
    for m in range(2, M + 1):
        lm = lhs_factor(m, alpha, k)
        if lm == 0.0 or not math.isfinite(lm):
            raise SingularRecurrenceError(m)
        j = m - 2
        forcing = spec.rhs[j] if j < len(spec.rhs) else 0.0
        source = math.fsum(
            t.c * comp.coeff(j - t.s) for t, comp in zip(spec.terms, composers) if j - t.s >= 0
        )
        am = (forcing - source) / lm
        if not math.isfinite(am) or abs(am) > OVERFLOW_LIMIT:
            raise SeriesOverflowError(m, am)
        a.append(am)
    comps = tuple(
        FracSeries(alpha, comp.out[: max(M - 1 - t.s, 0)]) for t, comp in zip(spec.terms, composers)
    )
    return SeriesSolution(spec, FracSeries(alpha, a), comps)


def residual(sol: SeriesSolution) -> ResidualReport:
    """Substitute the truncated series back into X**2 * (equation) and collect
    every coefficient that the retained A_0..A_M fully determine."""
    spec, y = sol.spec, sol.series
    M = y.order
    d1 = frac_deriv(y)
    d2 = frac_deriv(d1)
    parts = [(1.0, 2, d2), (float(spec.k), 1, d1)]
    for t in spec.terms:
        if isinstance(t.kind, Power):
            f = frac_power(y, t.kind.n)
        else:
            f = frac_exp(y, t.kind.lam)
        parts.append((t.c, t.s + 2, f))
    if M >= 2:
        parts.append((-1.0, 2, FracSeries(y.alpha, spec.rhs).padded(M - 2)))
    res = linear_combine(parts)
    scale = 0.0
    for c, s, f in parts:
        for m in range(s, min(res.order, f.order + s) + 1):
            scale = max(scale, abs(c * f[m - s]))
    coeffs = res.coeffs
    return ResidualReport(
        orders=tuple(range(len(coeffs))),
        residual_coeffs=coeffs,
        max_abs=max((abs(c) for c in coeffs), default=0.0),
        scale=scale,
    )
