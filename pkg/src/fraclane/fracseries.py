"""Truncated fractional power series in ``X = x**alpha``.

A :class:`FracSeries` holds ``A_0..A_M`` for ``y(x) = sum A_m x**(m*alpha)``.
Products, powers and exponentials follow the gamma-weighted Leibniz calculus
of the modified Riemann-Liouville derivative, in which

    D^a X^m = Gamma(m a + 1) / Gamma((m-1) a + 1) * X^(m-1)

and the product of two series is the weighted convolution

    H_k = sum_j w(k, j) F_j G_(k-j),
    w(k, j) = C(k, j) Gamma(j a + 1) Gamma((k-j) a + 1) / Gamma(k a + 1).

Writing ``v(j) = ln(j! / Gamma(j a + 1))`` gives ``w(k, j) = exp(v(k) - v(j) -
v(k-j))``, which is symmetric in ``j <-> k-j`` bitwise and exactly 1 at a = 1.

Binary operations truncate to the shorter operand; nothing is zero-padded
unless the caller asks for it through ``order=``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Context, Decimal
from functools import lru_cache
from typing import Iterable, Sequence

from .gammafn import gamma_ratio, log_gamma_ratio


class IncompatibleSeriesError(ValueError):
    """Operands carry different fractional orders."""


@dataclass(frozen=True)
class FracSeries:
    alpha: float
    coeffs: tuple[float, ...]

    def __post_init__(self) -> None:
        alpha = float(self.alpha)
        if not (0.0 < alpha <= 1.0):
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha!r}")
        coeffs = tuple(float(c) for c in self.coeffs)
        for m, c in enumerate(coeffs):
            if not math.isfinite(c):
                raise ValueError(f"coefficient {m} is not finite: {c!r}")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def order(self) -> int:
        """Truncation order M (-1 for the empty series)."""
        return len(self.coeffs) - 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, m):
        return self.coeffs[m]

    def truncate(self, order: int) -> FracSeries:
        return FracSeries(self.alpha, self.coeffs[: order + 1])

    def padded(self, order: int) -> FracSeries:
        """Treat the series as an exact polynomial and extend/cut it to ``order``."""
        c = self.coeffs[: order + 1]
        return FracSeries(self.alpha, c + (0.0,) * (order + 1 - len(c)))


def _common_alpha(series: Iterable[FracSeries]) -> float:
    alphas = {s.alpha for s in series}
    if len(alphas) != 1:
        raise IncompatibleSeriesError(f"mixed fractional orders: {sorted(alphas)}")
    return alphas.pop()


@lru_cache(maxsize=8192)
def _log_scale(alpha: float, j: int) -> float:
    # ln(j! / Gamma(j*alpha + 1))
    return log_gamma_ratio(j + 1.0, j * alpha + 1.0)


@lru_cache(maxsize=65536)
def weight(alpha: float, k: int, j: int) -> float:
    """Leibniz weight C(k,j) Gamma(j a+1) Gamma((k-j) a+1) / Gamma(k a+1)."""
    return math.exp(_log_scale(alpha, k) - (_log_scale(alpha, j) + _log_scale(alpha, k - j)))


def deriv_factor(alpha: float, m: int) -> float:
    """Coefficient picked up by X^m under one alpha-derivative."""
    return gamma_ratio(m * alpha + 1.0, (m - 1) * alpha + 1.0)


# Single-coefficient kernels.  The solver extends composition series one order
# at a time with these; the whole-series functions below loop over them, so
# both paths produce bitwise-identical coefficients.


def product_coeff(alpha: float, f: Sequence[float], g: Sequence[float], k: int) -> float:
    return math.fsum(weight(alpha, k, j) * (f[j] * g[k - j]) for j in range(k + 1))


_CTX = Context(prec=40)


@lru_cache(maxsize=8192)
def _b_scale(alpha: float, m: int) -> Decimal:
    # Gamma(m*alpha + 1) / m!, exactly 1 at alpha = 1; kept in decimal since
    # it leaves the double range for large m
    return _CTX.exp(Decimal(-_log_scale(alpha, m)))


class MillerPower:
    """Coefficients of y**n grown one order at a time; needs A_0 != 0.

    J.C.P. Miller's recurrence divides by A_0 at every order, so rounding in
    early terms is amplified down the series (about seven digits lost at
    alpha = 0.3 and M = 16 when run on A_m in doubles).  It is run instead on
    b_m = A_m Gamma(m a+1) / m!, where the weighted product is a plain Cauchy
    product and the recurrence has integer coefficients, with 40-digit
    decimal accumulators.  The only rounding left is the conversion in and
    out of b-space.
    """

    def __init__(self, alpha: float, a: Sequence[float], n: int):
        self.alpha = alpha
        self.a = a
        self.n = n
        self._b: list[Decimal] = []
        self._q: list[Decimal] = []
        self.out: list[float] = []

    def coeff(self, m: int) -> float:
        while len(self.out) <= m:
            self._extend(len(self.out))
        return self.out[m]

    def _extend(self, m: int) -> None:
        ctx, b, q, n = _CTX, self._b, self._q, self.n
        scale = _b_scale(self.alpha, m)
        b.append(ctx.multiply(Decimal(self.a[m]), scale))
        if m == 0:
            q.append(ctx.power(b[0], n))
        else:
            s = Decimal(0)
            for i in range(1, m + 1):
                s = ctx.add(s, ctx.multiply(ctx.multiply(b[i], q[m - i]), i * n - m + i))
            q.append(ctx.divide(s, ctx.multiply(b[0], m)))
        self.out.append(float(ctx.divide(q[m], scale)))


def exp_coeff(alpha: float, a: Sequence[float], r: Sequence[float], l: int, lam: float) -> float:
    """R_l of exp(lam*y) from A_0..A_l and R_0..R_(l-1), l >= 1."""
    s = math.fsum(i * weight(alpha, l, i) * a[i] * r[l - i] for i in range(1, l + 1))
    return lam * s / l


def linear_combine(terms: Sequence[tuple[float, int, FracSeries]]) -> FracSeries:
    """sum of c * X**s * F over ``(c, s, F)`` triples."""
    if not terms:
        raise ValueError("linear_combine needs at least one term")
    alpha = _common_alpha(f for _, _, f in terms)
    for _, s, _ in terms:
        if s < 0:
            raise ValueError(f"negative shift {s}")
    top = min(f.order + s for _, s, f in terms)
    out = []
    for m in range(top + 1):
        out.append(math.fsum(c * f[m - s] for c, s, f in terms if m - s >= 0))
    return FracSeries(alpha, out)


def frac_product(f: FracSeries, g: FracSeries) -> FracSeries:
    alpha = _common_alpha((f, g))
    top = min(f.order, g.order)
    fc, gc = f.coeffs, g.coeffs
    return FracSeries(alpha, [product_coeff(alpha, fc, gc, k) for k in range(top + 1)])


def frac_power(f: FracSeries, n: int, order: int | None = None) -> FracSeries:
    """Series of y**n.

    With ``order`` the input is taken as an exact polynomial and the result
    runs to that order; otherwise it keeps ``f.order``.  A nonzero constant
    term uses the Miller recurrence, a zero one falls back to repeated
    products since the recurrence divides by A_0.
    """
    if n < 0 or int(n) != n:
        raise ValueError(f"power must be a non-negative integer, got {n!r}")
    n = int(n)
    if order is not None:
        f = f.padded(order)
    top = f.order
    if n == 0:
        return FracSeries(f.alpha, [1.0] + [0.0] * top if top >= 0 else [])
    if n == 1 or top < 0:
        return f
    a = f.coeffs
    if a[0] != 0.0:
        miller = MillerPower(f.alpha, a, n)
        return FracSeries(f.alpha, [miller.coeff(m) for m in range(top + 1)])
    out = f
    for _ in range(n - 1):
        out = frac_product(out, f)
    return out


def frac_exp(f: FracSeries, lam: float, order: int | None = None) -> FracSeries:
    """Series of exp(lam*y)."""
    if order is not None:
        f = f.padded(order)
    if f.order < 0:
        return f
    a = f.coeffs
    r = [math.exp(lam * a[0])]
    for l in range(1, f.order + 1):
        r.append(exp_coeff(f.alpha, a, r, l, lam))
    return FracSeries(f.alpha, r)


def frac_deriv(f: FracSeries) -> FracSeries:
    """One alpha-derivative; the constant term drops out and M falls by one."""
    a = f.coeffs
    return FracSeries(f.alpha, [a[m] * deriv_factor(f.alpha, m) for m in range(1, len(a))])


def evaluate(f: FracSeries, x: float) -> float:
    """Partial sum at ``x >= 0``."""
    x = float(x)
    if not x >= 0.0:
        raise ValueError(f"series is only defined for x >= 0, got {x!r}")
    if not f.coeffs:
        return 0.0
    if x == 0.0:
        return f.coeffs[0]
    big_x = x**f.alpha
    return math.fsum(c * big_x**m for m, c in enumerate(f.coeffs))
