import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fraclane.fracseries import (
    FracSeries,
    IncompatibleSeriesError,
    evaluate,
    frac_deriv,
    frac_exp,
    frac_power,
    frac_product,
    linear_combine,
)
from oracles import cauchy, classical_exp, weighted_power, weighted_product

ALPHAS = [0.3, 0.5, 0.8, 1.0]


def S(coeffs, alpha=1.0):
    return FracSeries(alpha, coeffs)


def series_strategy(min_len=1, max_len=21, lead=None):
    coeff = st.floats(-1, 1, allow_nan=False)

    @st.composite
    def build(draw):
        n = draw(st.integers(min_len, max_len))
        c = draw(st.lists(coeff, min_size=n, max_size=n))
        if lead is not None:
            a0 = draw(st.floats(lead, 1.0))
            c[0] = a0 if draw(st.booleans()) else -a0
        return c

    return build()


def close(a, b, rel):
    scale = max(max((abs(v) for v in b), default=0.0), 1e-300)
    return len(a) == len(b) and all(abs(x - y) <= rel * scale for x, y in zip(a, b))


# -- construction -----------------------------------------------------------


def test_rejects_bad_alpha_and_nonfinite():
    with pytest.raises(ValueError):
        FracSeries(1.5, [1.0])
    with pytest.raises(ValueError):
        FracSeries(0.0, [1.0])
    with pytest.raises(ValueError):
        FracSeries(0.5, [1.0, float("nan")])


def test_mixed_alpha_rejected():
    with pytest.raises(IncompatibleSeriesError):
        frac_product(S([1, 0], 0.5), S([1, 0], 0.6))
    with pytest.raises(IncompatibleSeriesError):
        linear_combine([(1, 0, S([1], 0.5)), (1, 0, S([1], 1.0))])


# -- linear_combine ---------------------------------------------------------


def test_linear_combine_identity():
    assert linear_combine([(1, 0, S([1, 2, 3]))]).coeffs == (1, 2, 3)


def test_linear_combine_shift():
    # M = M_F + s: the shifted copy keeps every known coefficient
    out = linear_combine([(2, 1, S([1, 0, 0]))])
    assert out.coeffs == (0, 2, 0, 0)


def test_linear_combine_cancellation():
    out = linear_combine([(1, 0, S([1, 0, 0])), (-1, 0, S([1, 0, 0]))])
    assert out.coeffs == (0, 0, 0)


def test_linear_combine_truncates_to_shortest():
    out = linear_combine([(1, 0, S([1, 1, 1, 1])), (1, 2, S([1]))])
    assert out.coeffs == (1, 1, 2)


# -- frac_product -----------------------------------------------------------


def test_product_identity_element():
    assert frac_product(S([1, 0, 0]), S([0, 1, 2])).coeffs == (0, 1, 2)


def test_product_half_order_weight():
    out = frac_product(S([0, 1, 0], 0.5), S([0, 1, 0], 0.5))
    assert out.coeffs[:2] == (0, 0)
    assert out[2] == pytest.approx(math.pi / 2, rel=1e-14)


def test_product_classical_truncated():
    assert frac_product(S([1, 1]), S([1, 1])).coeffs == (1, 2)


@pytest.mark.parametrize("alpha", [0.1, 0.37, 0.5, 0.9, 1.0])
def test_product_constant_plus_square(alpha):
    a, b = 0.3, -1.7
    out = frac_product(S([1, 0, a], alpha), S([1, 0, b], alpha))
    assert out[2] == pytest.approx(a + b, rel=1e-14)


@pytest.mark.parametrize("alpha", ALPHAS + [0.25])
def test_product_against_direct_formula(alpha):
    rng = np.random.default_rng(7)
    f = list(rng.uniform(-1, 1, 15))
    g = list(rng.uniform(-1, 1, 12))
    got = frac_product(S(f, alpha), S(g, alpha)).coeffs
    assert close(got, weighted_product(f, g, alpha), 1e-13)


@given(series_strategy(), series_strategy(), st.sampled_from(ALPHAS))
def test_product_commutes_bitwise(f, g, alpha):
    assert frac_product(S(f, alpha), S(g, alpha)).coeffs == frac_product(S(g, alpha), S(f, alpha)).coeffs


@settings(max_examples=60)
@given(series_strategy(), series_strategy(), series_strategy(), st.sampled_from(ALPHAS))
def test_product_associative(f, g, h, alpha):
    F, Gs, H = S(f, alpha), S(g, alpha), S(h, alpha)
    left = frac_product(frac_product(F, Gs), H).coeffs
    right = frac_product(F, frac_product(Gs, H)).coeffs
    assert close(left, right, 1e-10)


@given(series_strategy(), series_strategy())
def test_product_classical_limit(f, g):
    got = frac_product(S(f), S(g)).coeffs
    assert close(got, cauchy(f, g), 1e-13)


# -- frac_power -------------------------------------------------------------


def test_power_square_classical():
    assert frac_power(S([1, 0, 1]), 2, order=4).coeffs == (1, 0, 2, 0, 1)


def test_power_keeps_input_order_by_default():
    assert frac_power(S([1, 0, 1]), 2).coeffs == (1, 0, 2)


@given(series_strategy(), st.sampled_from(ALPHAS))
def test_power_one_is_identity(f, alpha):
    assert frac_power(S(f, alpha), 1).coeffs == S(f, alpha).coeffs


def test_power_zero():
    assert frac_power(S([0, 3, 4], 0.4), 0).coeffs == (1, 0, 0)


def test_power_half_order_square():
    out = frac_power(S([1, 0, 1], 0.5), 2, order=4)
    brute = frac_product(S([1, 0, 1, 0, 0], 0.5), S([1, 0, 1, 0, 0], 0.5))
    assert out[4] == pytest.approx(3.0, rel=1e-13)
    assert close(out.coeffs, brute.coeffs, 1e-13)


def test_power_zero_constant_term_uses_products():
    assert frac_power(S([0, 0, 1, 0, 0, 0, 0]), 3).coeffs == (0, 0, 0, 0, 0, 0, 1)


def test_power_rejects_negative():
    with pytest.raises(ValueError):
        frac_power(S([1, 1]), -1)


@settings(max_examples=80)
@given(series_strategy(1, 17, lead=0.5), st.sampled_from(ALPHAS), st.sampled_from([2, 3, 4]))
def test_miller_matches_repeated_product(f, alpha, n):
    F = S(f, alpha)
    brute = F
    for _ in range(n - 1):
        brute = frac_product(brute, F)
    assert close(frac_power(F, n).coeffs, brute.coeffs, 1e-10)


@settings(max_examples=40, deadline=None)
@given(series_strategy(12, 17, lead=0.5), st.sampled_from([2, 3, 4]))
def test_miller_small_alpha_to_working_precision(f, n):
    # the recurrence divides by A_0 at each order; in plain doubles this lost
    # several digits at alpha = 0.3
    assert close(frac_power(S(f, 0.3), n).coeffs, weighted_power(f, n, 0.3), 1e-13)


def test_miller_hard_case():
    rng = np.random.default_rng(20240601)
    for _ in range(49):
        c = rng.uniform(-1, 1, 17)
        c[0] = rng.choice([-1, 1]) * rng.uniform(0.5, 1)
        if _ % 4 == 3:
            rng.uniform(-1, 1, 17)
    assert close(frac_power(S(c, 0.3), 2).coeffs, weighted_power(list(c), 2, 0.3), 1e-14)


def test_miller_long_series_small_alpha():
    f = [1.0, 0.5] + [0.0] * 298
    out = frac_power(S(f, 0.25), 3)
    assert all(math.isfinite(v) for v in out.coeffs)
    assert close(out.coeffs[:20], weighted_power(f[:20], 3, 0.25), 1e-14)


@given(series_strategy(1, 17, lead=0.5), st.sampled_from([2, 3, 4]))
def test_miller_classical_is_numpy_power(f, n):
    ref = np.zeros(len(f))
    full = np.polynomial.polynomial.polypow(f, n)[: len(f)]
    ref[: len(full)] = full
    assert close(frac_power(S(f), n).coeffs, list(ref), 1e-12)


# -- frac_exp ---------------------------------------------------------------


def test_exp_of_zero():
    assert frac_exp(S([0, 0, 0]), -1).coeffs == (1, 0, 0)


@pytest.mark.parametrize("alpha", [0.2, 0.5, 0.75, 1.0])
def test_exp_single_term(alpha):
    out = frac_exp(S([0, 0, 1], alpha), -1)
    assert out[2] == pytest.approx(-1.0, rel=1e-14)


def test_exp_gaussian_taylor():
    out = frac_exp(S([0, 0, 1, 0, 0]), -1).coeffs
    assert close(out, [1, 0, -1, 0, 0.5], 1e-15)


@given(series_strategy(), st.floats(-2, 2).filter(lambda v: abs(v) > 1e-3))
def test_exp_classical_recurrence(f, lam):
    assert close(frac_exp(S(f), lam).coeffs, classical_exp(f, lam), 1e-12)


@settings(max_examples=60)
@given(series_strategy(2, 21), st.sampled_from(ALPHAS + [0.25]), st.floats(-2, 2).filter(lambda v: abs(v) > 1e-3))
def test_exp_satisfies_its_ode(f, alpha, lam):
    F = S(f, alpha)
    E = frac_exp(F, lam)
    lhs = frac_deriv(E).coeffs
    rhs = frac_product(E, frac_deriv(F)).coeffs
    assert close(lhs, [lam * v for v in rhs], 1e-10)


@settings(max_examples=60)
@given(series_strategy(), st.sampled_from(ALPHAS), st.floats(-1.5, 1.5).filter(lambda v: abs(v) > 1e-3))
def test_exp_doubling(f, alpha, lam):
    F = S(f, alpha)
    half = frac_exp(F, lam)
    assert close(frac_exp(F, 2 * lam).coeffs, frac_product(half, half).coeffs, 1e-9)


# -- frac_deriv -------------------------------------------------------------


def test_deriv_of_constant_is_empty():
    out = frac_deriv(S([3.0]))
    assert out.coeffs == () and out.order == -1


def test_deriv_classical():
    assert frac_deriv(S([0, 0, 1])).coeffs == (0, 2)


def test_deriv_half_order_power_rule():
    # Gamma(2)/Gamma(1.5) x^(1-1/2) ... coefficient of X^0 is Gamma(1.5)/Gamma(1)
    out = frac_deriv(S([0, 1], 0.5))
    assert out[0] == pytest.approx(0.886226925452758013649, rel=1e-14)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75, 1.0])
def test_second_derivative_telescopes(alpha):
    for m in range(2, 51):
        e = [0.0] * m + [1.0]
        dd = frac_deriv(frac_deriv(S(e, alpha)))
        expected = math.exp(math.lgamma(m * alpha + 1) - math.lgamma((m - 2) * alpha + 1))
        assert dd[m - 2] == pytest.approx(expected, rel=1e-12)
        assert all(v == 0.0 for i, v in enumerate(dd.coeffs) if i != m - 2)


# -- evaluate ---------------------------------------------------------------


def test_evaluate_values():
    assert evaluate(S([1, 0, -1 / 6]), 1.0) == pytest.approx(0.8333333333333334, rel=1e-15)
    assert evaluate(S([1, 0, -1 / 6], 0.5), 4.0) == pytest.approx(1 / 3, rel=1e-14)


@given(series_strategy(), st.sampled_from(ALPHAS))
def test_evaluate_at_origin(f, alpha):
    assert evaluate(S(f, alpha), 0.0) == f[0]


def test_evaluate_rejects_negative_x():
    with pytest.raises(ValueError):
        evaluate(S([1, 2]), -0.1)
