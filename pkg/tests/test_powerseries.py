import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rectlat.powerseries import (
    TRUNCATION_ORDER,
    PowerSeries,
    exp_coeffs_batch,
    series_add,
    series_exp,
    series_mul,
)


def ps(*coeffs, order=TRUNCATION_ORDER):
    c = np.zeros(order + 1)
    c[: len(coeffs)] = coeffs
    return PowerSeries(c)


def test_add_coefficientwise():
    out = series_add(ps(1.0, 2.0), ps(0.0, 1.0))
    assert np.array_equal(out.coeffs[:3], [1.0, 3.0, 0.0])
    assert np.all(out.coeffs[3:] == 0.0)


def test_add_identity_and_inverse():
    a = ps(0.3, -1.2, 0.5, 0.0, 2.0)
    assert np.array_equal(series_add(a, ps()).coeffs, a.coeffs)
    assert np.all(series_add(a, -a).coeffs == 0.0)


def test_mul_cauchy_product():
    out = series_mul(ps(1.0, 1.0), ps(1.0, 1.0))
    assert np.array_equal(out.coeffs[:4], [1.0, 2.0, 1.0, 0.0])


def test_mul_identity():
    a = ps(2.0, -0.5, 0.125, 3.0)
    assert np.array_equal(series_mul(a, ps(1.0)).coeffs, a.coeffs)


def test_mul_monomial_power():
    x = PowerSeries.identity()
    x4 = series_mul(series_mul(x, x), series_mul(x, x))
    expected = np.zeros(TRUNCATION_ORDER + 1)
    expected[4] = 1.0
    assert np.array_equal(x4.coeffs, expected)


def test_mul_truncates_at_order():
    x = PowerSeries.identity(order=2)
    out = series_mul(series_mul(x, x), x)  # x^3 truncated at order 2
    assert np.all(out.coeffs == 0.0)


def test_order_mismatch_rejected():
    with pytest.raises(ValueError, match="order mismatch"):
        series_add(ps(1.0), ps(1.0, order=4))
    with pytest.raises(ValueError, match="order mismatch"):
        series_mul(ps(1.0), ps(1.0, order=4))


def test_exp_of_zero_is_one():
    out = series_exp(PowerSeries.zero())
    assert out.coeffs[0] == 1.0
    assert np.all(out.coeffs[1:] == 0.0)


def test_exp_of_identity_gives_factorials():
    out = series_exp(PowerSeries.identity())
    expected = [1.0 / math.factorial(k) for k in range(TRUNCATION_ORDER + 1)]
    np.testing.assert_allclose(out.coeffs, expected, rtol=1e-15)


@pytest.mark.parametrize("t", [0.3, 1.0, 2.7])
def test_exp_of_quadratic_matches_closed_form(t):
    # exp(-t x^2) has Taylor coefficients (-t)^k/k! at even positions
    out = series_exp(ps(0.0, 0.0, -t))
    expected = np.zeros(TRUNCATION_ORDER + 1)
    for k in range(TRUNCATION_ORDER // 2 + 1):
        expected[2 * k] = (-t) ** k / math.factorial(k)
    np.testing.assert_allclose(out.coeffs, expected, rtol=1e-14, atol=1e-16)


def test_exp_nonzero_constant_term():
    out = series_exp(ps(1.5, 1.0))
    expected = [math.exp(1.5) / math.factorial(k) for k in range(TRUNCATION_ORDER + 1)]
    np.testing.assert_allclose(out.coeffs, expected, rtol=1e-14)


def test_symmetric_exponent_series_has_even_exp():
    # the (j, k) = (1, 1) exponent series -u(e^-x + e^x) is even, so
    # its exponential must be even as well
    u = 0.8
    coeffs = [-u * ((-1) ** m + 1) / math.factorial(m) for m in range(TRUNCATION_ORDER + 1)]
    out = series_exp(PowerSeries(coeffs))
    assert np.all(out.coeffs[1::2] == 0.0)


@st.composite
def bounded_series(draw):
    coeffs = draw(
        st.lists(
            st.floats(min_value=-1.0, max_value=1.0, allow_nan=False),
            min_size=TRUNCATION_ORDER + 1,
            max_size=TRUNCATION_ORDER + 1,
        )
    )
    return PowerSeries(coeffs)


@settings(max_examples=100, deadline=None)
@given(bounded_series(), bounded_series())
def test_exp_is_a_homomorphism(a, b):
    lhs = series_exp(series_add(a, b)).coeffs
    rhs = series_mul(series_exp(a), series_exp(b)).coeffs
    scale = np.max(np.abs(lhs)) or 1.0
    np.testing.assert_allclose(lhs, rhs, rtol=0.0, atol=1e-13 * scale)


def test_batch_exp_matches_scalar_path():
    rng = np.random.default_rng(7)
    batch = rng.uniform(-1, 1, size=(5, TRUNCATION_ORDER + 1))
    out = exp_coeffs_batch(batch)
    for row_in, row_out in zip(batch, out):
        np.testing.assert_array_equal(series_exp(PowerSeries(row_in)).coeffs, row_out)


def test_evaluation_horner():
    f = series_exp(PowerSeries.identity())
    assert f(0.01) == pytest.approx(math.exp(0.01), rel=1e-12)
