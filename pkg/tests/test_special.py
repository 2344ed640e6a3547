import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import erfcx

from retroherm.errors import DomainError, OutOfRangeError
from retroherm.special import (
    FractalOrder,
    dual_hermite,
    fractal_hermite,
    gamma,
    hermite_fn,
    hermite_poly,
    mittag_leffler,
    ml_multiplier,
)


def test_hermite_poly_values():
    assert hermite_poly(0, 3.3) == 1.0
    assert hermite_poly(1, 0.5) == 1.0
    assert hermite_poly(2, 1.0) == 2.0
    assert hermite_poly(3, 1.0) == -4.0


def test_hermite_index_guard():
    with pytest.raises(OutOfRangeError):
        hermite_poly(65, 0.0)


def test_hermite_fn_values():
    assert hermite_fn(0, 0.0) == pytest.approx(math.pi**-0.25, rel=1e-14)
    assert hermite_fn(1, 0.0) == 0.0
    # direct formula with exact big-integer factorials
    j, x = 10, 3.0
    direct = hermite_poly(j, x) * math.exp(-x * x / 2) / math.sqrt(2**j * math.factorial(j) * math.sqrt(math.pi))
    assert hermite_fn(j, x) == pytest.approx(direct, rel=1e-12)


def test_hermite_fn_high_index_finite():
    x = np.linspace(-12, 12, 97)
    assert np.all(np.isfinite(hermite_fn(64, x)))


@given(st.integers(0, 12), st.floats(-4, 4))
def test_probabilists_scaling(j, x):
    # He_j from the generating function exp(x t - t^2 / 2), by its own recurrence
    he = [1.0, x]
    for k in range(1, j):
        he.append(x * he[k] - k * he[k - 1])
    assert 2 ** (-j / 2) * hermite_poly(j, x / math.sqrt(2)) == pytest.approx(he[j], abs=1e-10 * max(1, abs(he[j])))


def test_gamma():
    assert gamma(1.0) == 1.0
    assert gamma(5.0) == pytest.approx(24.0, rel=1e-14)
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert gamma(2.5) == pytest.approx(1.3293403881791355, rel=1e-12)
    with pytest.raises(DomainError):
        gamma(0.0)


def test_fractal_order_bounds():
    assert FractalOrder(0.5).beta == 0.25
    for bad in (0.0, -1.0, 2.5):
        with pytest.raises((DomainError, ValueError)):
            FractalOrder(bad)


def test_mittag_leffler_examples():
    assert mittag_leffler(1.0, 1.0) == pytest.approx(math.e, rel=1e-14)
    assert abs(mittag_leffler(2.0, -(math.pi / 2) ** 2)) < 1e-14
    assert mittag_leffler(0.5, 1.0) == pytest.approx(math.exp(1.0) * math.erfc(-1.0), rel=1e-12)
    assert mittag_leffler(0.5, 1.0) == pytest.approx(5.00898, abs=1e-5)


def test_mittag_leffler_domain():
    with pytest.raises(DomainError):
        mittag_leffler(0.8, 51.0)


def test_mittag_leffler_reductions():
    z = np.linspace(-5, 5, 101)
    # the alternating series for z < 0 is accurate relative to max(1, e^z), not to e^z
    assert np.max(np.abs(mittag_leffler(1.0, z) - np.exp(z)) / np.maximum(1.0, np.exp(z))) <= 1e-12
    t = np.linspace(-6, 6, 121)
    assert np.max(np.abs(mittag_leffler(2.0, -t * t) - np.cos(t))) <= 1e-10


def test_ml_multiplier_half_order_closed_form():
    # E_{1/2}(-t) = exp(t^2) erfc(t)
    t = np.array([0.1, 1.0, 3.0, 8.0, 30.0, 1e3, 1e5])
    np.testing.assert_allclose(ml_multiplier(0.5, -t), erfcx(t), rtol=1e-12, atol=1e-16)


@pytest.mark.parametrize("alpha", [0.3, 0.7, 1.3, 1.8])
def test_ml_multiplier_matches_series_where_accurate(alpha):
    t = np.linspace(0.0, 2.0, 9)
    np.testing.assert_allclose(ml_multiplier(alpha, -t), mittag_leffler(alpha, -t), atol=1e-12)


@pytest.mark.parametrize("alpha", [0.4, 0.8])
def test_ml_multiplier_completely_monotone(alpha):
    t = np.linspace(0.0, 200.0, 401)
    v = ml_multiplier(alpha, -t)
    assert np.all(v > 0) and np.all(np.diff(v) < 0)


def test_ml_multiplier_branch_continuity():
    # the series and integral branches agree across the switch point
    for alpha in (0.1, 0.6, 1.4, 1.95):
        t = np.array([np.nextafter(1.0, 0.0), 1.0])
        v = ml_multiplier(alpha, -t)
        assert abs(v[0] - v[1]) < 1e-13


@pytest.mark.parametrize("alpha", [0.05, 0.5, 1.5, 1.99])
def test_ml_multiplier_extreme_arguments_finite(alpha):
    v = ml_multiplier(alpha, -np.array([1e3, 1e6, 1e9]))
    assert np.all(np.isfinite(v)) and np.all(np.abs(v) <= 1.0)


def test_fractal_hermite_examples():
    assert fractal_hermite(0.7, 0, 2.3) == 1.0
    x = np.linspace(-2, 2, 9)
    np.testing.assert_allclose(fractal_hermite(1.0, 2, x), x * x - 2, atol=1e-14)
    assert fractal_hermite(2.0, 2, 1.0) == pytest.approx(0.0, abs=1e-15)


def test_dual_hermite_examples():
    assert dual_hermite(0, 1.7, 0.4) == 1.0
    z = np.linspace(-2, 2, 9)
    np.testing.assert_allclose(dual_hermite(2, z, 1.0), z * z + 2, atol=1e-14)
    assert dual_hermite(2, 1.0, 2.0) == pytest.approx(2.0)


@given(st.integers(0, 12), st.floats(-5, 5))
def test_fractal_reduces_to_physicists(j, x):
    ref = hermite_poly(j, x / 2)
    assert fractal_hermite(1.0, j, x) == pytest.approx(ref, abs=1e-10 * max(1.0, abs(ref)))


@given(st.integers(0, 14), st.floats(0.1, 2.0), st.floats(-3, 3))
def test_dual_is_imaginary_rotation(j, alpha, z):
    # H*_j(z) = i^j H_j(-i z) for the fractal family
    k = np.arange(j // 2 + 1)
    coeffs = [(-1) ** kk * math.factorial(j) / (math.gamma(kk * alpha + 1) * math.factorial(j - 2 * kk)) for kk in k]
    rotated = sum(c * (-1j * z) ** (j - 2 * kk) for c, kk in zip(coeffs, k)) * 1j**j
    assert dual_hermite(j, z, alpha) == pytest.approx(rotated.real, abs=1e-9 * max(1.0, abs(rotated)))
    assert abs(rotated.imag) <= 1e-9 * max(1.0, abs(rotated))


@given(st.integers(0, 12), st.floats(0.2, 2.0), st.floats(-3, 3))
def test_parity(j, alpha, x):
    assert fractal_hermite(alpha, j, -x) == pytest.approx((-1) ** j * fractal_hermite(alpha, j, x), abs=1e-12 * max(1, abs(x)) ** j)
