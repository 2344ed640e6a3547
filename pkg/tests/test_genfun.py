import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from retroherm.errors import DomainError, OutOfRangeError
from retroherm.genfun import (
    EvolutionK,
    basis_matrix,
    biorthogonality_matrix,
    gen_hermite_basis,
    gen_hermite_eval,
    generating_check,
)
from retroherm.media import build_medium, homogeneous, ideal_contact
from retroherm.special import hermite_poly


def test_classical_low_order_examples():
    b = gen_hermite_basis(homogeneous(), EvolutionK.classical(1.0), 4)
    x = np.linspace(-2, 2, 9)
    np.testing.assert_allclose(gen_hermite_eval(b, 0, x), 1.0)
    np.testing.assert_allclose(gen_hermite_eval(b, 1, x), x, atol=1e-15)
    np.testing.assert_allclose(gen_hermite_eval(b, 2, x), x * x - 2.0, atol=1e-14)
    np.testing.assert_allclose(gen_hermite_eval(b, 4, x), x**4 - 12 * x**2 + 12, atol=1e-12)


@given(st.floats(0.05, 2.0), st.floats(-3, 3))
def test_classical_is_scaled_physicists_hermite(tau, x):
    b = gen_hermite_basis(homogeneous(), EvolutionK.classical(tau), 10)
    for j in range(11):
        ref = tau ** (j / 2) * hermite_poly(j, x / (2 * math.sqrt(tau)))
        assert gen_hermite_eval(b, j, x) == pytest.approx(ref, abs=1e-10 * max(1.0, abs(ref)))


@given(st.floats(0.1, 2.0), st.floats(-3, 3))
def test_cos_kernel_is_shift_average(tau, x):
    b = gen_hermite_basis(homogeneous(), EvolutionK.cos_kernel(tau), 10)
    for j in range(11):
        ref = 0.5 * ((x + tau) ** j + (x - tau) ** j)
        assert gen_hermite_eval(b, j, x) == pytest.approx(ref, abs=1e-10 * max(1.0, abs(ref)))


def test_fractal_order_one_is_classical():
    med = ideal_contact((1.0, 2.0), (0.0,))
    a = gen_hermite_basis(med, EvolutionK.classical(0.3), 12)
    b = gen_hermite_basis(med, EvolutionK.fractal(1.0, 0.3), 12)
    np.testing.assert_allclose(a.poly, b.poly, atol=1e-13)


@given(st.integers(0, 12), st.floats(-3, 3))
def test_parity_homogeneous(j, x):
    b = gen_hermite_basis(homogeneous(1.5), EvolutionK.fractal(0.7, 0.4), 12)
    assert gen_hermite_eval(b, j, -x) == pytest.approx((-1) ** j * gen_hermite_eval(b, j, x), abs=1e-12 * max(1, abs(x)) ** j)


@pytest.mark.parametrize(
    "kernel",
    [EvolutionK.classical(0.5), EvolutionK.fractal(0.6, 0.5), EvolutionK.fractal(1.5, 0.3), EvolutionK.cos_kernel(0.7)],
    ids=["classical", "fractal-0.6", "fractal-1.5", "cos"],
)
def test_generating_function_layered(kernel):
    med = build_medium((-0.5, 0.5), (1.0, 2.0, 0.8), ("ideal", "ideal"))
    b = gen_hermite_basis(med, kernel, 30)
    for x in (-1.2, -0.2, 0.3, 1.4):
        for mu in (-0.4, 0.1, 0.5):
            assert generating_check(b, mu, x) <= 1e-12


@given(st.floats(0.2, 1.8), st.floats(-0.5, 0.5), st.floats(-2, 2))
def test_generating_function_property(alpha, mu, x):
    b = gen_hermite_basis(ideal_contact((1.0, 2.0), (0.0,)), EvolutionK.fractal(alpha, 0.5), 40)
    assert generating_check(b, mu, x) <= 1e-12


def test_generating_check_argument_guard():
    b = gen_hermite_basis(homogeneous(), EvolutionK.classical(1.0), 4)
    with pytest.raises(DomainError):
        generating_check(b, 0.9, 0.0)


def test_basis_matrix_shape_and_guards():
    b = gen_hermite_basis(homogeneous(), EvolutionK.classical(1.0), 6)
    assert basis_matrix(b, np.zeros(5)).shape == (5, 7)
    with pytest.raises(OutOfRangeError):
        gen_hermite_eval(b, 7, 0.0)
    with pytest.raises(OutOfRangeError):
        gen_hermite_basis(homogeneous(), EvolutionK.classical(1.0), 49)


def test_kernel_validation():
    with pytest.raises(DomainError):
        EvolutionK("bogus", 1.0)
    with pytest.raises(DomainError):
        EvolutionK.classical(0.0)
    with pytest.raises(DomainError):
        EvolutionK("classical", 1.0, 0.5)


def test_hermite_function_gram_is_identity():
    np.testing.assert_allclose(biorthogonality_matrix(12), np.eye(13), atol=1e-12)


def test_layered_classical_example(two_layer):
    b = gen_hermite_basis(two_layer, EvolutionK.classical(0.1), 4)
    # x_n^2 - 2 tau x_n^0 at x = -1
    assert gen_hermite_eval(b, 2, -1.0) == pytest.approx(0.8, abs=1e-14)
    assert gen_hermite_eval(b, 0, 3.0) == pytest.approx(1.0)
