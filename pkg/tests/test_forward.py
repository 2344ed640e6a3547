import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from retroherm.errors import DomainError, NotImplementedCoupling
from retroherm.fields import SampledField
from retroherm.forward import (
    forward_series,
    halfplane_forward,
    heat_forward_homogeneous,
    influence_fd_discrepancy,
    influence_kernel,
    piecewise_heat_fd,
    wave_forward_family,
)
from retroherm.media import Coupling, build_medium, homogeneous, ideal_contact


def gauss(x):
    return np.exp(-x * x)


def test_gaussian_heat_closed_form(gaussian_a1):
    u = heat_forward_homogeneous(gaussian_a1, 0.1)
    x = gaussian_a1.x
    np.testing.assert_allclose(u.values, np.exp(-x * x / 1.4) / math.sqrt(1.4), atol=1e-13)
    assert u.values[1024] == pytest.approx(0.8451543, abs=1e-7)
    assert u.time_tag == pytest.approx(0.1)


def test_zero_time_is_identity(gaussian_a1):
    np.testing.assert_array_equal(heat_forward_homogeneous(gaussian_a1, 0.0).values, gaussian_a1.values)


def test_order_two_is_dalembert_average(gaussian_a1):
    tau = 0.7
    u = heat_forward_homogeneous(gaussian_a1, tau, alpha=2.0)
    x = gaussian_a1.x
    assert np.max(np.abs(u.values - 0.5 * (gauss(x + tau) + gauss(x - tau)))) <= 1e-8


def test_fractal_forward_is_bounded_and_decays(gaussian_a1):
    u = heat_forward_homogeneous(gaussian_a1, 0.1, alpha=0.8)
    assert np.all(np.isfinite(u.values))
    assert np.max(np.abs(u.values)) <= 1.0 + 1e-12
    assert u.values[1024] < 1.0


def test_non_decaying_input_flagged():
    f = SampledField.on_grid(-4, 4, 64, lambda x: np.ones_like(x))
    assert "warning" in heat_forward_homogeneous(f, 0.1).meta


@given(st.floats(0.01, 0.3), st.floats(0.01, 0.3))
@settings(max_examples=15)
def test_semigroup(t1, t2):
    f = SampledField.on_grid(-8, 8, 512, gauss)
    two = heat_forward_homogeneous(heat_forward_homogeneous(f, t1), t2)
    one = heat_forward_homogeneous(f, t1 + t2)
    assert np.max(np.abs(two.values - one.values)) <= 1e-10


def test_maximum_principle_both_solvers(gaussian_a1):
    fmax = np.max(np.abs(gaussian_a1.values))
    assert np.max(np.abs(heat_forward_homogeneous(gaussian_a1, 0.3).values)) <= fmax + 1e-12
    assert np.max(np.abs(piecewise_heat_fd(homogeneous(), gaussian_a1, 0.3, 200).values)) <= fmax + 1e-12


def test_fd_matches_multiplier_homogeneous(gaussian_a1):
    fd = piecewise_heat_fd(homogeneous(), gaussian_a1, 0.1, 200)
    sp = heat_forward_homogeneous(gaussian_a1, 0.1)
    assert np.max(np.abs(fd.values - sp.values)) <= 1e-4


def test_fd_second_order():
    errs = []
    for n, steps in ((256, 50), (512, 100), (1024, 200)):
        f = SampledField.on_grid(-8, 8, n, gauss)
        diff = piecewise_heat_fd(homogeneous(), f, 0.1, steps).values - heat_forward_homogeneous(f, 0.1).values
        errs.append(np.max(np.abs(diff)))
    assert errs[0] / errs[1] >= 3.0 and errs[1] / errs[2] >= 3.0


def test_fd_zero_stays_zero(layered_grid, two_layer):
    assert np.all(piecewise_heat_fd(two_layer, layered_grid, 0.1, 50).values == 0.0)


def test_fd_conserves_mass_ideal_contact(two_layer):
    f = SampledField.on_grid(-16, 16, 2048, lambda x: np.exp(-(x - 0.5) ** 2))
    u = piecewise_heat_fd(two_layer, f, 0.5, 200)
    assert abs(u.values.sum() * u.dx - f.values.sum() * f.dx) <= 1e-8


def test_fd_interface_flux_continuity(two_layer):
    f = SampledField.on_grid(-16, 16, 4096, lambda x: np.exp(-(x - 0.3) ** 2))
    u = piecewise_heat_fd(two_layer, f, 0.2, 400).values
    i = 2048  # x = 0
    h = f.dx
    left = 1.0 * (u[i] - u[i - 1]) / h
    right = 4.0 * (u[i + 1] - u[i]) / h
    # one-sided differences carry an O(h) error in the flux
    assert abs(left - right) <= 10 * h


def test_fd_rejects_general_coupling():
    c = Coupling(alpha=((0.0, 0.0), (1.0, 3.0)), beta=((1.0, 2.0), (0.5, 0.0)))
    med = build_medium((0.0,), (1.0, 1.5), (c,))
    f = SampledField.on_grid(-4, 4, 64, gauss)
    with pytest.raises(NotImplementedCoupling):
        piecewise_heat_fd(med, f, 0.1, 10)


def test_fd_requires_breakpoint_on_grid():
    med = ideal_contact((1.0, 2.0), (0.01,))
    f = SampledField.on_grid(-4, 4, 64, gauss)
    with pytest.raises(DomainError):
        piecewise_heat_fd(med, f, 0.1, 10)


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0.05, 1.0))
@settings(max_examples=20)
def test_influence_kernel_homogeneous(x, xi, t):
    ref = math.exp(-((x - xi) ** 2) / (4 * t)) / (2 * math.sqrt(math.pi * t))
    assert influence_kernel(homogeneous(), t, x, xi) == pytest.approx(ref, abs=1e-6)
    assert influence_kernel(homogeneous(), t, xi, x) == pytest.approx(influence_kernel(homogeneous(), t, x, xi), abs=1e-10)


def test_influence_discrepancy_is_reported(two_layer):
    rep = influence_fd_discrepancy(two_layer, 0.2, 0.5, -8, 8, n=512, steps=100)
    assert math.isfinite(rep["max_abs_discrepancy"]) and rep["fd_peak"] > 0


def test_wave_family():
    x = np.linspace(-3, 3, 61)
    np.testing.assert_allclose(wave_forward_family(gauss, 0.5, 0.5, x).values, 2 * gauss(x))
    np.testing.assert_allclose(wave_forward_family(gauss, 0.0, 0.5, x).values, gauss(x - 0.5) + gauss(x + 0.5))
    np.testing.assert_allclose(wave_forward_family(gauss, 0.25, 0.5, x).values, gauss(x - 0.25) + gauss(x + 0.25))


def test_forward_series_examples():
    x = np.linspace(-2, 2, 9)
    np.testing.assert_allclose(forward_series([1.0], 0.3)(x), 1.0)
    np.testing.assert_allclose(forward_series([0, 0, 2.0], 0.3)(x), x * x + 0.6, atol=1e-14)
    np.testing.assert_allclose(forward_series([0, 0, 2.0], 0.3, alpha=2.0)(x), x * x + 0.09, atol=1e-14)


@given(st.lists(st.floats(-2, 2), min_size=1, max_size=7), st.floats(0.05, 0.5))
@settings(max_examples=20)
def test_forward_series_solves_heat_equation(derivs, tau):
    # u_t = u_xx checked by differentiating in tau and x numerically
    x = np.linspace(-1, 1, 5)
    h = 1e-3
    ut = (forward_series(derivs, tau + h)(x) - forward_series(derivs, tau - h)(x)) / (2 * h)
    u = forward_series(derivs, tau)
    uxx = (u(x + h) - 2 * u(x) + u(x - h)) / h**2
    assert np.max(np.abs(ut - uxx)) <= 1e-4 * max(1.0, np.max(np.abs(ut)))


def test_halfplane_examples():
    f = SampledField.on_grid(-8 * math.pi, 8 * math.pi, 1024, np.cos)
    np.testing.assert_allclose(halfplane_forward(f, 1.0).values, math.exp(-1) * f.values, atol=1e-8)
    zero = f.with_values(np.zeros(f.n))
    assert np.all(halfplane_forward(zero, 1.0).values == 0.0)
    np.testing.assert_allclose(halfplane_forward(f, 1e-12).values, f.values, atol=1e-10)
    with pytest.raises(DomainError):
        halfplane_forward(f, -1.0)
