import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from retroherm.dirichlet import (
    HalfPlaneTrace,
    dirichlet_invert_continuation,
    dirichlet_invert_series,
    dirichlet_invert_spectral,
    harmonicity_residual,
    mirror_average,
    trace_derivatives,
)
from retroherm.errors import AmplificationOverflow, DomainError, OutOfRangeError
from retroherm.fields import SampledField, rel_l2
from retroherm.forward import apply_multiplier, halfplane_forward
from retroherm.retro import add_noise


def periodic_grid(fn, n=1024):
    # [-8 pi, 8 pi) holds whole periods of every integer frequency
    return SampledField(-8 * math.pi, 16 * math.pi / n, fn(-8 * math.pi + np.arange(n) * 16 * math.pi / n))


def test_cos_round_trip():
    f = periodic_grid(np.cos)
    trace = HalfPlaneTrace(1.0, halfplane_forward(f, 1.0))
    back = dirichlet_invert_spectral(trace, 8.0)
    assert np.max(np.abs(back.values - f.values)) <= 1e-6
    assert back.meta["periodic"] is True


def test_zero_trace():
    z = periodic_grid(np.zeros_like)
    assert np.all(dirichlet_invert_spectral(HalfPlaneTrace(1.0, z), 8.0).values == 0.0)


@given(
    st.lists(st.tuples(st.integers(0, 4), st.floats(-1, 1), st.floats(-1, 1)), min_size=1, max_size=4),
    st.floats(0.1, 2.0),
)
@settings(max_examples=20)
def test_band_limited_round_trip(modes, l):
    # frequencies up to 4 lie inside cutoff / 2 = 4
    def fn(y):
        return sum(a * np.cos(k * y) + b * np.sin(k * y) for k, a, b in modes)

    f = periodic_grid(fn)
    back = dirichlet_invert_spectral(HalfPlaneTrace(l, halfplane_forward(f, l)), 8.0)
    assert np.max(np.abs(back.values - f.values)) <= 1e-6


def test_noisy_trace_is_ill_posed():
    f = periodic_grid(np.cos)
    noisy = add_noise(halfplane_forward(f, 1.0), 1e-3, 7)
    err = {L: rel_l2(dirichlet_invert_spectral(HalfPlaneTrace(1.0, noisy), L).values, f.values) for L in (3, 10)}
    assert err[10] > err[3]


def test_overflow_guard():
    f = SampledField.on_grid(-8, 8, 256, lambda y: np.exp(-y * y))
    with pytest.raises(AmplificationOverflow):
        dirichlet_invert_spectral(HalfPlaneTrace(2.0, f), 40.0)


def test_series_examples():
    y = np.linspace(-2, 2, 9)
    np.testing.assert_allclose(dirichlet_invert_series([3.0], 1.0)(y), 3.0)
    # u(l, y) = -y^2 gives l^2 - y^2
    np.testing.assert_allclose(dirichlet_invert_series([0, 0, -2.0], 1.0)(y), 1 - y * y, atol=1e-15)
    np.testing.assert_allclose(dirichlet_invert_series([0, 1.0], 1.0)(y), y, atol=1e-15)
    with pytest.raises(OutOfRangeError):
        dirichlet_invert_series(np.zeros(60), 1.0)


def test_continuation_examples():
    y = np.linspace(-2, 2, 9)
    l = 1.0
    ex2 = dirichlet_invert_continuation(lambda x, yy: (x - l) ** 2 - yy**2, l)
    np.testing.assert_allclose(ex2(y), 1 - y * y, atol=1e-15)
    const = dirichlet_invert_continuation(lambda x, yy: 4.0 + 0 * yy, l)
    np.testing.assert_allclose(const(y), 4.0)
    expcos = dirichlet_invert_continuation(lambda x, yy: np.exp(-x) * np.cos(yy), l)
    np.testing.assert_allclose(expcos(y), math.exp(-l) * math.cosh(l) * np.cos(y), atol=1e-15)


@given(st.floats(0.2, 2.0))
def test_example2_both_routes(l):
    y = np.linspace(-3, 3, 13)
    series = dirichlet_invert_series([0, 0, -2.0], l)(y)
    cont = dirichlet_invert_continuation(lambda x, yy: (x - l) ** 2 - yy**2, l)(y)
    np.testing.assert_allclose(series, l * l - y * y, atol=1e-12)
    np.testing.assert_allclose(cont, l * l - y * y, atol=1e-12)


def test_continuation_equals_mirror_average():
    # u = exp(-x) cos y: continuation gives (u(0, y) + u(2l, y)) / 2
    l = 0.7
    f = periodic_grid(np.cos)
    cont = dirichlet_invert_continuation(lambda x, yy: np.exp(-x) * np.cos(yy), l)(f.x)
    np.testing.assert_allclose(cont, mirror_average(f, l).values, atol=1e-12)


def test_series_is_cosh_multiplier_of_trace():
    # for a polynomial-times-Gaussian trace the series route equals cosh(l lam) applied to the trace,
    # i.e. the mirror average (f + P_2l f) / 2 rather than f itself
    l = 0.5
    trace = HalfPlaneTrace(l, SampledField.on_grid(-16, 16, 2048, lambda y: (1 + y) * np.exp(-y * y / 4)))
    series = dirichlet_invert_series(trace_derivatives(trace, 24), l)(trace.trace.x)
    ref, _ = apply_multiplier(trace.trace, lambda lam: np.where(lam <= 12.0, np.cosh(l * lam), 0.0))
    w = trace.trace.window(1.0)
    assert rel_l2(series[w], ref[w]) <= 1e-4


def test_series_matches_mirror_average_of_true_data():
    l = 0.5
    f = SampledField.on_grid(-16, 16, 2048, lambda y: (1 + y) * np.exp(-y * y / 4))
    trace = HalfPlaneTrace(l, halfplane_forward(f, l))
    series = dirichlet_invert_series(trace_derivatives(trace, 24), l)(f.x)
    w = f.window(1.0)
    assert rel_l2(series[w], mirror_average(f, l).values[w]) <= 1e-4


def test_trace_derivatives_of_polynomial():
    trace = HalfPlaneTrace(1.0, SampledField.on_grid(-4, 4, 256, lambda y: 1 - 3 * y + y**3))
    np.testing.assert_allclose(trace_derivatives(trace, 5), [1, -3, 0, 6, 0, 0], atol=1e-9)


def test_harmonicity_residual():
    f = SampledField.on_grid(-16, 16, 4096, lambda y: np.exp(-y * y))
    assert harmonicity_residual(f, 0.5) <= 1e-4
    with pytest.raises(DomainError):
        harmonicity_residual(f, 0.5 * f.dx)


def test_trace_validation():
    f = periodic_grid(np.cos)
    for bad in (0.0, -1.0, math.inf):
        with pytest.raises(DomainError):
            HalfPlaneTrace(bad, f)
