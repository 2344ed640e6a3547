import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from retroherm.errors import IncompatibleSystemError, SingularSystemError
from retroherm.jets import Jet, jet_div, jet_exp, jet_mul, laurent_solve_2x2


def jet_strategy(order, bound=1.0):
    real = st.floats(-bound, bound, allow_nan=False)
    return st.lists(st.tuples(real, real), min_size=order + 1, max_size=order + 1).map(
        lambda pairs: Jet([complex(a, b) for a, b in pairs])
    )


def const(c, J):
    return Jet.constant(c, J)


def test_difference_of_squares():
    a = Jet([1, 1, 0])
    b = Jet([1, -1, 0])
    np.testing.assert_allclose(jet_mul(a, b).coeffs, [1, 0, -1])


def test_multiplicative_identity():
    b = Jet([0.3, -2.0, 1j, 4.0])
    assert jet_mul(const(1.0, 3), b).allclose(b, atol=0)


def test_valuation_product():
    # (lam + lam^2) * lam with both factors carrying valuation 1
    a = Jet([1, 1, 0, 0], valuation=1)
    b = Jet([1, 0, 0, 0], valuation=1)
    p = jet_mul(a, b)
    assert p.valuation == 2
    np.testing.assert_allclose(p.plain().coeffs, [0, 0, 1, 1])


def test_order_mismatch_rejected():
    with pytest.raises(ValueError):
        jet_mul(Jet([1, 2]), Jet([1, 2, 3]))


def test_exp_series():
    e = jet_exp(Jet.variable(3))
    np.testing.assert_allclose(e.coeffs, [1, 1, 0.5, 1 / 6], atol=1e-15)
    np.testing.assert_allclose(jet_exp(Jet.zero(5)).coeffs, [1, 0, 0, 0, 0, 0])


def test_exp_of_gaussian_symbol():
    e = jet_exp(Jet([0, 0, 0.1, 0, 0]))
    np.testing.assert_allclose(e.coeffs, [1, 0, 0.1, 0, 0.005], atol=1e-15)


def test_exp_needs_plain_jet():
    with pytest.raises(ValueError):
        jet_exp(Jet([1.0, 0.0], valuation=1))


@given(jet_strategy(10), jet_strategy(10), jet_strategy(10))
def test_ring_laws(a, b, c):
    scale = max(1.0, *(np.abs(x.coeffs).max() for x in (a, b, c)))
    assert np.abs(jet_mul(a, b).coeffs - jet_mul(b, a).coeffs).max() <= 1e-14 * scale**2
    lhs = jet_mul(jet_mul(a, b), c).coeffs
    rhs = jet_mul(a, jet_mul(b, c)).coeffs
    assert np.abs(lhs - rhs).max() <= 1e-13 * scale**3


@given(jet_strategy(12), jet_strategy(12))
def test_exp_homomorphism(a, b):
    lhs = jet_exp(a + b).coeffs
    rhs = jet_mul(jet_exp(a), jet_exp(b)).coeffs
    assert np.abs(lhs - rhs).max() <= 1e-12 * max(1.0, np.abs(rhs).max())


@given(st.floats(-2, 2), st.floats(-2, 2))
def test_exp_coefficient_extraction(re, im):
    c = complex(re, im)
    e = jet_exp(Jet.variable(12, scale=c))
    ref = np.array([c**j / math.factorial(j) for j in range(13)])
    assert np.abs(e.coeffs - ref).max() <= 1e-13 * max(1.0, abs(c) ** 2)


@given(jet_strategy(8), jet_strategy(8))
def test_division_inverts_product(a, b):
    b = Jet(np.concatenate([[1.5], b.coeffs[1:]]))
    q = jet_div(jet_mul(a, b), b)
    assert q.allclose(a, atol=1e-10)


def test_evaluation_and_derivative():
    j = Jet([1, 2, 3])
    assert j(0.5) == pytest.approx(1 + 1 + 0.75)
    assert j.derivative_at_zero(2) == pytest.approx(6)
    shifted = Jet([1, 2, 0], valuation=1)
    assert shifted(2.0) == pytest.approx(2.0 * (1 + 4))


def test_laurent_valuation_one():
    J = 6
    lam = Jet.variable(J)
    M = [[const(1, J), const(1, J)], [lam, -1 * lam]]
    rhs = [const(1, J), 2 * lam]
    x0, x1 = laurent_solve_2x2(M, rhs)
    assert x0.order == J - 1
    np.testing.assert_allclose(x0.coeffs, [1.5] + [0] * (J - 1), atol=1e-14)
    np.testing.assert_allclose(x1.coeffs, [-0.5] + [0] * (J - 1), atol=1e-14)


def test_laurent_identity():
    J = 4
    r = [Jet([1, 2, 3, 4, 5]), Jet([0, 1j, 0, 0, 2])]
    M = [[const(1, J), const(0, J)], [const(0, J), const(1, J)]]
    x0, x1 = laurent_solve_2x2(M, r)
    assert x0.allclose(r[0], atol=0) and x1.allclose(r[1], atol=0)


def test_laurent_incompatible():
    J = 3
    one = const(1, J)
    with pytest.raises(IncompatibleSystemError):
        laurent_solve_2x2([[one, one], [one, one]], [one, const(0, J)])


def test_laurent_singular():
    J = 3
    one = const(1, J)
    with pytest.raises(SingularSystemError):
        laurent_solve_2x2([[one, one], [one, one]], [one, one], interface=2)


@given(jet_strategy(8), jet_strategy(8), jet_strategy(8), jet_strategy(8), jet_strategy(8), jet_strategy(8))
def test_laurent_residual(m00, m01, m10, m11, r0, r1):
    J = 8
    # keep det(0) away from zero so the plain Cramer path is exercised
    m00 = Jet(np.concatenate([[2.5], m00.coeffs[1:]]))
    m11 = Jet(np.concatenate([[2.5], m11.coeffs[1:]]))
    x0, x1 = laurent_solve_2x2([[m00, m01], [m10, m11]], [r0, r1])
    res0 = (m00 * x0 + m01 * x1 - r0).coeffs
    res1 = (m10 * x0 + m11 * x1 - r1).coeffs
    assert x0.order == J
    assert max(np.abs(res0).max(), np.abs(res1).max()) <= 1e-12
