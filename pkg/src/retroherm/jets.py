"""Truncated power series ("jets") in one variable with complex coefficients.

A :class:`Jet` of order ``J`` and valuation ``v`` represents

    lam**v * (c_0 + c_1 lam + ... + c_J lam**J) + O(lam**(J + v + 1))

The valuation is bookkeeping for leading zeros that were factored out, which
is what the interface solver needs when a 2x2 system is singular at
``lam = 0`` with a finite-order zero.  Public results carry ``v = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from .errors import IncompatibleSystemError, SingularSystemError

DEFAULT_ORDER = 24

# relative threshold below which a leading coefficient is treated as zero
ZERO_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Jet:
    coeffs: np.ndarray
    valuation: int = 0

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise ValueError("a jet needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise ValueError("jet coefficients must be finite")
        if self.valuation < 0:
            raise ValueError("valuation must be non-negative")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    # construction helpers -------------------------------------------------

    @classmethod
    def constant(cls, value, order=DEFAULT_ORDER):
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls(c)

    @classmethod
    def variable(cls, order=DEFAULT_ORDER, scale=1.0):
        """The jet ``scale * lam``."""
        c = np.zeros(order + 1, dtype=complex)
        if order >= 1:
            c[1] = scale
        return cls(c)

    @classmethod
    def zero(cls, order=DEFAULT_ORDER):
        return cls(np.zeros(order + 1, dtype=complex))

    # basic properties ----------------------------------------------------

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def plain(self) -> "Jet":
        """Absorb the valuation into the coefficients, keeping the order.

        Coefficients beyond absolute order ``J`` are dropped.
        """
        if self.valuation == 0:
            return self
        c = np.zeros(self.order + 1, dtype=complex)
        v = self.valuation
        if v <= self.order:
            c[v:] = self.coeffs[: self.order + 1 - v]
        return Jet(c)

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise ValueError(f"cannot extend a jet of order {self.order} to {order}")
        return Jet(self.coeffs[: order + 1], self.valuation)

    def leading_index(self, scale=None, tol=ZERO_TOL):
        """Index of the first coefficient above ``tol * scale``, or None."""
        if scale is None:
            scale = float(np.max(np.abs(self.coeffs)))
        if scale == 0.0:
            return None
        big = np.nonzero(np.abs(self.coeffs) > tol * scale)[0]
        return int(big[0]) if big.size else None

    def __call__(self, lam):
        """Evaluate the truncated series (Horner) at ``lam``; accepts arrays."""
        lam = np.asarray(lam)
        out = np.zeros(lam.shape, dtype=complex)
        for c in self.coeffs[::-1]:
            out = out * lam + c
        if self.valuation:
            out = out * lam**self.valuation
        return out if out.ndim else complex(out)

    def derivative_at_zero(self, k: int) -> complex:
        """k-th derivative at zero of the represented series."""
        p = self.plain()
        if k > p.order:
            raise ValueError(f"derivative {k} exceeds jet order {p.order}")
        return p.coeffs[k] * factorial(k)

    # arithmetic ----------------------------------------------------------

    def _check_order(self, other: "Jet"):
        if self.order != other.order:
            raise ValueError(f"jet order mismatch: {self.order} vs {other.order}")

    def __add__(self, other):
        if not isinstance(other, Jet):
            c = self.plain().coeffs.copy()
            c[0] += other
            return Jet(c)
        self._check_order(other)
        v = min(self.valuation, other.valuation)
        return Jet(_shift(self, v) + _shift(other, v), v)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.coeffs, self.valuation)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            return jet_mul(self, other)
        return Jet(self.coeffs * other, self.valuation)

    __rmul__ = __mul__

    def allclose(self, other: "Jet", atol=1e-12) -> bool:
        self._check_order(other)
        return bool(np.max(np.abs(self.plain().coeffs - other.plain().coeffs)) <= atol)


def _shift(a: Jet, v: int) -> np.ndarray:
    # cofactor of a re-expressed at valuation v <= a.valuation, truncated at a.order
    d = a.valuation - v
    c = np.zeros(a.order + 1, dtype=complex)
    if d <= a.order:
        c[d:] = a.coeffs[: a.order + 1 - d]
    return c


def jet_mul(a: Jet, b: Jet) -> Jet:
    """Cauchy product truncated at the common order; valuations add."""
    if a.order != b.order:
        raise ValueError(f"jet order mismatch: {a.order} vs {b.order}")
    c = np.convolve(a.coeffs, b.coeffs)[: a.order + 1]
    return Jet(c, a.valuation + b.valuation)


def jet_exp(a: Jet) -> Jet:
    """Series exponential, ``exp(c_0) * exp(a - c_0)``."""
    if a.valuation != 0:
        raise ValueError("jet_exp needs a plain jet (valuation 0)")
    c = a.coeffs
    n = c.size
    out = np.zeros(n, dtype=complex)
    out[0] = np.exp(c[0])
    k = np.arange(n)
    kc = k * c
    # k b_k = sum_{j=1..k} j a_j b_{k-j}
    for m in range(1, n):
        out[m] = np.dot(kc[1 : m + 1], out[m - 1 :: -1][:m]) / m
    if not np.all(np.isfinite(out)):
        raise ValueError("jet_exp overflowed")
    return Jet(out)


def jet_div(num: Jet, den: Jet) -> Jet:
    """Series quotient of plain jets; ``den`` must have a nonzero constant term."""
    num, den = num.plain(), den.plain()
    if num.order != den.order:
        raise ValueError(f"jet order mismatch: {num.order} vs {den.order}")
    d0 = den.coeffs[0]
    if d0 == 0:
        raise ZeroDivisionError("denominator jet has zero constant term")
    n = num.order + 1
    q = np.zeros(n, dtype=complex)
    d = den.coeffs
    for m in range(n):
        q[m] = (num.coeffs[m] - np.dot(d[1 : m + 1], q[m - 1 :: -1][:m])) / d0
    return Jet(q)


def laurent_solve_2x2(M, rhs, tol=ZERO_TOL, interface=None):
    """Solve ``M x = rhs`` over truncated power series.

    ``M`` is a 2x2 nested sequence of jets and ``rhs`` a pair of jets, all of
    one order ``J``.  The determinant may vanish at ``lam = 0`` to finite
    order ``v``; the Cramer numerators must then vanish to at least the same
    order.  The quotient is known through order ``J - v`` only, so the
    returned plain jets have order ``J - v``.

    Raises SingularSystemError when det and both numerators vanish through
    order J (no unique solution), IncompatibleSystemError when det vanishes
    through J but a numerator does not, or when a numerator has a lower
    valuation than det.
    """
    (m00, m01), (m10, m11) = [[e.plain() for e in row] for row in M]
    r0, r1 = rhs[0].plain(), rhs[1].plain()
    order = m00.order
    for e in (m01, m10, m11, r0, r1):
        if e.order != order:
            raise ValueError("all entries of a Laurent system must share one order")

    det = m00 * m11 - m01 * m10
    num0 = r0 * m11 - m01 * r1
    num1 = m00 * r1 - r0 * m10

    mscale = max(float(np.max(np.abs(e.coeffs))) for e in (m00, m01, m10, m11))
    rscale = max(float(np.max(np.abs(e.coeffs))) for e in (r0, r1))
    det_scale = mscale * mscale
    num_scale = mscale * rscale

    vd = det.leading_index(det_scale, tol) if det_scale > 0 else None
    v0 = num0.leading_index(num_scale, tol) if num_scale > 0 else None
    v1 = num1.leading_index(num_scale, tol) if num_scale > 0 else None

    if vd is None:
        if v0 is None and v1 is None:
            raise SingularSystemError(
                "determinant and numerators vanish through order %d" % order, interface
            )
        raise IncompatibleSystemError(
            "determinant vanishes through order %d but the right-hand side does not" % order,
            interface,
        )
    for v in (v0, v1):
        if v is not None and v < vd:
            raise IncompatibleSystemError(
                f"numerator valuation {v} below determinant valuation {vd}", interface
            )

    keep = order - vd
    den = Jet(det.coeffs[vd:])
    x0 = jet_div(Jet(num0.coeffs[vd:]), den)
    x1 = jet_div(Jet(num1.coeffs[vd:]), den)
    assert x0.order == keep
    return x0, x1
