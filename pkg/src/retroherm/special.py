"""Hermite polynomials and functions, Gamma, Mittag-Leffler E_{alpha,1} and
the fractional ("fractal") Hermite polynomials.

All functions accept scalars or numpy arrays for the continuous argument and
return the same shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import ConvergenceError, DomainError, OutOfRangeError

MAX_INDEX = 64
ML_MAX_ARG = 50.0
ML_MAX_TERMS = 4000
# the alternating series loses about exp(t^(1/alpha)) * eps; at and beyond this the integral form is used
ML_SERIES_SWITCH = 1.0


@dataclass(frozen=True)
class FractalOrder:
    """Time-fractional order, 0 < alpha <= 2 (1: diffusion, 2: wave)."""

    alpha: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.alpha <= 2.0):
            raise DomainError(f"fractal order must lie in (0, 2], got {self.alpha}")

    @property
    def beta(self) -> float:
        return self.alpha / 2.0


def _alpha(alpha) -> float:
    return FractalOrder(float(alpha.alpha if isinstance(alpha, FractalOrder) else alpha)).alpha


def _check_index(j):
    if j < 0 or int(j) != j:
        raise OutOfRangeError(f"index must be a non-negative integer, got {j}")
    if j > MAX_INDEX:
        raise OutOfRangeError(f"index {j} exceeds the overflow guard {MAX_INDEX}")


def _scalar_or_array(out, x):
    return float(out) if np.ndim(x) == 0 else out


def hermite_poly(j: int, x):
    """Physicists' Hermite polynomial H_j(x) by the three-term recurrence."""
    _check_index(j)
    x = np.asarray(x, dtype=float)
    h_prev, h = np.zeros_like(x), np.ones_like(x)
    for k in range(j):
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
    return _scalar_or_array(h, x)


def _hermite_fn_poly(j: int, x):
    # normalized recurrence without the Gaussian factor:
    # p_{k+1} = sqrt(2/(k+1)) x p_k - sqrt(k/(k+1)) p_{k-1}
    x = np.asarray(x, dtype=float)
    p_prev = np.zeros_like(x)
    p = np.full_like(x, math.pi**-0.25)
    for k in range(j):
        p_prev, p = p, math.sqrt(2.0 / (k + 1)) * x * p - math.sqrt(k / (k + 1)) * p_prev
    return p


def hermite_fn(j: int, x):
    """Orthonormal Hermite function H_j(x) exp(-x^2/2) / sqrt(2^j j! sqrt(pi))."""
    _check_index(j)
    x = np.asarray(x, dtype=float)
    return _scalar_or_array(_hermite_fn_poly(j, x) * np.exp(-0.5 * x * x), x)


def gamma(x):
    """Gamma function for x > 0."""
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0)):
        raise DomainError("gamma is only provided for x > 0")
    out = np.vectorize(math.gamma, otypes=[float])(xa)
    return _scalar_or_array(out, x)


def _fractal_coeffs(alpha: float, j: int, sign: float):
    # j! / (Gamma(k alpha + 1) (j - 2k)!) * sign**k for k = 0..j//2
    ks = range(j // 2 + 1)
    return [
        sign**k * (math.factorial(j) // math.factorial(j - 2 * k)) / math.gamma(k * alpha + 1.0)
        for k in ks
    ]


def _power_sum(coeffs, j, z):
    z = np.asarray(z, dtype=float)
    out = np.zeros_like(z)
    for k, c in enumerate(coeffs):
        out = out + c * z ** (j - 2 * k)
    return out


def fractal_hermite(alpha, j: int, x):
    """sum_k (-1)^k j! / (Gamma(k alpha + 1) (j - 2k)!) x^(j - 2k), k <= j // 2.

    At alpha = 1 this is H_j(x / 2) in the physicists' normalization.
    """
    a = _alpha(alpha)
    _check_index(j)
    return _scalar_or_array(_power_sum(_fractal_coeffs(a, j, -1.0), j, x), x)


def dual_hermite(j: int, z, alpha=1.0):
    """Dual fractal Hermite polynomial i^j H_j(-i z): the sum with all signs positive."""
    a = _alpha(alpha)
    _check_index(j)
    return _scalar_or_array(_power_sum(_fractal_coeffs(a, j, 1.0), j, z), z)


def _ml_scalar(alpha: float, z: float) -> float:
    if z == 0.0:
        return 1.0
    if abs(z) > ML_MAX_ARG:
        raise DomainError(f"|z| = {abs(z)} exceeds the series domain {ML_MAX_ARG}")
    neg = z < 0
    if not neg and z ** (1.0 / alpha) > 700.0:
        raise DomainError(f"E_{alpha},1({z}) ~ exp({z ** (1.0 / alpha):.4g}) overflows double precision")
    logz = math.log(abs(z))
    total = 0.0
    biggest = 0.0
    for k in range(ML_MAX_TERMS):
        mag = math.exp(k * logz - math.lgamma(k * alpha + 1.0))
        term = -mag if (neg and k % 2) else mag
        total += term
        biggest = max(biggest, mag)
        # past the peak, stop once the term is negligible against the sum
        # (or against the largest term, when the sum cancels to ~0)
        if k > 0 and mag < 1e-16 * max(abs(total), biggest * 1e-2):
            return total
    raise ConvergenceError(f"Mittag-Leffler series did not converge in {ML_MAX_TERMS} terms")


def mittag_leffler(alpha, z):
    """E_{alpha,1}(z) = sum_k z^k / Gamma(alpha k + 1) by direct summation, |z| <= 50."""
    a = _alpha(alpha)
    za = np.asarray(z, dtype=float)
    out = np.vectorize(lambda t: _ml_scalar(a, float(t)), otypes=[float])(za)
    return _scalar_or_array(out, z)


def _ml_negative_integral(alpha: float, t: float) -> float:
    """E_{alpha,1}(-t) for t > 0, 0 < alpha < 2, alpha != 1, from the Laplace-type representation.

    With v = r^alpha * t the completely monotone part becomes
        sin(alpha pi) / (alpha pi) * int_0^inf exp(-v^(1/alpha)) t / (v^2 + 2 v t cos(alpha pi) + t^2) dv,
    and for alpha > 1 the pole term (2/alpha) exp(s cos(pi/alpha)) cos(s sin(pi/alpha)), s = t^(1/alpha), is added.
    """
    b = 1.0 / alpha
    ca = math.cos(alpha * math.pi)

    def f(v):
        return math.exp(-(v**b)) * t / (v * v + 2.0 * v * t * ca + t * t)

    # exp(-v^(1/alpha)) < 1e-17 beyond vmax; the rational factor peaks near v = t
    vmax = 40.0**alpha
    pts = [t] if t < vmax else None
    # full_output keeps quadpack from warning when roundoff caps the attainable 1e-13
    val, _, *_ = quad(f, 0.0, vmax, points=pts, limit=400, epsabs=1e-17, epsrel=1e-13, full_output=1)
    val *= math.sin(alpha * math.pi) / (alpha * math.pi)
    if alpha > 1.0:
        s = t**b
        val += 2.0 / alpha * math.exp(s * math.cos(math.pi / alpha)) * math.cos(s * math.sin(math.pi / alpha))
    return val


def ml_multiplier(alpha: float, z):
    """E_{alpha,1}(z) for real z <= 0 of any size.

    Closed forms at alpha = 1 (exp) and alpha = 2 (cos); the power series
    for small arguments; otherwise the Laplace-type
    integral representation (completely monotone part plus, for alpha > 1,
    the damped oscillating pole contribution). The series is kept for
    t < 1, where the slowly decaying integrand is harder to resolve.
    """
    z = np.asarray(z, dtype=float)
    if np.any(z > 0):
        raise DomainError("ml_multiplier is for non-positive arguments")
    if alpha == 1.0:
        return np.exp(z)
    if alpha == 2.0:
        return np.cos(np.sqrt(-z))
    t = -z
    small = t < ML_SERIES_SWITCH
    out = np.empty_like(z)
    if np.any(small):
        out[small] = mittag_leffler(alpha, z[small])
    if np.any(~small):
        vals, inv = np.unique(t[~small], return_inverse=True)
        res = np.array([_ml_negative_integral(alpha, float(v)) for v in vals])
        out[~small] = res[inv.ravel()]
    return out
