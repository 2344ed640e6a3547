"""Inverse Dirichlet problem for the right half-plane x > 0.

Given the trace u(l, .) of a bounded harmonic function, recover the boundary
data f = u(0, .).  ``dirichlet_invert_spectral`` is the exact (regularized)
inverse.  The Taylor-series and analytic-continuation routes evaluate
Re u(l, y + i l); for a bounded harmonic u that quantity equals
(u(0, y) + u(2l, y)) / 2, which coincides with f only when u is symmetric
about x = l (e.g. harmonic polynomials even in x - l).  ``mirror_average``
gives the matching reference built from the spectral route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AmplificationOverflow, DomainError, OutOfRangeError
from .fields import SampledField
from .forward import PAD_FACTOR, halfplane_forward
from .media import homogeneous
from .retro import OVERFLOW_GUARD, _polyfit_coeffs

MAX_SERIES_ORDER = 48


@dataclass(frozen=True)
class HalfPlaneTrace:
    depth: float
    trace: SampledField

    def __post_init__(self):
        if not (self.depth > 0 and math.isfinite(self.depth)):
            raise DomainError(f"depth must be positive, got {self.depth}")


def dirichlet_invert_spectral(trace: HalfPlaneTrace, cutoff: float, decay_tol: float = 1e-10) -> SampledField:
    """f = inverse FT of exp(l |lam|) u^(lam), restricted to |lam| <= cutoff.

    Written over lam >= 0 this is Re (1/pi) int_0^cutoff exp(lam l) exp(i lam y) u^(lam) dlam
    with the lam = 0 node carrying half weight, which is what the real FFT does.
    """
    if not cutoff > 0:
        raise DomainError("cutoff must be positive")
    u = trace.trace
    l = trace.depth
    n = u.n
    meta = {"cutoff": cutoff, "depth": l}
    if u.decays(decay_tol):
        m = PAD_FACTOR * n
        buf = np.zeros(m)
        buf[:n] = u.values
    else:
        m = n
        buf = u.values.copy()
        meta["periodic"] = True
        meta["warning"] = "trace does not decay at the grid ends; treated as periodic"
    lam = 2.0 * math.pi * np.fft.rfftfreq(m, u.dx)
    keep = lam <= cutoff + 1e-12
    spec = np.fft.rfft(buf) * u.dx  # continuous-transform scaling for the guard
    amplified = np.where(keep, np.exp(l * lam * keep) * spec, 0.0)
    big = np.abs(amplified)
    if big.max() > OVERFLOW_GUARD:
        i = int(np.argmax(big))
        raise AmplificationOverflow(f"amplified spectrum {big[i]:.3e} exceeds guard at lam = {lam[i]:.4g}", float(lam[i]))
    meta["max_amplification"] = float(math.exp(l * min(cutoff, lam[-1])))
    out = np.fft.irfft(amplified / u.dx, m)[:n]
    return u.with_values(out, time_tag=0.0, meta=meta)


def dirichlet_invert_series(derivs, l: float, J: int | None = None):
    """Evaluator of f(y) = sum_{j<=J} d_j / j! Re (y + i l)^j with d_j = u^(j)(l, 0).

    Re (y + il)^j equals ((y + il)^j + (y - il)^j) / 2.
    """
    d = np.asarray(derivs, dtype=float)
    if J is None:
        J = d.size - 1
    if J > MAX_SERIES_ORDER:
        raise OutOfRangeError(f"series order must not exceed {MAX_SERIES_ORDER}")
    d = d[: J + 1]
    if not np.all(np.isfinite(d)):
        raise DomainError("trace derivatives must be finite")
    scaled = d / np.array([math.factorial(j) for j in range(d.size)], dtype=float)

    def f(y):
        z = np.asarray(y, dtype=float) + 1j * l
        acc = np.zeros(z.shape, dtype=complex)
        for c in scaled[::-1]:
            acc = acc * z + c
        out = acc.real
        return out if out.ndim else float(out)

    return f


def dirichlet_invert_continuation(u_eval, l: float):
    """Evaluator of f(y) = Re u(l, y + i l); ``u_eval(x, y)`` must accept complex y."""

    def f(y):
        y = np.asarray(y, dtype=float)
        out = np.real(u_eval(l, y + 1j * l))
        out = np.asarray(out, dtype=float)
        return out if out.ndim else float(out)

    return f


def trace_derivatives(trace: HalfPlaneTrace, J: int, window: float = 3.0, center: float = 0.0) -> np.ndarray:
    """d_j = u^(j)(l, center) by least-squares polynomial fit of the trace on |y - center| <= window."""
    coeffs = _polyfit_coeffs(trace.trace, homogeneous(1.0), J, window, center)
    return coeffs.values


def mirror_average(f: SampledField, l: float) -> SampledField:
    """(u(0, y) + u(2l, y)) / 2 for the bounded harmonic extension of f.

    This is what the series and continuation routes return for general data.
    """
    far = halfplane_forward(f, 2.0 * l)
    return f.with_values(0.5 * (f.values + far.values), meta=dict(far.meta))


def harmonicity_residual(f: SampledField, l: float, interior: float | None = None) -> float:
    """Max five-point Laplacian of the extension on the patch x in {l - h, l, l + h}.

    h is the grid step of f, so the stencil is isotropic.  Returned on the
    window |y| <= ``interior`` (default: a quarter of the grid span).
    """
    h = f.dx
    if not l - h >= 0:
        raise DomainError("depth must be at least one grid step")
    rows = [halfplane_forward(f, d).values for d in (l - h, l, l + h)]
    mid = rows[1]
    lap = (rows[0] + rows[2] - 2.0 * mid)[1:-1] / h**2 + (mid[2:] + mid[:-2] - 2.0 * mid[1:-1]) / h**2
    if interior is None:
        interior = 0.25 * (f.x[-1] - f.x[0])
    sel = f.window(interior, 0.5 * (f.x[0] + f.x[-1]))[1:-1]
    return float(np.max(np.abs(lap[sel])))
