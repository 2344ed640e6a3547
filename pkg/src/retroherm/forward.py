"""Forward solvers used as independent oracles for the inversions."""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import solve_banded

from .errors import DomainError, NotImplementedCoupling, NumericalFailure
from .fields import SampledField, Spectrum, trapezoid_weights
from .media import CONJUGATE, DIRECT, LayeredMedium, default_weight, eigen_matrix
from .special import FractalOrder, dual_hermite, ml_multiplier

__all__ = [
    "SampledField",
    "Spectrum",
    "heat_forward_homogeneous",
    "piecewise_heat_fd",
    "influence_kernel",
    "influence_fd_discrepancy",
    "wave_forward_family",
    "forward_series",
    "halfplane_forward",
    "apply_multiplier",
]

PAD_FACTOR = 2


def apply_multiplier(field: SampledField, multiplier, decay_tol: float = 1e-10):
    """Apply a Fourier multiplier m(lam) to a sampled field.

    Decaying data are zero-padded to ``PAD_FACTOR * N`` before the FFT so the
    periodic wrap-around lands in the padding.  Data that do not decay are
    treated as one period of a periodic function (no padding) and flagged.
    Returns (values, meta).
    """
    meta = {}
    n = field.n
    if field.decays(decay_tol):
        m = PAD_FACTOR * n
        buf = np.zeros(m)
        buf[:n] = field.values
    else:
        m = n
        buf = field.values.copy()
        meta["periodic"] = True
        meta["warning"] = "input does not decay at the grid ends; treated as periodic"
    lam = 2.0 * math.pi * np.fft.rfftfreq(m, field.dx)
    spec = np.fft.rfft(buf) * multiplier(lam)
    out = np.fft.irfft(spec, m)[:n]
    return out, meta


def heat_forward_homogeneous(f: SampledField, tau: float, a: float = 1.0, alpha=1.0) -> SampledField:
    """Evolve by the multiplier E_{alpha,1}(-a^2 lam^2 tau^alpha) (exp at alpha=1, cos at alpha=2)."""
    al = FractalOrder(float(alpha)).alpha
    if tau < 0:
        raise DomainError("tau must be non-negative")
    if tau == 0:
        return f.with_values(f.values, time_tag=f.time_tag)
    out, meta = apply_multiplier(f, lambda lam: ml_multiplier(al, -(a * lam) ** 2 * tau**al))
    return f.with_values(out, time_tag=f.time_tag + tau, meta=meta)


def _fd_operator(medium: LayeredMedium, field: SampledField):
    x = field.x
    h = field.dx
    for k, l in enumerate(medium.breakpoints):
        i = int(round((l - field.x0) / h))
        if i <= 0 or i >= field.n - 1 or abs(x[i] - l) > 1e-9 * h:
            raise DomainError(f"breakpoint {k + 1} at {l} is not an interior grid point")
        c = medium.couplings[k]
        if not c.is_flux_form(medium.speeds[k], medium.speeds[k + 1]):
            raise NotImplementedCoupling(
                f"interface {k + 1}: only continuity of u and of a^2 u_x is supported by the FD solver"
            )
    mid = x[:-1] + 0.5 * h
    D = medium.speed_at(mid) ** 2  # face diffusivities
    n = field.n
    lower = np.zeros(n)
    diag = np.zeros(n)
    upper = np.zeros(n)
    # rows 1..n-2; Dirichlet rows 0 and n-1 stay zero
    diag[1:-1] = -(D[1:] + D[:-1]) / h**2
    lower[1:-1] = D[:-1] / h**2
    upper[1:-1] = D[1:] / h**2
    return lower, diag, upper


def _banded(lower, diag, upper, c):
    # (I + c L) in solve_banded layout, Dirichlet rows kept as identity
    n = diag.size
    ab = np.zeros((3, n))
    ab[0, 1:] = c * upper[:-1]
    ab[1] = 1.0 + c * diag
    ab[2, :-1] = c * lower[1:]
    return ab


def _apply(lower, diag, upper, c, u):
    out = u + c * diag * u
    out[1:] += c * lower[1:] * u[:-1]
    out[:-1] += c * upper[:-1] * u[1:]
    return out


def piecewise_heat_fd(
    medium: LayeredMedium, f: SampledField, tau: float, steps: int = 200, smoothing: int = 0
) -> SampledField:
    """Crank-Nicolson for u_t = (a(x)^2 u_x)_x with Dirichlet-zero ends.

    The flux form makes continuity of u and of a^2 u_x hold at grid-aligned
    interfaces and conserves the discrete mass sum(u) dx exactly up to
    boundary fluxes.  ``smoothing`` > 0 replaces that many initial steps by
    two implicit-Euler half steps each (Rannacher start-up).
    """
    if tau < 0 or steps < 1:
        raise DomainError("need tau >= 0 and steps >= 1")
    lower, diag, upper = _fd_operator(medium, f)
    u = f.values.copy()
    u[0] = u[-1] = 0.0
    dt = tau / steps
    lhs_cn = _banded(lower, diag, upper, -0.5 * dt)
    lhs_be = _banded(lower, diag, upper, -0.5 * dt)  # implicit Euler with dt/2
    for step in range(steps):
        if step < smoothing:
            for _ in range(2):
                u = solve_banded((1, 1), lhs_be, u)
        else:
            u = solve_banded((1, 1), lhs_cn, _apply(lower, diag, upper, 0.5 * dt, u))
        u[0] = u[-1] = 0.0
    if not np.all(np.isfinite(u)):
        raise NumericalFailure("FD solution became non-finite")
    return f.with_values(u, time_tag=f.time_tag + tau, meta={"steps": steps, "dt": dt})


def influence_kernel(
    medium: LayeredMedium, t: float, x, xi: float, lambda_cutoff: float | None = None, weight: float | None = None
):
    """weight * int phi(x, lam) exp(-lam^2 t) phi*(xi, lam) dlam, real part.

    In a homogeneous medium this is the heat kernel exp(-(x-xi)^2/(4 a^2 t)) / (2 a sqrt(pi t)).
    """
    if not t > 0:
        raise DomainError("t must be positive")
    if weight is None:
        weight = default_weight(medium)
    x = np.asarray(x, dtype=float)
    xs = np.atleast_1d(x)
    amin = min(medium.speeds)
    cutoff = lambda_cutoff if lambda_cutoff is not None else math.sqrt(40.0 / t)
    # the lam step sets the alias period; leave room for the kernel's own width
    span = float(np.max(np.abs(xs))) + abs(xi) + 1.0 + 12.0 * max(medium.speeds) * math.sqrt(t)
    dlam = 2.0 * math.pi / (4.0 * span / amin)
    lam = np.linspace(-cutoff, cutoff, 2 * int(math.ceil(cutoff / dlam)) + 1)
    w = trapezoid_weights(lam) * np.exp(-lam * lam * t)
    row = eigen_matrix(medium, [xi], lam, CONJUGATE)[0] * w
    vals = weight * (eigen_matrix(medium, xs, lam, DIRECT) @ row)
    out = vals.real.reshape(x.shape)
    return out if out.ndim else float(out)


def influence_fd_discrepancy(
    medium: LayeredMedium, t: float, xi: float, xmin: float, xmax: float, n: int = 2048, steps: int = 400
) -> dict:
    """Compare the influence kernel with the FD response to a discrete delta at xi.

    Diagnostic only: for layered media the kernel inherits the transform's
    unresolved spectral weights, so the number is reported, not asserted.
    """
    f = SampledField.on_grid(xmin, xmax, n, lambda x: np.zeros_like(x))
    i = int(round((xi - f.x0) / f.dx))
    vals = np.zeros(n)
    vals[i] = 1.0 / f.dx
    u = piecewise_heat_fd(medium, f.with_values(vals), t, steps)
    interior = f.window(0.25 * (xmax - xmin), 0.5 * (xmin + xmax))
    xs = f.x[interior][::8]
    k = influence_kernel(medium, t, xs, f.x[i])
    fd = u.values[interior][::8]
    return {
        "xi": float(f.x[i]),
        "t": t,
        "max_abs_discrepancy": float(np.max(np.abs(k - fd))),
        "fd_peak": float(np.max(np.abs(fd))),
    }


def wave_forward_family(g, t: float, tau: float, x_grid) -> SampledField:
    """u(t, x) = g(x + t - tau) + g(x - t + tau) sampled on a uniform grid."""
    x = np.asarray(x_grid, dtype=float)
    vals = g(x + t - tau) + g(x - t + tau)
    return SampledField(float(x[0]), float(x[1] - x[0]), vals, time_tag=t)


def forward_series(derivs, tau: float, alpha=1.0):
    """Evolution of polynomial data given by its derivatives f^(j)(0).

    Returns u(x) = sum_j f_j tau^(beta j) / j! H*_j(x / tau^beta), beta = alpha/2,
    with H* the dual fractal Hermite polynomials.
    """
    al = FractalOrder(float(alpha)).alpha
    if not tau > 0:
        raise DomainError("tau must be positive")
    derivs = [float(d) for d in derivs]
    s = tau ** (al / 2.0)

    def u(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        for j, fj in enumerate(derivs):
            if fj != 0.0:
                out = out + fj * s**j / math.factorial(j) * dual_hermite(j, x / s, al)
        return out if out.ndim else float(out)

    return u


def halfplane_forward(f: SampledField, l: float) -> SampledField:
    """Harmonic extension into the half-plane, sampled at depth l: multiplier exp(-l |lam|)."""
    if l < 0:
        raise DomainError("depth must be non-negative")
    if l == 0:
        return f.with_values(f.values)
    out, meta = apply_multiplier(f, lambda lam: np.exp(-l * np.abs(lam)))
    return f.with_values(out, meta=meta)
