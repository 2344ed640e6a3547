"""Inverse (retrospective) engines: recover the initial field from u(tau, .).

Three routes are provided:

* ``reconstruct_series``: f = sum_j u_j / j! H_{jn}(x) with generalized Taylor
  coefficients u_j of the observed field;
* ``spectral_invert``: analysis transform, inverse multiplier, synthesis,
  truncated at |lam| <= cutoff;
* ``dalembert_invert``: the closed form for the zero-velocity wave equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AmplificationOverflow, DomainError, IllConditionedError, QuadratureError
from .fields import SampledField, Spectrum, symmetric_grid, trapezoid_weights
from .genfun import COS_KERNEL, EvolutionK, basis_matrix, gen_hermite_basis
from .media import LayeredMedium, default_weight, generalized_monomials, transform_analysis, transform_synthesis
from .special import mittag_leffler

SERIES = "series"
SPECTRAL = "spectral"
DALEMBERT = "dalembert"
POLYFIT = "polyfit"
MOMENTS = "moments"

OVERFLOW_GUARD = 1e12
MOMENT_DAMPING = 1e-4
MOMENT_FLOOR = 1e-14
MOMENT_EDGE_TOL = 1e-2


@dataclass(frozen=True)
class ReconstructionConfig:
    kernel: EvolutionK
    method: str = SERIES
    order: int = 24
    cutoff: float = 12.0
    coeff_method: str = POLYFIT
    fit_window: float = 3.0
    center: float = 0.0

    def __post_init__(self):
        if self.method not in (SERIES, SPECTRAL, DALEMBERT):
            raise DomainError(f"unknown method {self.method!r}")
        if self.coeff_method not in (POLYFIT, MOMENTS):
            raise DomainError(f"unknown coefficient method {self.coeff_method!r}")
        if not 0 <= self.order <= 48:
            raise DomainError("order must lie in [0, 48]")
        if not 0 < self.cutoff <= 64:
            raise DomainError("cutoff must lie in (0, 64]")
        if not self.fit_window > 0:
            raise DomainError("fit_window must be positive")


@dataclass(frozen=True, eq=False)
class TaylorCoeffs:
    values: np.ndarray
    method: str
    condition: float
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if not np.all(np.isfinite(v)):
            raise ValueError("Taylor coefficients must be finite")
        object.__setattr__(self, "values", v)


def _polyfit_coeffs(u: SampledField, medium: LayeredMedium, J: int, window: float, center: float) -> TaylorCoeffs:
    sel = u.window(window, center)
    x = u.x[sel]
    if x.size < J + 1:
        raise IllConditionedError(f"{x.size} samples in the fit window cannot determine {J + 1} coefficients")
    table = generalized_monomials(medium, J)
    V = np.stack([table.eval(j, x) / math.factorial(j) for j in range(J + 1)], axis=1)
    scale = np.max(np.abs(V), axis=0)
    scale[scale == 0] = 1.0
    Vs = V / scale
    sol, _, rank, sv = np.linalg.lstsq(Vs, u.values[sel], rcond=None)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else float("inf")
    if rank < J + 1:
        raise IllConditionedError(f"fit is rank deficient (rank {rank} < {J + 1})", cond)
    # basis is x_n^j / j!, so the fitted coefficient is u_j directly
    return TaylorCoeffs(sol / scale, POLYFIT, cond, {"window": window, "center": center, "samples": int(x.size)})


def _moment_coeffs(u: SampledField, medium: LayeredMedium, J: int, epsilon: float = MOMENT_DAMPING) -> TaylorCoeffs:
    amin = min(medium.speeds)
    nyquist = min(math.pi / u.dx * amin, math.sqrt(36.0 / epsilon))
    xmax = max(abs(u.x[0]), abs(u.x[-1]))
    lam = symmetric_grid(nyquist, 2.0 * math.pi / (4.0 * xmax / amin))
    spec = transform_analysis(medium, u, lam)
    # beyond the round-off floor of u~ the factor lam^j only amplifies noise
    mag = np.abs(spec.values)
    alive = np.nonzero(mag > MOMENT_FLOOR * mag.max())[0] if mag.max() > 0 else np.array([lam.size // 2])
    cutoff = max(abs(lam[alive[0]]), abs(lam[alive[-1]]))
    keep = np.abs(lam) <= cutoff + 1e-12
    lam, vals_u = lam[keep], spec.values[keep]
    damp = np.exp(-epsilon * lam * lam) * trapezoid_weights(lam)
    weight = default_weight(medium)
    vals = np.empty(J + 1)
    edge = 0.0
    for j in range(J + 1):
        integrand = (1j * lam) ** j * vals_u * damp
        vals[j] = (weight * integrand.sum()).real
        peak = np.max(np.abs(integrand))
        if peak > 0:
            edge = max(edge, float(max(abs(integrand[0]), abs(integrand[-1])) / peak))
    if edge > MOMENT_EDGE_TOL:
        raise QuadratureError(f"moment integrand not resolved at the lambda cutoff (edge/peak = {edge:.2e})")
    return TaylorCoeffs(vals, MOMENTS, edge, {"epsilon": epsilon, "cutoff": float(cutoff)})


def taylor_coeffs(u: SampledField, medium: LayeredMedium, J: int, config: ReconstructionConfig | None = None) -> TaylorCoeffs:
    """Generalized Taylor coefficients u_j with u = sum_j u_j x_n^j / j! near the origin.

    ``polyfit`` fits the basis {x_n^j / j!} by least squares on the window;
    ``moments`` evaluates weight * int (i lam)^j u~(lam) exp(-eps lam^2) dlam.
    """
    method = config.coeff_method if config else POLYFIT
    if method == POLYFIT:
        window = config.fit_window if config else 3.0
        center = config.center if config else 0.0
        return _polyfit_coeffs(u, medium, J, window, center)
    return _moment_coeffs(u, medium, J)


def reconstruct_series(u: SampledField, medium: LayeredMedium, config: ReconstructionConfig) -> SampledField:
    """f(x) = sum_{j<=J} u_j / j! H_{jn}(x) on the grid of ``u``."""
    J = config.order
    coeffs = taylor_coeffs(u, medium, J, config)
    basis = gen_hermite_basis(medium, config.kernel, J)
    H = basis_matrix(basis, u.x)
    fact = np.array([math.factorial(j) for j in range(J + 1)], dtype=float)
    terms = H * (coeffs.values / fact)
    f = terms.sum(axis=1)
    win = u.window(config.fit_window, config.center)
    norms = np.max(np.abs(terms[win]), axis=0) if np.any(win) else np.zeros(J + 1)
    tail = norms[-6:]
    growing = bool(len(tail) == 6 and np.all(np.diff(tail) > 0))
    meta = {
        "coefficients": coeffs.values.tolist(),
        "coeff_method": coeffs.method,
        "condition": coeffs.condition,
        "term_norms": norms.tolist(),
        "non_convergent": growing,
    }
    return u.with_values(f, time_tag=0.0, meta=meta)


def inverse_multiplier(kernel: EvolutionK, lam):
    lam = np.asarray(lam, dtype=float)
    if kernel.kind == COS_KERNEL:
        raise DomainError("the cos-kernel has no spectral inverse; use dalembert_invert")
    if kernel.alpha == 1.0:
        return np.exp(lam * lam * kernel.tau)
    return mittag_leffler(kernel.alpha, lam * lam * kernel.tau**kernel.alpha)


def spectral_invert(
    u: SampledField, medium: LayeredMedium, kernel: EvolutionK, cutoff: float, dlam: float | None = None
) -> SampledField:
    """Analysis transform, inverse multiplier, synthesis over |lam| <= cutoff.

    For alpha != 1 the multiplier E_{alpha,1}(lam^2 tau^alpha) is not the
    reciprocal of the forward one; the result is flagged ``formal_paper_mode``.
    """
    if not cutoff > 0:
        raise DomainError("cutoff must be positive")
    xmax = max(abs(u.x[0]), abs(u.x[-1]))
    amin = min(medium.speeds)
    if dlam is None:
        dlam = min(0.05, 2.0 * math.pi / (4.0 * xmax / amin))
    lam = symmetric_grid(cutoff, dlam)
    spec = transform_analysis(medium, u, lam)
    mult = inverse_multiplier(kernel, lam)
    amplified = mult * spec.values
    big = np.abs(amplified)
    if np.max(big) > OVERFLOW_GUARD:
        i = int(np.argmax(big))
        raise AmplificationOverflow(f"amplified spectrum {big[i]:.3e} exceeds guard at lam = {lam[i]:.4g}", float(lam[i]))
    f = transform_synthesis(medium, Spectrum(lam, amplified), u.x)
    meta = dict(f.meta)
    meta["cutoff"] = cutoff
    meta["max_amplification"] = float(np.max(mult))
    if kernel.alpha != 1.0:
        meta["formal_paper_mode"] = True
    if "warning" in spec.meta:
        meta["warning"] = spec.meta["warning"]
    return f.with_values(f.values, time_tag=0.0, meta=meta)


def dalembert_invert(u_tau: SampledField, tau: float) -> SampledField:
    """f(x) = (u(tau, x + tau) + u(tau, x - tau)) / 2.

    The result lives on the sub-grid where both shifted points fall inside
    the data; shifts that are not whole grid steps use linear interpolation.
    """
    if tau < 0:
        raise DomainError("tau must be non-negative")
    s = tau / u_tau.dx
    margin = int(math.ceil(s - 1e-9))
    n_out = u_tau.n - 2 * margin
    if n_out < 16:
        raise DomainError(f"grid too short to shift by +-{tau}: {n_out} points would remain")
    v = u_tau.values
    if abs(s - round(s)) <= 1e-9:
        k = int(round(s))
        plus = v[margin + k : margin + k + n_out]
        minus = v[margin - k : margin - k + n_out]
    else:
        x = u_tau.x[margin : margin + n_out]
        plus = np.interp(x + tau, u_tau.x, v)
        minus = np.interp(x - tau, u_tau.x, v)
    return SampledField(u_tau.x0 + margin * u_tau.dx, u_tau.dx, 0.5 * (plus + minus), 0.0, {"margin": margin})


def reconstruct(u: SampledField, medium: LayeredMedium, config: ReconstructionConfig) -> SampledField:
    if config.method == SERIES:
        return reconstruct_series(u, medium, config)
    if config.method == SPECTRAL:
        return spectral_invert(u, medium, config.kernel, config.cutoff)
    if not medium.homogeneous:
        raise DomainError("dalembert inversion is for the homogeneous axis")
    return dalembert_invert(u, config.kernel.tau * medium.speeds[0])


def add_noise(u: SampledField, sigma: float, seed: int) -> SampledField:
    """Additive i.i.d. Gaussian noise, one draw per grid point, seeded."""
    if sigma == 0:
        return u
    rng = np.random.default_rng(seed)
    return u.with_values(u.values + rng.normal(0.0, sigma, u.n), time_tag=u.time_tag, meta={"noise_sigma": sigma, "seed": seed})
