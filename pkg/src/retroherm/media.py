"""Piecewise-homogeneous axis: eigenfunctions of the direct and conjugate
Sturm-Liouville problems, generalized power functions and the transform pair.

Layer ``m`` (0-based here) occupies ``(l_{m-1}, l_m)`` with speed ``a_m``.
Inside a layer the eigenfunction is a pair of plane waves,

    phi_m(x, lam) = A_m exp(i s lam x / a_m) + B_m exp(-i s lam x / a_m)

with ``s = +1`` for the direct kind and ``s = -1`` for the conjugate kind, so
that in both kinds the last layer carries ``(A, B) = (1, 0)``: the direct
eigenfunction ends in ``exp(i lam x / a)`` and the conjugate one in
``exp(-i lam x / a)``.  Amplitudes of the other layers follow by solving
the two coupling conditions at each interface, right to left.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConsistencyError, DomainError, OutOfRangeError, SingularSystemError
from .fields import SampledField, Spectrum, trapezoid_weights
from .jets import DEFAULT_ORDER, Jet, jet_exp, laurent_solve_2x2

DIRECT = "direct"
CONJUGATE = "conjugate"
MAX_JET_ORDER = 64
# grid round-off around lam = 0 (e.g. from linspace) is treated as zero
ZERO_LAMBDA = 1e-12


@dataclass(frozen=True)
class Coupling:
    """Coefficients of ``[alpha_mi d/dx + beta_mi] u`` for one interface.

    ``alpha[m][i]`` with ``m`` the condition (0, 1) and ``i`` the side
    (0 = left, 1 = right).
    """

    alpha: tuple
    beta: tuple

    def __post_init__(self):
        a = tuple(tuple(float(v) for v in row) for row in self.alpha)
        b = tuple(tuple(float(v) for v in row) for row in self.beta)
        if len(a) != 2 or len(b) != 2 or any(len(r) != 2 for r in a + b):
            raise ValueError("coupling blocks must be 2x2")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @classmethod
    def ideal(cls, a_left, a_right):
        """Continuity of u and of a^2 u_x (perfect thermal contact)."""
        return cls(alpha=((0.0, 0.0), (a_left**2, a_right**2)), beta=((1.0, 1.0), (0.0, 0.0)))

    def delta(self, side: int) -> float:
        a, b = self.alpha, self.beta
        return a[0][side] * b[1][side] - a[1][side] * b[0][side]

    def is_flux_form(self, a_left, a_right, rtol=1e-12) -> bool:
        """Row 0 is continuity of u and row 1 continuity of a^2 u_x (up to row scaling)."""
        a, b = self.alpha, self.beta
        row0 = a[0][0] == 0 and a[0][1] == 0 and b[0][0] != 0 and math.isclose(b[0][0], b[0][1], rel_tol=rtol)
        row1 = (
            b[1][0] == 0
            and b[1][1] == 0
            and a[1][0] != 0
            and math.isclose(a[1][0] * a_right**2, a[1][1] * a_left**2, rel_tol=rtol)
        )
        return row0 and row1


@dataclass(frozen=True)
class LayeredMedium:
    breakpoints: tuple
    speeds: tuple
    couplings: tuple
    deltas: tuple = ()

    @property
    def n_interfaces(self) -> int:
        return len(self.breakpoints)

    @property
    def homogeneous(self) -> bool:
        return not self.breakpoints

    @property
    def last_speed(self) -> float:
        return self.speeds[-1]

    def layer_index(self, x) -> np.ndarray:
        """0-based layer of each x; a breakpoint belongs to the layer on its left."""
        return np.searchsorted(np.asarray(self.breakpoints, dtype=float), np.asarray(x, dtype=float), side="left")

    def speed_at(self, x) -> np.ndarray:
        return np.asarray(self.speeds)[self.layer_index(x)]


def build_medium(breakpoints: Sequence[float] = (), speeds: Sequence[float] = (1.0,), couplings=()) -> LayeredMedium:
    """Validate and assemble a layered medium; couplings may be Coupling objects,
    ``"ideal"``, or dicts with ``alpha``/``beta`` 2x2 blocks."""
    bp = tuple(float(v) for v in breakpoints)
    sp = tuple(float(v) for v in speeds)
    if len(sp) != len(bp) + 1:
        raise DomainError(f"{len(bp)} breakpoints need {len(bp) + 1} speeds, got {len(sp)}")
    if len(couplings) != len(bp):
        raise DomainError(f"{len(bp)} breakpoints need {len(bp)} coupling blocks, got {len(couplings)}")
    for k in range(1, len(bp)):
        if not bp[k] > bp[k - 1]:
            raise DomainError(f"breakpoints must increase strictly (interface {k + 1})")
    for m, a in enumerate(sp):
        if not (a > 0 and math.isfinite(a)):
            raise DomainError(f"speed of layer {m + 1} must be positive, got {a}")
    cps = []
    for k, c in enumerate(couplings):
        if isinstance(c, str):
            if c != "ideal":
                raise DomainError(f"unknown coupling shorthand {c!r} at interface {k + 1}")
            c = Coupling.ideal(sp[k], sp[k + 1])
        elif isinstance(c, dict):
            c = Coupling(alpha=c["alpha"], beta=c["beta"])
        cps.append(c)
    deltas = []
    for k, c in enumerate(cps):
        d = (c.delta(0), c.delta(1))
        for i, v in enumerate(d):
            if v == 0:
                raise DomainError(f"Delta_{i + 1},{k + 1} = 0: coupling block of interface {k + 1} is degenerate")
        deltas.append(d)
    return LayeredMedium(bp, sp, tuple(cps), tuple(deltas))


def homogeneous(a: float = 1.0) -> LayeredMedium:
    return build_medium((), (a,), ())


def ideal_contact(speeds: Sequence[float], breakpoints: Sequence[float]) -> LayeredMedium:
    couplings = [Coupling.ideal(speeds[k], speeds[k + 1]) for k in range(len(breakpoints))]
    return build_medium(breakpoints, speeds, couplings)


def _kind_params(medium: LayeredMedium, kind: str):
    # (sign s, per-interface (left weight, right weight))
    if kind == DIRECT:
        return 1.0, [(1.0, 1.0)] * medium.n_interfaces
    if kind == CONJUGATE:
        return -1.0, [(1.0 / d1, 1.0 / d2) for d1, d2 in medium.deltas]
    raise ValueError(f"kind must be {DIRECT!r} or {CONJUGATE!r}, got {kind!r}")


# --------------------------------------------------------------------------
# eigenfunctions


@dataclass(frozen=True, eq=False)
class Eigenfunction:
    """Per-layer plane-wave amplitudes; complex numbers at a fixed ``lam`` or jets in lam."""

    medium: LayeredMedium
    kind: str
    A: tuple
    B: tuple
    lam: complex | None = None

    @property
    def is_jet(self) -> bool:
        return self.lam is None

    @property
    def sign(self) -> float:
        return 1.0 if self.kind == DIRECT else -1.0

    def __call__(self, x, lam=None):
        """phi(x) at the stored lam (pointwise) or at ``lam`` via the jet partial sums."""
        x = np.asarray(x, dtype=float)
        if self.is_jet:
            if lam is None:
                raise ValueError("a jet eigenfunction needs lam to evaluate")
            A = [a(lam) for a in self.A]
            B = [b(lam) for b in self.B]
        else:
            lam = self.lam
            A, B = self.A, self.B
        idx = self.medium.layer_index(x)
        out = np.zeros(x.shape, dtype=complex)
        for m, a in enumerate(self.medium.speeds):
            sel = idx == m
            k = 1j * self.sign * lam / a
            out[sel] = A[m] * np.exp(k * x[sel]) + B[m] * np.exp(-k * x[sel])
        return out if out.ndim else complex(out)

    def layer_values(self, m: int, x, deriv: int = 0):
        """Value (deriv=0) or x-derivative (deriv=1) of the layer-m expression at x (pointwise)."""
        if self.is_jet:
            raise ValueError("layer_values needs a pointwise eigenfunction")
        k = 1j * self.sign * self.lam / self.medium.speeds[m]
        e = np.exp(k * np.asarray(x, dtype=float))
        if deriv == 0:
            return self.A[m] * e + self.B[m] / e
        return k * (self.A[m] * e - self.B[m] / e)

    def coupling_residuals(self) -> np.ndarray:
        """|left - right| of both coupling conditions at every interface (pointwise)."""
        med = self.medium
        _, weights = _kind_params(med, self.kind)
        res = np.zeros((med.n_interfaces, 2))
        for k, l in enumerate(med.breakpoints):
            c = med.couplings[k]
            w1, w2 = weights[k]
            uL, dL = self.layer_values(k, l), self.layer_values(k, l, 1)
            uR, dR = self.layer_values(k + 1, l), self.layer_values(k + 1, l, 1)
            for m in range(2):
                lhs = w1 * (c.alpha[m][0] * dL + c.beta[m][0] * uL)
                rhs = w2 * (c.alpha[m][1] * dR + c.beta[m][1] * uR)
                res[k, m] = abs(lhs - rhs)
        return res


def amplitudes(medium: LayeredMedium, lam, kind: str = DIRECT):
    """Vectorized pointwise amplitudes: arrays A, B of shape (n_layers, len(lam)).

    At lam = 0 the interface systems are singular; within ZERO_LAMBDA of it
    the values come from the constant terms of the jet amplitudes.
    """
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    s, weights = _kind_params(medium, kind)
    nl = len(medium.speeds)
    A = np.zeros((nl, lam.size), dtype=complex)
    B = np.zeros((nl, lam.size), dtype=complex)
    A[-1] = 1.0
    zero = np.abs(lam) <= ZERO_LAMBDA
    for k in range(medium.n_interfaces - 1, -1, -1):
        l = medium.breakpoints[k]
        c = medium.couplings[k]
        w1, w2 = weights[k]
        kL = 1j * s * lam / medium.speeds[k]
        kR = 1j * s * lam / medium.speeds[k + 1]
        eL, eR = np.exp(kL * l), np.exp(kR * l)
        M = np.empty((2, 2, lam.size), dtype=complex)
        r = np.empty((2, lam.size), dtype=complex)
        for m in range(2):
            aL, bL = c.alpha[m][0], c.beta[m][0]
            aR, bR = c.alpha[m][1], c.beta[m][1]
            M[m, 0] = w1 * (aL * kL + bL) * eL
            M[m, 1] = w1 * (-aL * kL + bL) / eL
            r[m] = w2 * ((aR * kR + bR) * eR * A[k + 1] + (-aR * kR + bR) / eR * B[k + 1])
        det = M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
        scale = np.max(np.abs(M), axis=(0, 1)) ** 2
        bad = (np.abs(det) <= 1e-14 * scale) & ~zero
        if np.any(bad):
            raise SingularSystemError(
                f"interface {k + 1} system is singular at lam = {lam[bad][0]}", interface=k + 1
            )
        with np.errstate(invalid="ignore", divide="ignore"):
            A[k] = (r[0] * M[1, 1] - M[0, 1] * r[1]) / det
            B[k] = (M[0, 0] * r[1] - r[0] * M[1, 0]) / det
    if np.any(zero):
        ef = eigenfunction_jet(medium, 2, kind)
        A[:, zero] = np.array([a.coeffs[0] for a in ef.A])[:, None]
        B[:, zero] = np.array([b.coeffs[0] for b in ef.B])[:, None]
    return A, B


def eigenfunction_at(medium: LayeredMedium, lam: float, kind: str = DIRECT) -> Eigenfunction:
    """Eigenfunction amplitudes at a single real lam."""
    if not math.isfinite(lam):
        raise DomainError("lam must be finite")
    A, B = amplitudes(medium, [lam], kind)
    return Eigenfunction(medium, kind, tuple(A[:, 0]), tuple(B[:, 0]), lam=complex(lam))


def _jet_solve(medium: LayeredMedium, work: int, kind: str):
    s, weights = _kind_params(medium, kind)
    nl = len(medium.speeds)
    A = [None] * nl
    B = [None] * nl
    A[-1] = Jet.constant(1.0, work)
    B[-1] = Jet.zero(work)
    cur = work
    for k in range(medium.n_interfaces - 1, -1, -1):
        l = medium.breakpoints[k]
        c = medium.couplings[k]
        w1, w2 = weights[k]
        kL = Jet.variable(cur, 1j * s / medium.speeds[k])
        kR = Jet.variable(cur, 1j * s / medium.speeds[k + 1])
        eL, eLi = jet_exp(kL * l), jet_exp(kL * (-l))
        eR, eRi = jet_exp(kR * l), jet_exp(kR * (-l))
        AR, BR = A[k + 1].truncate(cur), B[k + 1].truncate(cur)
        M, rhs = [], []
        for m in range(2):
            aL, bL = c.alpha[m][0], c.beta[m][0]
            aR, bR = c.alpha[m][1], c.beta[m][1]
            M.append([w1 * (kL * aL + bL) * eL, w1 * (kL * (-aL) + bL) * eLi])
            rhs.append(w2 * ((kR * aR + bR) * eR * AR + (kR * (-aR) + bR) * eRi * BR))
        A[k], B[k] = laurent_solve_2x2(M, rhs, interface=k + 1)
        cur = A[k].order
    return A, B, cur


def eigenfunction_jet(medium: LayeredMedium, order: int = DEFAULT_ORDER, kind: str = DIRECT) -> Eigenfunction:
    """Amplitudes as jets in lam through ``order``.

    Each singular interface solve costs the valuation of its determinant in
    known orders, so the recursion runs at a padded working order.
    """
    if order < 0 or order > MAX_JET_ORDER:
        raise OutOfRangeError(f"jet order must lie in [0, {MAX_JET_ORDER}], got {order}")
    work = order + 2 * medium.n_interfaces
    while True:
        A, B, reached = _jet_solve(medium, work, kind)
        if reached >= order:
            break
        work += order - reached
    A = tuple(a.truncate(order) for a in A)
    B = tuple(b.truncate(order) for b in B)
    return Eigenfunction(medium, kind, A, B)


def eigen_matrix(medium: LayeredMedium, x, lam, kind: str = DIRECT) -> np.ndarray:
    """phi(x_i, lam_j) as a (len(x), len(lam)) complex matrix."""
    x = np.asarray(x, dtype=float)
    lam = np.asarray(lam, dtype=float)
    s = 1.0 if kind == DIRECT else -1.0
    A, B = amplitudes(medium, lam, kind)
    idx = medium.layer_index(x)
    out = np.zeros((x.size, lam.size), dtype=complex)
    for m, a in enumerate(medium.speeds):
        sel = idx == m
        if not np.any(sel):
            continue
        ph = np.exp(1j * s * np.outer(x[sel], lam) / a)
        out[sel] = A[m][None, :] * ph + B[m][None, :] / ph
    return out


# --------------------------------------------------------------------------
# generalized power functions


@dataclass(frozen=True, eq=False)
class GeneralizedMonomialTable:
    """x_n^k restricted to layer m equals sum_r coeffs[m, k, r] x^r."""

    medium: LayeredMedium
    coeffs: np.ndarray

    @property
    def max_degree(self) -> int:
        return self.coeffs.shape[1] - 1

    def eval(self, k: int, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        idx = self.medium.layer_index(x)
        out = np.zeros(x.shape)
        for m in range(self.coeffs.shape[0]):
            sel = idx == m
            out[sel] = np.polynomial.polynomial.polyval(x[sel], self.coeffs[m, k])
        return out if out.ndim else float(out)

    def layer_poly(self, m: int, k: int) -> np.ndarray:
        return self.coeffs[m, k]


def generalized_monomials(medium: LayeredMedium, K: int, imag_tol: float = 1e-12) -> GeneralizedMonomialTable:
    """x_n^k = (-i)^k d^k/dlam^k phi(x, lam) at lam = 0, for k = 0..K, as per-layer polynomials."""
    if K < 0 or K > MAX_JET_ORDER:
        raise OutOfRangeError(f"degree must lie in [0, {MAX_JET_ORDER}], got {K}")
    ef = eigenfunction_jet(medium, K, DIRECT)
    nl = len(medium.speeds)
    out = np.zeros((nl, K + 1, K + 1), dtype=complex)
    for m, a in enumerate(medium.speeds):
        al, be = ef.A[m].coeffs, ef.B[m].coeffs
        for k in range(K + 1):
            fk = math.factorial(k) * (-1j) ** k
            for q in range(k + 1):
                out[m, k, q] = fk * (al[k - q] * (1j / a) ** q + be[k - q] * (-1j / a) ** q) / math.factorial(q)
    resid = np.abs(out.imag)
    if np.any(resid > imag_tol * np.maximum(1.0, np.abs(out.real))):
        raise ConsistencyError(f"generalized monomials carry imaginary residue {resid.max():.3e}")
    return GeneralizedMonomialTable(medium, out.real.copy())


# --------------------------------------------------------------------------
# transform pair


def default_weight(medium: LayeredMedium) -> float:
    return 1.0 / (2.0 * math.pi * medium.last_speed)


def transform_analysis(medium: LayeredMedium, field: SampledField, lambda_grid, decay_tol: float = 1e-12) -> Spectrum:
    """u~(lam) = integral of phi*(xi, lam) u(xi) dxi by the trapezoid rule on the field grid."""
    lam = np.asarray(lambda_grid, dtype=float)
    x = field.x
    w = np.full(field.n, field.dx)
    w[0] = w[-1] = 0.5 * field.dx
    Phi = eigen_matrix(medium, x, lam, CONJUGATE)
    vals = (field.values * w) @ Phi
    meta = {}
    if not field.decays(decay_tol):
        meta["warning"] = "field does not decay at the grid ends; truncation error likely"
    return Spectrum(lam, vals, meta)


def transform_synthesis(medium: LayeredMedium, spectrum: Spectrum, x_grid, weight: float | None = None) -> SampledField:
    """f(x) = weight * integral of phi(x, lam) u~(lam) dlam; real part returned."""
    if weight is None:
        weight = default_weight(medium)
    x = np.asarray(x_grid, dtype=float)
    wl = trapezoid_weights(spectrum.lam)
    Phi = eigen_matrix(medium, x, spectrum.lam, DIRECT)
    vals = weight * (Phi @ (wl * spectrum.values))
    dx = float(x[1] - x[0])
    return SampledField(float(x[0]), dx, vals.real, meta={"max_imag": float(np.max(np.abs(vals.imag)))})


def completeness_defect(
    medium: LayeredMedium,
    epsilon: float,
    x_grid,
    weight: float | None = None,
    window_sigmas: float = 10.0,
    tol: float = 1e-3,
) -> dict:
    """Diagnose how far weight * int phi(x,lam) exp(-eps lam^2) phi*(xi,lam) dlam is from delta(x - xi).

    For each row x the kernel is integrated over xi inside a window around
    the diagonal ("diagonal mass") and |K| over everything else ("ghost
    mass"), split by the layer of xi.  The report flags a mismatch when any
    diagonal mass is off 1 or any ghost exceeds ``tol``.
    """
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    if weight is None:
        weight = default_weight(medium)
    x = np.atleast_1d(np.asarray(x_grid, dtype=float))
    sp = np.asarray(medium.speeds)
    amin, amax = float(sp.min()), float(sp.max())
    ratio = amax / amin
    R = 1.2 * float(np.max(np.abs(x))) * ratio + 1.0
    cutoff = math.sqrt(40.0 / epsilon)
    dlam = 2.0 * math.pi / (4.0 * R / amin)
    lam = np.linspace(-cutoff, cutoff, 2 * int(math.ceil(cutoff / dlam)) + 1)
    wl = trapezoid_weights(lam) * np.exp(-epsilon * lam**2)
    sigma = amin * math.sqrt(2.0 * epsilon)
    dxi = sigma / 8.0
    xi = np.arange(-R, R + dxi / 2, dxi)
    win = window_sigmas * amax * math.sqrt(2.0 * epsilon)

    rows_phi = eigen_matrix(medium, x, lam, DIRECT) * wl[None, :] * weight
    K = np.zeros((x.size, xi.size))
    for start in range(0, xi.size, 512):
        sl = slice(start, start + 512)
        K[:, sl] = (rows_phi @ eigen_matrix(medium, xi[sl], lam, CONJUGATE).T).real

    wxi = trapezoid_weights(xi)
    xi_layer = medium.layer_index(xi)
    nl = len(medium.speeds)
    rows = []
    pair_ghost = np.zeros((nl, nl))
    for i, xv in enumerate(x):
        diag = np.abs(xi - xv) <= win
        mass = float(np.sum(K[i, diag] * wxi[diag]))
        mx = int(medium.layer_index(xv))
        ghosts = []
        for m in range(nl):
            sel = (~diag) & (xi_layer == m)
            g = float(np.sum(np.abs(K[i, sel]) * wxi[sel]))
            ghosts.append(g)
            pair_ghost[mx, m] = max(pair_ghost[mx, m], g)
        rows.append({"x": float(xv), "layer": mx + 1, "diagonal_mass": mass, "ghost_mass": ghosts})

    layer_mass = {}
    for m in range(nl):
        vals = [r["diagonal_mass"] for r in rows if r["layer"] == m + 1]
        if vals:
            layer_mass[m + 1] = float(np.mean(vals))
    max_dev = max(abs(r["diagonal_mass"] - 1.0) for r in rows)
    max_ghost = float(pair_ghost.max())
    return {
        "epsilon": epsilon,
        "weight": weight,
        "rows": rows,
        "layer_diagonal_mass": layer_mass,
        "pair_ghost_mass": pair_ghost.tolist(),
        "max_diagonal_deviation": float(max_dev),
        "max_ghost_mass": max_ghost,
        "mismatch": bool(max_dev > tol or max_ghost > tol),
    }
