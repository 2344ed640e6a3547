"""Generalized Hermite bases H_{jn} on a layered axis.

For an evolution kernel with spectral multiplier G(lam),

    H_{jn}(x) = (-i)^j d^j/dlam^j [G(lam) phi(x, lam)] at lam = 0
              = sum_k c_{j,k} x_n^{j-2k},

with G = exp(lam^2 tau) (classical), E_{alpha,1}(lam^2 tau^alpha)
(fractal) or cos(lam tau) (cos-kernel, whose basis sums to the d'Alembert
closed form).  Bases are stored as per-layer polynomial coefficient tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, OutOfRangeError
from .media import DIRECT, LayeredMedium, eigenfunction_jet, generalized_monomials
from .special import FractalOrder, _hermite_fn_poly, mittag_leffler

MAX_BASIS_INDEX = 48

CLASSICAL = "classical"
FRACTAL = "fractal"
COS_KERNEL = "cos-kernel"


@dataclass(frozen=True)
class EvolutionK:
    kind: str = CLASSICAL
    tau: float = 1.0
    alpha: float = 1.0

    def __post_init__(self):
        if self.kind not in (CLASSICAL, FRACTAL, COS_KERNEL):
            raise DomainError(f"unknown kernel kind {self.kind!r}")
        if not self.tau > 0:
            raise DomainError(f"tau must be positive, got {self.tau}")
        FractalOrder(self.alpha)
        if self.kind == CLASSICAL and self.alpha != 1.0:
            raise DomainError("the classical kernel has alpha = 1; use kind='fractal'")

    @classmethod
    def classical(cls, tau):
        return cls(CLASSICAL, tau, 1.0)

    @classmethod
    def fractal(cls, alpha, tau):
        return cls(FRACTAL, tau, alpha)

    @classmethod
    def cos_kernel(cls, tau):
        return cls(COS_KERNEL, tau, 2.0)

    @property
    def beta(self) -> float:
        return self.alpha / 2.0

    def generating_multiplier(self, mu):
        """G(-i mu): the factor multiplying phi(x, -i mu) in the generating function."""
        mu = np.asarray(mu, dtype=float)
        if self.kind == COS_KERNEL:
            return np.cosh(mu * self.tau)
        if self.alpha == 1.0:
            return np.exp(-mu * mu * self.tau)
        return mittag_leffler(self.alpha, -mu * mu * self.tau**self.alpha)

    def coefficients(self, J: int) -> np.ndarray:
        """c[j, k] for j <= J, k <= j // 2 (zero-padded)."""
        c = np.zeros((J + 1, J // 2 + 1))
        for j in range(J + 1):
            for k in range(j // 2 + 1):
                ratio = math.factorial(j) // math.factorial(j - 2 * k)
                if self.kind == COS_KERNEL:
                    c[j, k] = self.tau ** (2 * k) * ratio / math.factorial(2 * k)
                else:
                    g = math.factorial(k) if self.alpha == 1.0 else math.gamma(k * self.alpha + 1.0)
                    c[j, k] = (-1) ** k * self.tau ** (self.alpha * k) * ratio / g
        return c


@dataclass(frozen=True, eq=False)
class GenHermiteBasis:
    """H_{jn} restricted to layer m equals sum_r poly[m, j, r] x^r."""

    medium: LayeredMedium
    kernel: EvolutionK
    coeffs: np.ndarray  # c[j, k]
    poly: np.ndarray
    monomials: object

    @property
    def J(self) -> int:
        return self.coeffs.shape[0] - 1


def gen_hermite_basis(medium: LayeredMedium, kernel: EvolutionK, J: int) -> GenHermiteBasis:
    if J < 0 or J > MAX_BASIS_INDEX:
        raise OutOfRangeError(f"basis index must lie in [0, {MAX_BASIS_INDEX}], got {J}")
    table = generalized_monomials(medium, J)
    c = kernel.coefficients(J)
    nl = len(medium.speeds)
    poly = np.zeros((nl, J + 1, J + 1))
    for j in range(J + 1):
        for k in range(j // 2 + 1):
            poly[:, j, :] += c[j, k] * table.coeffs[:, j - 2 * k, :]
    return GenHermiteBasis(medium, kernel, c, poly, table)


def gen_hermite_eval(basis: GenHermiteBasis, j: int, x):
    """H_{jn}(x); at a breakpoint the left layer's polynomial is used."""
    if j < 0 or j > basis.J:
        raise OutOfRangeError(f"index {j} outside basis range 0..{basis.J}")
    x = np.asarray(x, dtype=float)
    idx = basis.medium.layer_index(x)
    out = np.zeros(x.shape)
    for m in range(basis.poly.shape[0]):
        sel = idx == m
        out[sel] = np.polynomial.polynomial.polyval(x[sel], basis.poly[m, j])
    return out if out.ndim else float(out)


def basis_matrix(basis: GenHermiteBasis, x) -> np.ndarray:
    """H_{jn}(x_i) for all j as an (len(x), J+1) array."""
    x = np.asarray(x, dtype=float)
    return np.stack([gen_hermite_eval(basis, j, x) for j in range(basis.J + 1)], axis=-1)


def generating_check(basis: GenHermiteBasis, mu: float, x: float, amp_order: int | None = None) -> float:
    """|sum_{j<=J} H_{jn}(x) mu^j / j! - G(-i mu) phi(x, -i mu)|.

    phi(x, -i mu) is assembled from the jet amplitudes evaluated at -i mu and
    exact exponentials, independently of the coefficient tables.
    """
    if abs(mu) > 0.5:
        raise DomainError("generating_check is meant for |mu| <= 0.5")
    J = basis.J
    series = sum(gen_hermite_eval(basis, j, x) * mu**j / math.factorial(j) for j in range(J + 1))
    ef = eigenfunction_jet(basis.medium, amp_order or J, DIRECT)
    lam = -1j * mu
    m = int(basis.medium.layer_index(x))
    a = basis.medium.speeds[m]
    phi = ef.A[m](lam) * np.exp(1j * lam * x / a) + ef.B[m](lam) * np.exp(-1j * lam * x / a)
    target = basis.kernel.generating_multiplier(mu) * phi
    return float(abs(series - target))


def biorthogonality_matrix(j_max: int, nodes: int = 128) -> np.ndarray:
    """Gram matrix of orthonormal Hermite functions by Gauss-Hermite quadrature."""
    if j_max < 0 or j_max > 12:
        raise OutOfRangeError("j_max must lie in [0, 12]")
    t, w = np.polynomial.hermite.hermgauss(nodes)
    # h_j h_k = p_j p_k exp(-x^2): fold the Gaussian into the quadrature weight
    P = np.stack([_hermite_fn_poly(j, t) for j in range(j_max + 1)])
    return (P * w) @ P.T
