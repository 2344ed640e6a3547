"""Acceptance checks A1-A11 as plain functions returning ``CheckResult``.

Shared by the pytest acceptance suite and the ``selftest`` CLI subcommand.
Every check builds its own oracle (forward solver, closed form or
independent construction) and compares at the stated tolerance.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .dirichlet import HalfPlaneTrace, dirichlet_invert_continuation, dirichlet_invert_series, dirichlet_invert_spectral
from .fields import SampledField, rel_l2
from .forward import halfplane_forward, heat_forward_homogeneous, piecewise_heat_fd, wave_forward_family
from .genfun import EvolutionK, basis_matrix, biorthogonality_matrix, gen_hermite_basis, gen_hermite_eval, generating_check
from .media import completeness_defect, generalized_monomials, homogeneous, ideal_contact
from .retro import SPECTRAL, ReconstructionConfig, add_noise, dalembert_invert, reconstruct_series, spectral_invert
from .special import fractal_hermite, hermite_poly, mittag_leffler

P = np.polynomial.polynomial


@dataclass
class CheckResult:
    name: str
    passed: bool
    value: float
    tol: float
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: value={self.value:.3e} tol={self.tol:.1e} ({self.seconds:.2f}s)"


def _two_layer():
    return ideal_contact((1.0, 2.0), (0.0,))


def _a1_setup():
    f = SampledField.on_grid(-8.0, 8.0, 2048, lambda x: np.exp(-x * x))
    u = heat_forward_homogeneous(f, 0.1)
    return f, u


def check_a1() -> CheckResult:
    f, u = _a1_setup()
    cfg = ReconstructionConfig(EvolutionK.classical(0.1), order=24, fit_window=3.0)
    rec = reconstruct_series(u, homogeneous(1.0), cfg)
    w = f.window(1.0)
    err = rel_l2(rec.values[w], f.values[w])
    return CheckResult("A1 series backward heat", err <= 1e-4, err, 1e-4, {"condition": rec.meta["condition"]})


def check_a2() -> CheckResult:
    f, u = _a1_setup()
    med = homogeneous(1.0)
    k = EvolutionK.classical(0.1)
    w = f.window(1.0)
    clean = rel_l2(spectral_invert(u, med, k, 12.0).values[w], f.values[w])
    noisy = add_noise(u, 1e-3, 42)
    sweep = {c: rel_l2(spectral_invert(noisy, med, k, float(c)).values[w], f.values[w]) for c in (2, 4, 6, 8, 10, 12)}
    best = min(sweep.values())
    ratio = sweep[12] / best
    ok = clean <= 1e-8 and ratio >= 2.0
    return CheckResult(
        "A2 spectral inversion", ok, clean, 1e-8, {"noisy_errors": sweep, "ratio_to_best": ratio, "method": SPECTRAL}
    )


def _layered_grid():
    return SampledField.on_grid(-16.0, 16.0, 2048, lambda x: np.zeros_like(x))


def check_a3() -> CheckResult:
    med = _two_layer()
    tau = 0.1
    basis = gen_hermite_basis(med, EvolutionK.classical(tau), 4)
    g = _layered_grid()
    w = g.window(4.0)
    errs = []
    for j in range(5):
        h = g.with_values(gen_hermite_eval(basis, j, g.x))
        ev = piecewise_heat_fd(med, h, tau, steps=200)
        target = basis.monomials.eval(j, g.x)
        errs.append(rel_l2(ev.values[w], target[w]))
    worst = max(errs)
    return CheckResult("A3 layered heat-polynomial identity", worst <= 1e-3, worst, 1e-3, {"per_j": errs})


def check_a4() -> CheckResult:
    med = _two_layer()
    tau = 0.1
    c = np.array([1.0, 0.5, -0.3, 0.2])
    table = generalized_monomials(med, 3)
    g = _layered_grid()
    u_vals = sum(c[j] * table.eval(j, g.x) / math.factorial(j) for j in range(4))
    u = g.with_values(u_vals, time_tag=tau)
    cfg = ReconstructionConfig(EvolutionK.classical(tau), order=3, fit_window=3.0)
    rec = reconstruct_series(u, med, cfg)
    ev = piecewise_heat_fd(med, rec, tau, steps=200)
    w = g.window(4.0)
    err = rel_l2(ev.values[w], u_vals[w])
    coeff_err = float(np.max(np.abs(np.array(rec.meta["coefficients"]) - c)))
    return CheckResult("A4 layered polynomial round trip", err <= 1e-3, err, 1e-3, {"coefficient_error": coeff_err})


def check_a5() -> CheckResult:
    tau = 0.5
    x = -8.0 + np.arange(2048) / 128.0

    def g(s):
        return np.exp(-s * s)

    u = wave_forward_family(g, tau, tau, x)
    f = dalembert_invert(u, tau)
    err = float(np.max(np.abs(f.values - (g(f.x + tau) + g(f.x - tau)))))
    return CheckResult("A5 d'Alembert closed form", err <= 1e-12, err, 1e-12)


def check_a6() -> CheckResult:
    kernels = [EvolutionK.classical(0.5)] + [EvolutionK.fractal(a, 0.5) for a in (0.5, 1.0, 2.0)]
    media = {"homogeneous": homogeneous(1.0), "two-layer": _two_layer()}
    xs = (-1.3, -0.4, 0.2, 0.9)
    mus = (-0.5, -0.2, 0.3, 0.5)
    worst_gen = 0.0
    for k in kernels:
        for med in media.values():
            basis = gen_hermite_basis(med, k, 24)
            for x in xs:
                for mu in mus:
                    worst_gen = max(worst_gen, generating_check(basis, mu, x))
    worst_h = 0.0
    x = np.linspace(-3, 3, 41)
    for tau in (0.1, 1.0):
        basis = gen_hermite_basis(homogeneous(1.0), EvolutionK.classical(tau), 12)
        H = basis_matrix(basis, x)
        for j in range(13):
            ref = tau ** (j / 2) * hermite_poly(j, x / (2 * math.sqrt(tau)))
            worst_h = max(worst_h, float(np.max(np.abs(H[:, j] - ref) / np.maximum(1.0, np.abs(ref)))))
    value = max(worst_gen, worst_h)
    return CheckResult(
        "A6 generating-function identities", value <= 1e-10, value, 1e-10, {"generating": worst_gen, "hermite": worst_h}
    )


def check_a7() -> CheckResult:
    G = biorthogonality_matrix(10)
    dev = float(np.max(np.abs(G - np.eye(11))))
    return CheckResult("A7 Hermite biorthogonality", dev <= 1e-8, dev, 1e-8)


def check_a8() -> CheckResult:
    med = _two_layer()
    K = 12
    table = generalized_monomials(med, K)
    worst = 0.0
    for m, a in enumerate(med.speeds):
        for k in range(2, K + 1):
            lhs = a * a * P.polyder(table.layer_poly(m, k), 2)
            rhs = k * (k - 1) * table.layer_poly(m, k - 2)[: lhs.size]
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    l = med.breakpoints[0]
    aL, aR = med.speeds
    coupling = 0.0
    for k in range(K + 1):
        left, right = table.layer_poly(0, k), table.layer_poly(1, k)
        coupling = max(coupling, abs(P.polyval(l, left) - P.polyval(l, right)))
        flux = aL**2 * P.polyval(l, P.polyder(left)) - aR**2 * P.polyval(l, P.polyder(right))
        coupling = max(coupling, abs(flux))
    ok = worst <= 1e-12 and coupling <= 1e-10
    return CheckResult("A8 second-derivative identity", ok, worst, 1e-12, {"coupling_residual": coupling})


def check_a9() -> CheckResult:
    z = np.linspace(-5, 5, 201)
    e1 = float(np.max(np.abs(mittag_leffler(1.0, z) - np.exp(z)) / np.maximum(1.0, np.exp(z))))
    t = np.linspace(-6, 6, 241)
    e2 = float(np.max(np.abs(mittag_leffler(2.0, -t * t) - np.cos(t))))
    x = np.linspace(-3, 3, 61)
    e3 = 0.0
    for j in range(13):
        ref = hermite_poly(j, x / 2)
        e3 = max(e3, float(np.max(np.abs(fractal_hermite(1.0, j, x) - ref) / np.maximum(1.0, np.abs(ref)))))
    ok = e1 <= 1e-12 and e2 <= 1e-10 and e3 <= 1e-10
    return CheckResult("A9 special functions", ok, max(e1, e2, e3), 1e-10, {"exp": e1, "cos": e2, "fractal_hermite": e3})


def check_a10() -> CheckResult:
    l = 1.0
    f = SampledField.on_grid(-8 * math.pi, 8 * math.pi, 1024, np.cos)
    trace = halfplane_forward(f, l)
    rec = dirichlet_invert_spectral(HalfPlaneTrace(l, trace), 8.0)
    rt = float(np.max(np.abs(rec.values - f.values)))
    y = np.linspace(-3, 3, 61)
    exact = l * l - y * y
    series = dirichlet_invert_series([0.0, 0.0, -2.0], l)(y)
    cont = dirichlet_invert_continuation(lambda xx, yy: (xx - l) ** 2 - yy**2, l)(y)
    e_s = float(np.max(np.abs(series - exact)))
    e_c = float(np.max(np.abs(cont - exact)))
    ok = rt <= 1e-6 and e_s <= 1e-12 and e_c <= 1e-12
    return CheckResult("A10 inverse Dirichlet", ok, rt, 1e-6, {"series_example": e_s, "continuation_example": e_c})


def check_a11() -> CheckResult:
    x = np.array([-1.0, -0.5, 0.5, 1.0])
    hom = completeness_defect(homogeneous(1.0), 1e-3, x)
    lay = completeness_defect(_two_layer(), 1e-3, x)
    hom_ok = hom["max_diagonal_deviation"] <= 1e-3 and hom["max_ghost_mass"] <= 1e-3 and not hom["mismatch"]
    numbers = [r["diagonal_mass"] for r in lay["rows"]] + [g for r in lay["rows"] for g in r["ghost_mass"]]
    lay_ok = bool(np.all(np.isfinite(numbers))) and lay["mismatch"]
    return CheckResult(
        "A11 completeness diagnostics",
        hom_ok and lay_ok,
        hom["max_diagonal_deviation"],
        1e-3,
        {"homogeneous_ghost": hom["max_ghost_mass"], "layered_mass": lay["layer_diagonal_mass"], "layered_mismatch": lay["mismatch"]},
    )


CHECKS = {
    "A1": check_a1,
    "A2": check_a2,
    "A3": check_a3,
    "A4": check_a4,
    "A5": check_a5,
    "A6": check_a6,
    "A7": check_a7,
    "A8": check_a8,
    "A9": check_a9,
    "A10": check_a10,
    "A11": check_a11,
}


def run_check(key: str) -> CheckResult:
    t0 = time.perf_counter()
    res = CHECKS[key]()
    res.seconds = time.perf_counter() - t0
    return res


def run_all(keys=None) -> list[CheckResult]:
    return [run_check(k) for k in (keys or CHECKS)]
