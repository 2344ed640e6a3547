"""Scenario configs and the end-to-end runner behind the command line.

A scenario is one JSON document with the blocks ``medium``, ``problem``,
``initial``, ``grid``, ``noise``, ``method``, ``output`` and optionally
``diagnostics``.  ``run_scenario`` builds the medium, samples the initial
field, forward-solves, adds noise, inverts and collects metrics.
"""

from __future__ import annotations

import copy
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .dirichlet import (
    HalfPlaneTrace,
    dirichlet_invert_continuation,
    dirichlet_invert_series,
    dirichlet_invert_spectral,
    mirror_average,
    trace_derivatives,
)
from .errors import ConfigError
from .fields import SampledField, rel_l2
from .forward import halfplane_forward, heat_forward_homogeneous, influence_fd_discrepancy, piecewise_heat_fd, wave_forward_family
from .genfun import EvolutionK, basis_matrix, gen_hermite_basis
from .media import LayeredMedium, build_medium, completeness_defect, generalized_monomials
from .retro import ReconstructionConfig, add_noise, reconstruct

VERSION = "0.1.0"

PROBLEM_KINDS = ("heat", "fractal", "wave", "dirichlet")
FAMILIES = ("gaussian", "cos", "zero", "example2")
METHODS = {
    "heat": ("series", "spectral"),
    "fractal": ("series", "spectral"),
    "wave": ("dalembert", "series"),
    "dirichlet": ("spectral", "series", "continuation"),
}
BLOCKS = ("medium", "problem", "initial", "grid", "noise", "method", "output", "diagnostics", "input")


def _block(raw: dict, name: str, allowed: tuple) -> dict:
    blk = raw.get(name, {})
    if not isinstance(blk, dict):
        raise ConfigError(f"block {name!r} must be an object")
    extra = set(blk) - set(allowed)
    if extra:
        raise ConfigError(f"unknown keys in {name!r}: {sorted(extra)}")
    return blk


def _num(blk: dict, key: str, default, block: str, cast=float):
    v = blk.get(key, default)
    try:
        out = cast(v)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{block}.{key} must be a number, got {v!r}") from exc
    if isinstance(out, float) and not math.isfinite(out):
        raise ConfigError(f"{block}.{key} must be finite")
    return out


@dataclass(frozen=True)
class MediumSpec:
    breakpoints: tuple = ()
    speeds: tuple = (1.0,)
    couplings: tuple = ()


@dataclass(frozen=True)
class ProblemSpec:
    kind: str = "heat"
    alpha: float = 1.0
    tau: float = 0.1
    depth: float = 1.0
    steps: int = 200


@dataclass(frozen=True)
class InitialSpec:
    family: str | None = "gaussian"
    params: tuple = ()  # sorted (key, value) pairs
    coefficients: tuple | None = None

    def param(self, key, default):
        return dict(self.params).get(key, default)


@dataclass(frozen=True)
class GridSpec:
    xmin: float = -8.0
    xmax: float = 8.0
    n: int = 2048
    metric_window: float | None = None

    @property
    def window(self) -> float:
        return self.metric_window if self.metric_window is not None else 0.25 * (self.xmax - self.xmin)

    @property
    def center(self) -> float:
        return 0.5 * (self.xmin + self.xmax)


@dataclass(frozen=True)
class NoiseSpec:
    sigma: float = 0.0
    seed: int = 0


@dataclass(frozen=True)
class MethodSpec:
    kind: str = "series"
    order: int = 24
    cutoff: float = 12.0
    coeff_method: str = "polyfit"
    fit_window: float = 3.0


@dataclass(frozen=True)
class OutputSpec:
    dir: str = "out"
    result_csv: str = "result.csv"
    report_json: str = "report.json"
    basis_csv: str = "basis.csv"
    monomials_csv: str = "monomials.csv"


@dataclass(frozen=True)
class DiagnosticsSpec:
    completeness: bool = False
    epsilon: float = 1e-3
    points: tuple = (-1.0, -0.5, 0.5, 1.0)
    influence: bool = False


@dataclass(frozen=True)
class ScenarioConfig:
    medium: MediumSpec = MediumSpec()
    problem: ProblemSpec = ProblemSpec()
    initial: InitialSpec = InitialSpec()
    grid: GridSpec = GridSpec()
    noise: NoiseSpec = NoiseSpec()
    method: MethodSpec = MethodSpec()
    output: OutputSpec = OutputSpec()
    diagnostics: DiagnosticsSpec = DiagnosticsSpec()
    input_path: str | None = None
    raw: dict = field(default_factory=dict, compare=False, hash=False)

    @classmethod
    def from_dict(cls, raw: dict) -> "ScenarioConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
        extra = set(raw) - set(BLOCKS)
        if extra:
            raise ConfigError(f"unknown config blocks: {sorted(extra)}")

        m = _block(raw, "medium", ("breakpoints", "speeds", "couplings"))
        bp = tuple(float(v) for v in m.get("breakpoints", ()))
        medium = MediumSpec(
            bp,
            tuple(float(v) for v in m.get("speeds", (1.0,))),
            tuple(_freeze(c) for c in m.get("couplings", ("ideal",) * len(bp))),
        )

        p = _block(raw, "problem", ("kind", "alpha", "tau", "depth", "steps"))
        problem = ProblemSpec(
            p.get("kind", "heat"),
            _num(p, "alpha", 1.0, "problem"),
            _num(p, "tau", 0.1, "problem"),
            _num(p, "depth", 1.0, "problem"),
            _num(p, "steps", 200, "problem", int),
        )
        if problem.kind not in PROBLEM_KINDS:
            raise ConfigError(f"problem.kind must be one of {PROBLEM_KINDS}, got {problem.kind!r}")
        if not problem.tau > 0 or not problem.depth > 0 or problem.steps < 1:
            raise ConfigError("problem.tau and problem.depth must be positive and steps >= 1")
        if not 0 < problem.alpha <= 2:
            raise ConfigError("problem.alpha must lie in (0, 2]")

        i = _block(raw, "initial", ("family", "params", "coefficients"))
        coeffs = i.get("coefficients")
        family = i.get("family", None if coeffs is not None else "gaussian")
        if (family is None) == (coeffs is None):
            raise ConfigError("initial block needs exactly one of 'family' or 'coefficients'")
        if family is not None and family not in FAMILIES:
            raise ConfigError(f"unknown initial family {family!r}; known: {FAMILIES}")
        params = i.get("params", {})
        if not isinstance(params, dict):
            raise ConfigError("initial.params must be an object")
        initial = InitialSpec(
            family,
            tuple(sorted((k, float(v)) for k, v in params.items())),
            None if coeffs is None else tuple(float(c) for c in coeffs),
        )

        g = _block(raw, "grid", ("xmin", "xmax", "n", "metric_window"))
        mw = g.get("metric_window")
        grid = GridSpec(
            _num(g, "xmin", -8.0, "grid"),
            _num(g, "xmax", 8.0, "grid"),
            _num(g, "n", 2048, "grid", int),
            None if mw is None else float(mw),
        )
        if not grid.xmax > grid.xmin:
            raise ConfigError("grid.xmax must exceed grid.xmin")
        if grid.n < 16 or grid.n & (grid.n - 1):
            raise ConfigError(f"grid.n must be a power of two >= 16, got {grid.n}")

        nz = _block(raw, "noise", ("sigma", "seed"))
        noise = NoiseSpec(_num(nz, "sigma", 0.0, "noise"), _num(nz, "seed", 0, "noise", int))
        if noise.sigma < 0:
            raise ConfigError("noise.sigma must be non-negative")

        me = _block(raw, "method", ("kind", "order", "cutoff", "coeff_method", "fit_window"))
        method = MethodSpec(
            me.get("kind", METHODS[problem.kind][0]),
            _num(me, "order", 24, "method", int),
            _num(me, "cutoff", 12.0, "method"),
            me.get("coeff_method", "polyfit"),
            _num(me, "fit_window", 3.0, "method"),
        )
        if method.kind not in METHODS[problem.kind]:
            raise ConfigError(f"method {method.kind!r} does not apply to {problem.kind!r}; use one of {METHODS[problem.kind]}")

        o = _block(raw, "output", ("dir", "result_csv", "report_json", "basis_csv", "monomials_csv"))
        output = OutputSpec(**{k: str(v) for k, v in o.items()})

        d = _block(raw, "diagnostics", ("completeness", "epsilon", "points", "influence"))
        diagnostics = DiagnosticsSpec(
            bool(d.get("completeness", False)),
            _num(d, "epsilon", 1e-3, "diagnostics"),
            tuple(float(v) for v in d.get("points", (-1.0, -0.5, 0.5, 1.0))),
            bool(d.get("influence", False)),
        )

        inp = _block(raw, "input", ("path",))
        cfg = cls(medium, problem, initial, grid, noise, method, output, diagnostics, inp.get("path"), copy.deepcopy(raw))
        cfg._check_consistency()
        return cfg

    def _check_consistency(self):
        for l in self.medium.breakpoints:
            if not self.grid.xmin < l < self.grid.xmax:
                raise ConfigError(f"breakpoint {l} lies outside the grid")
        kind = self.problem.kind
        layered = bool(self.medium.breakpoints)
        if kind in ("fractal", "wave", "dirichlet") and layered:
            raise ConfigError(f"problem kind {kind!r} is supported on the homogeneous axis only")
        if self.initial.family == "example2" and self.method.kind == "spectral":
            raise ConfigError("example2 data grow like y^2; use the series or continuation method")
        if self.initial.coefficients is not None and kind != "heat":
            raise ConfigError("explicit coefficient lists are supported for the heat kind only")
        if self.initial.family == "example2" and kind != "dirichlet":
            raise ConfigError("family 'example2' belongs to the dirichlet kind")

    def with_seed(self, seed: int) -> "ScenarioConfig":
        from dataclasses import replace

        return replace(self, noise=replace(self.noise, seed=int(seed)))

    def with_output_dir(self, path: str) -> "ScenarioConfig":
        from dataclasses import replace

        return replace(self, output=replace(self.output, dir=str(path)))


def _freeze(c):
    if isinstance(c, dict):
        return tuple(sorted((k, tuple(tuple(r) for r in v)) for k, v in c.items()))
    return c


def _thaw(c):
    if isinstance(c, tuple):
        return {k: v for k, v in c}
    return c


def make_medium(cfg: ScenarioConfig) -> LayeredMedium:
    from .errors import DomainError

    couplings = [_thaw(c) for c in cfg.medium.couplings]
    try:
        return build_medium(cfg.medium.breakpoints, cfg.medium.speeds, couplings)
    except (DomainError, KeyError, ValueError) as exc:
        raise ConfigError(f"invalid medium: {exc}") from exc


def make_kernel(cfg: ScenarioConfig) -> EvolutionK:
    p = cfg.problem
    if p.kind == "heat":
        return EvolutionK.classical(p.tau)
    if p.kind == "fractal":
        return EvolutionK.fractal(p.alpha, p.tau)
    if p.kind == "wave":
        return EvolutionK.cos_kernel(p.tau)
    return EvolutionK.classical(p.tau)


def family_fn(initial: InitialSpec, depth: float = 1.0):
    """Callable f(x) for a named family."""
    fam = initial.family
    if fam == "gaussian":
        amp, c, w = initial.param("amplitude", 1.0), initial.param("center", 0.0), initial.param("width", 1.0)
        return lambda x: amp * np.exp(-(((x - c) / w) ** 2))
    if fam == "cos":
        amp, k = initial.param("amplitude", 1.0), initial.param("k", 1.0)
        return lambda x: amp * np.cos(k * x)
    if fam == "zero":
        return lambda x: np.zeros_like(np.asarray(x, dtype=float))
    if fam == "example2":
        return lambda y: depth * depth - np.asarray(y, dtype=float) ** 2
    raise ConfigError(f"unknown family {fam!r}")


def harmonic_extension(initial: InitialSpec, depth: float):
    """u(x, y) in closed form for families that have one (None otherwise); y may be complex."""
    fam = initial.family
    if fam == "zero":
        return lambda x, y: np.zeros_like(y)
    if fam == "cos":
        amp, k = initial.param("amplitude", 1.0), initial.param("k", 1.0)
        return lambda x, y: amp * np.exp(-abs(k) * x) * np.cos(k * y)
    if fam == "example2":
        return lambda x, y: (x - depth) ** 2 - y**2
    return None


@dataclass
class RunReport:
    command: str
    metrics: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    version: str = VERSION
    flags: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "version": self.version,
            "metrics": self.metrics,
            "diagnostics": self.diagnostics,
            "timings": self.timings,
            "flags": self.flags,
            "config": self.config,
        }


@dataclass
class RunResult:
    report: RunReport
    x: np.ndarray
    f_true: np.ndarray | None = None
    f_rec: np.ndarray | None = None
    u_tau: np.ndarray | None = None


def _metrics(x, approx, exact, window, center) -> dict:
    out = {}
    if approx is None or exact is None:
        return out
    ok = np.isfinite(approx) & np.isfinite(exact)
    out["rel_l2"] = rel_l2(approx[ok], exact[ok])
    out["max_abs"] = float(np.max(np.abs(approx[ok] - exact[ok])))
    w = ok & (np.abs(x - center) <= window + 1e-12)
    if np.any(w):
        out["rel_l2_interior"] = rel_l2(approx[w], exact[w])
        out["max_abs_interior"] = float(np.max(np.abs(approx[w] - exact[w])))
    out["interior_window"] = window
    return out


def sanitize_numbers(d, flags, path=""):
    # replace non-finite numbers by None and record where
    if isinstance(d, dict):
        return {k: sanitize_numbers(v, flags, f"{path}.{k}" if path else str(k)) for k, v in d.items()}
    if isinstance(d, (list, tuple)):
        return [sanitize_numbers(v, flags, f"{path}[{i}]") for i, v in enumerate(d)]
    if isinstance(d, (float, np.floating)):
        if not math.isfinite(float(d)):
            flags.append(f"non-finite value at {path}")
            return None
        return float(d)
    if isinstance(d, np.integer):
        return int(d)
    if isinstance(d, np.bool_):
        return bool(d)
    return d


class _Clock:
    def __init__(self):
        self.t = {}

    def __call__(self, name):
        clock = self

        class _Ctx:
            def __enter__(self):
                self.t0 = time.perf_counter()

            def __exit__(self, *exc):
                clock.t[name] = clock.t.get(name, 0.0) + time.perf_counter() - self.t0

        return _Ctx()


def grid_field(cfg: ScenarioConfig, values=None) -> SampledField:
    g = cfg.grid
    f = SampledField.on_grid(g.xmin, g.xmax, g.n, lambda x: np.zeros_like(x))
    return f if values is None else f.with_values(values)


def _check_breakpoints_on_grid(cfg: ScenarioConfig, f: SampledField):
    for l in cfg.medium.breakpoints:
        i = round((l - f.x0) / f.dx)
        if abs(f.x0 + i * f.dx - l) > 1e-9 * f.dx:
            raise ConfigError(f"breakpoint {l} is not a grid point; choose xmin, xmax, n so that it is")


def initial_and_forward(cfg: ScenarioConfig, medium: LayeredMedium, clock=None):
    """Return (f_true field or None, u_tau field, diagnostics)."""
    clock = clock or _Clock()
    p = cfg.problem
    base = grid_field(cfg)
    diag = {}
    if medium.breakpoints:
        _check_breakpoints_on_grid(cfg, base)
    with clock("initial"):
        if cfg.initial.coefficients is not None:
            c = np.asarray(cfg.initial.coefficients)
            J = c.size - 1
            basis = gen_hermite_basis(medium, make_kernel(cfg), J)
            fact = np.array([math.factorial(j) for j in range(J + 1)], dtype=float)
            f_vals = basis_matrix(basis, base.x) @ (c / fact)
        else:
            f_vals = family_fn(cfg.initial, p.depth)(base.x)
        f = base.with_values(f_vals)
    with clock("forward"):
        if p.kind == "heat":
            if cfg.initial.coefficients is not None:
                # exact image under the evolution: sum c_j x_n^j / j!
                table = generalized_monomials(medium, c.size - 1)
                u = sum(c[j] * table.eval(j, base.x) / fact[j] for j in range(c.size))
                u_tau = base.with_values(u, time_tag=p.tau)
                diag["forward"] = "closed-form heat-polynomial image"
            elif medium.homogeneous:
                u_tau = heat_forward_homogeneous(f, p.tau, medium.speeds[0])
                diag["forward"] = "spectral multiplier"
            else:
                u_tau = piecewise_heat_fd(medium, f, p.tau, steps=p.steps)
                diag["forward"] = "finite differences"
        elif p.kind == "fractal":
            u_tau = heat_forward_homogeneous(f, p.tau, medium.speeds[0], p.alpha)
            diag["forward"] = "Mittag-Leffler multiplier"
        elif p.kind == "wave":
            a = medium.speeds[0]
            g = family_fn(cfg.initial)
            u_tau = wave_forward_family(g, p.tau * a, p.tau * a, base.x)
            # the family's state at t = 0 is g(x + a tau) + g(x - a tau)
            f = base.with_values(g(base.x + a * p.tau) + g(base.x - a * p.tau))
            diag["forward"] = "closed-form wave family"
        else:
            ext = harmonic_extension(cfg.initial, p.depth)
            if ext is not None:
                u_tau = base.with_values(np.real(ext(p.depth, base.x)))
                diag["forward"] = "closed-form harmonic extension"
            else:
                u_tau = halfplane_forward(f, p.depth)
                diag["forward"] = "Poisson multiplier"
        if u_tau.meta.get("warning"):
            diag["forward_warning"] = u_tau.meta["warning"]
    return f, u_tau, diag


def invert(cfg: ScenarioConfig, medium: LayeredMedium, u_tau: SampledField, clock=None):
    """Return (f_rec field, diagnostics, reference override or None)."""
    clock = clock or _Clock()
    p, me = cfg.problem, cfg.method
    diag = {"method": me.kind}
    ref = None
    with clock("invert"):
        if p.kind == "dirichlet":
            trace = HalfPlaneTrace(p.depth, u_tau)
            if me.kind == "spectral":
                rec = dirichlet_invert_spectral(trace, me.cutoff)
                diag.update({k: v for k, v in rec.meta.items() if k != "warning"})
            else:
                if me.kind == "series":
                    d = trace_derivatives(trace, me.order, me.fit_window)
                    fn = dirichlet_invert_series(d, p.depth)
                    diag["trace_derivatives"] = d.tolist()
                else:
                    ext = harmonic_extension(cfg.initial, p.depth)
                    if ext is None:
                        raise ConfigError(f"family {cfg.initial.family!r} has no closed-form continuation")
                    fn = dirichlet_invert_continuation(ext, p.depth)
                rec = u_tau.with_values(fn(u_tau.x))
                ref = "mirror_average"
        else:
            rc = ReconstructionConfig(
                make_kernel(cfg), me.kind, me.order, me.cutoff, me.coeff_method, me.fit_window, cfg.grid.center
            )
            rec = reconstruct(u_tau, medium, rc)
            for key in ("condition", "non_convergent", "coefficients", "term_norms", "coeff_method"):
                if key in rec.meta:
                    diag[key] = rec.meta[key]
            for key in ("cutoff", "max_amplification", "formal_paper_mode", "max_imag", "margin", "warning"):
                if key in rec.meta:
                    diag[key] = rec.meta[key]
    return rec, diag, ref


def _align(base: SampledField, part: SampledField) -> np.ndarray:
    """Place ``part`` (a sub-grid of ``base``) on the base grid, NaN elsewhere."""
    out = np.full(base.n, np.nan)
    off = int(round((part.x0 - base.x0) / base.dx))
    out[off : off + part.n] = part.values
    return out


def run_diagnostics(cfg: ScenarioConfig, medium: LayeredMedium) -> dict:
    d = cfg.diagnostics
    out = {}
    rep = completeness_defect(medium, d.epsilon, np.asarray(d.points))
    out["completeness"] = {k: v for k, v in rep.items()}
    if d.influence:
        infl = []
        for xi in d.points:
            infl.append(influence_fd_discrepancy(medium, cfg.problem.tau, xi, cfg.grid.xmin, cfg.grid.xmax, cfg.grid.n))
        out["influence"] = infl
    return out


def run_scenario(cfg: ScenarioConfig, command: str = "roundtrip", u_input: SampledField | None = None) -> RunResult:
    """Full pipeline.  ``command`` selects forward-only, invert-from-input or roundtrip."""
    clock = _Clock()
    with clock("medium"):
        medium = make_medium(cfg)
    report = RunReport(command, config=copy.deepcopy(cfg.raw))
    report.diagnostics["seed"] = cfg.noise.seed
    f_true = None
    if u_input is None:
        f_true, u_clean, fdiag = initial_and_forward(cfg, medium, clock)
        report.diagnostics.update(fdiag)
        with clock("noise"):
            u_tau = add_noise(u_clean, cfg.noise.sigma, cfg.noise.seed)
    else:
        u_tau = u_input
        if cfg.raw.get("initial", {}).get("family") and cfg.problem.kind != "wave":
            f_true = u_input.with_values(family_fn(cfg.initial, cfg.problem.depth)(u_input.x))
    base = u_tau
    result = RunResult(report, base.x, None if f_true is None else f_true.values, None, u_tau.values)
    if command == "forward":
        report.metrics = {"u_tau_max_abs": float(np.max(np.abs(u_tau.values)))}
    else:
        rec, idiag, ref = invert(cfg, medium, u_tau, clock)
        report.diagnostics.update(idiag)
        f_rec = _align(base, rec)
        result.f_rec = f_rec
        if f_true is not None:
            report.metrics = _metrics(base.x, f_rec, f_true.values, cfg.grid.window, cfg.grid.center)
            if ref == "mirror_average" and u_input is None:
                mirror = _mirror_reference(cfg, f_true)
                report.metrics["mirror"] = _metrics(base.x, f_rec, mirror, cfg.grid.window, cfg.grid.center)
    if cfg.diagnostics.completeness or command == "diagnose":
        with clock("diagnostics"):
            report.diagnostics.update(run_diagnostics(cfg, medium))
    report.timings = dict(clock.t)
    flags = []
    report.metrics = sanitize_numbers(report.metrics, flags, "metrics")
    report.diagnostics = sanitize_numbers(report.diagnostics, flags, "diagnostics")
    report.timings = sanitize_numbers(report.timings, flags, "timings")
    report.flags = flags
    return result


def _mirror_reference(cfg: ScenarioConfig, f_true: SampledField) -> np.ndarray:
    # (u(0, y) + u(2l, y)) / 2: what the series and continuation routes produce
    l = cfg.problem.depth
    ext = harmonic_extension(cfg.initial, l)
    if ext is not None:
        return 0.5 * (f_true.values + np.real(ext(2.0 * l, f_true.x)))
    return mirror_average(f_true, l).values
