"""Command line: ``retroherm <subcommand> --config cfg.json --out dir``.

Subcommands: forward, invert, roundtrip, basis, diagnose, selftest.
Exit codes: 0 success, 2 configuration error, 3 numerical failure
(selftest exits 1 when a check fails).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from .errors import ConfigError, RetroError
from .fields import SampledField
from .scenario import VERSION, RunReport, ScenarioConfig, sanitize_numbers, make_kernel, make_medium, run_diagnostics, run_scenario

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

RESULT_HEADER = ("x", "f_true", "f_rec", "u_tau", "abs_err")
BASIS_HEADER = ("layer", "j", "power", "coeff")
MONOMIAL_HEADER = ("layer", "k", "power", "coeff")


def _fmt(v) -> str:
    if v is None or not np.isfinite(v):
        return ""
    return repr(float(v))


def write_result_csv(path: Path, x, f_true=None, f_rec=None, u_tau=None):
    n = len(x)
    cols = [np.full(n, np.nan) if c is None else np.asarray(c, dtype=float) for c in (f_true, f_rec, u_tau)]
    err = np.abs(cols[1] - cols[0])
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(RESULT_HEADER)
        for i in range(n):
            w.writerow([_fmt(x[i]), _fmt(cols[0][i]), _fmt(cols[1][i]), _fmt(cols[2][i]), _fmt(err[i])])


def read_field_csv(path: Path) -> SampledField:
    """Uniform-grid field from a CSV with column ``x`` and one of ``u_tau``/``u``."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ConfigError(f"{path}: no rows")
    col = "u_tau" if "u_tau" in rows[0] else "u" if "u" in rows[0] else None
    if "x" not in rows[0] or col is None:
        raise ConfigError(f"{path}: need columns 'x' and 'u_tau' (or 'u')")
    try:
        x = np.array([float(r["x"]) for r in rows])
        u = np.array([float(r[col]) for r in rows])
    except ValueError as exc:
        raise ConfigError(f"{path}: non-numeric entry ({exc})") from exc
    dx = np.diff(x)
    if dx.size == 0 or not np.allclose(dx, dx[0], rtol=1e-9, atol=0):
        raise ConfigError(f"{path}: grid must be uniform")
    return SampledField(float(x[0]), float(dx[0]), u)


def write_json(path: Path, payload: dict):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=False, allow_nan=False)
        fh.write("\n")


def write_tables(out: Path, cfg: ScenarioConfig) -> dict:
    from .genfun import gen_hermite_basis

    medium = make_medium(cfg)
    J = cfg.method.order
    basis = gen_hermite_basis(medium, make_kernel(cfg), J)
    n_rows = 0
    with open(out / cfg.output.basis_csv, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(BASIS_HEADER)
        for m in range(basis.poly.shape[0]):
            for j in range(J + 1):
                for r in range(j, -1, -1):
                    c = basis.poly[m, j, r]
                    if c != 0.0:
                        w.writerow([m + 1, j, r, repr(float(c))])
                        n_rows += 1
    with open(out / cfg.output.monomials_csv, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(MONOMIAL_HEADER)
        for m in range(basis.monomials.coeffs.shape[0]):
            for k in range(J + 1):
                for r in range(k, -1, -1):
                    c = basis.monomials.coeffs[m, k, r]
                    if c != 0.0:
                        w.writerow([m + 1, k, r, repr(float(c))])
    return {"J": J, "kernel": make_kernel(cfg).kind, "layers": int(basis.poly.shape[0]), "basis_rows": n_rows}


def load_config(path: str | None) -> ScenarioConfig:
    if path is None:
        return ScenarioConfig.from_dict({})
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        return ScenarioConfig.from_dict(raw)
    except ConfigError:
        raise
    except (TypeError, ValueError, KeyError, AttributeError) as exc:
        raise ConfigError(f"invalid config: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="scenario JSON file")
    common.add_argument("--out", help="output directory (overrides output.dir)")
    common.add_argument("--seed", type=int, help="noise seed (overrides noise.seed)")
    common.add_argument("--quiet", action="store_true", help="suppress console summary")
    parser = argparse.ArgumentParser(prog="retroherm", description="Retrospective reconstruction scenarios")
    parser.add_argument("--version", action="version", version=VERSION)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("forward", parents=[common], help="forward-solve only and write u(tau, x)")
    p_inv = sub.add_parser("invert", parents=[common], help="invert a field file")
    p_inv.add_argument("--input", help="CSV with columns x,u_tau (overrides input.path)")
    sub.add_parser("roundtrip", parents=[common], help="forward, noise, invert, compare")
    sub.add_parser("basis", parents=[common], help="dump H_jn and x_n^k coefficient tables")
    sub.add_parser("diagnose", parents=[common], help="completeness defect and influence-kernel comparison")
    p_self = sub.add_parser("selftest", parents=[common], help="run the acceptance checks")
    p_self.add_argument("--only", nargs="*", help="subset of check ids, e.g. A1 A5")
    return parser


def _selftest(args, out: Path | None) -> int:
    from .acceptance import CHECKS, run_check

    keys = args.only or list(CHECKS)
    unknown = [k for k in keys if k not in CHECKS]
    if unknown:
        raise ConfigError(f"unknown checks {unknown}")
    results = []
    for k in keys:
        r = run_check(k)
        results.append(r)
        if not args.quiet:
            print(r.line())
    passed = all(r.passed for r in results)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        rep = RunReport(
            "selftest",
            metrics={r.name: {"value": r.value, "tol": r.tol, "passed": r.passed} for r in results},
            timings={r.name: r.seconds for r in results},
        )
        write_json(out / "report.json", json.loads(json.dumps(rep.to_dict(), default=float)))
    if not args.quiet:
        print(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return EXIT_OK if passed else EXIT_FAIL


def _diagnose(args, cfg: ScenarioConfig, out: Path) -> int:
    from dataclasses import replace

    cfg = replace(cfg, diagnostics=replace(cfg.diagnostics, completeness=True, influence=True))
    t0 = time.perf_counter()
    diag = run_diagnostics(cfg, make_medium(cfg))
    flags = []
    rep = RunReport("diagnose", diagnostics=sanitize_numbers(diag, flags, "diagnostics"), config=cfg.raw, flags=flags)
    rep.timings = {"diagnostics": time.perf_counter() - t0}
    write_json(out / cfg.output.report_json, rep.to_dict())
    if not args.quiet:
        c = diag["completeness"]
        print(
            f"diagnose: layer masses {c['layer_diagonal_mass']}, max ghost {c['max_ghost_mass']:.3e}, "
            f"mismatch={c['mismatch']} -> {out}"
        )
    return EXIT_OK


def _run(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    if args.out is not None:
        cfg = cfg.with_output_dir(args.out)
    if args.command == "selftest":
        return _selftest(args, Path(args.out) if args.out else None)
    out = Path(cfg.output.dir)
    out.mkdir(parents=True, exist_ok=True)
    if args.command == "basis":
        summary = write_tables(out, cfg)
        rep = RunReport("basis", diagnostics=summary, config=cfg.raw)
        write_json(out / cfg.output.report_json, rep.to_dict())
        if not args.quiet:
            print(f"wrote {out / cfg.output.basis_csv} and {out / cfg.output.monomials_csv}")
        return EXIT_OK
    if args.command == "diagnose":
        return _diagnose(args, cfg, out)
    u_input = None
    if args.command == "invert":
        path = getattr(args, "input", None) or cfg.input_path
        if path is None:
            raise ConfigError("invert needs --input or input.path")
        u_input = read_field_csv(Path(path))
    result = run_scenario(cfg, args.command, u_input)
    write_result_csv(out / cfg.output.result_csv, result.x, result.f_true, result.f_rec, result.u_tau)
    write_json(out / cfg.output.report_json, result.report.to_dict())
    if not args.quiet:
        m = result.report.metrics
        summary = ", ".join(f"{k}={v:.3e}" for k, v in m.items() if isinstance(v, float))
        print(f"{args.command}: {summary or 'done'} -> {out}")
        for flag in result.report.flags:
            print(f"flag: {flag}")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RetroError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (FloatingPointError, np.linalg.LinAlgError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
