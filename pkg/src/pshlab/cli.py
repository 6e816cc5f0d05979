"""Command line runner: ``pshlab <command> [options]``.

Every command writes ``<out>/<command>.csv`` and ``<out>/<command>-report.txt``.
Exit status is 0 on success, 1 when a verification check fails and 2 on a
usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .config import (COMMANDS, ExperimentConfig, format_float, parse_config, parse_function, parse_weight)
from .errors import ConfigError, PshlabError
from .factorize import OuterFunction, ball_probe, deflate, isometry_report
from .functions import AbsPower
from .hardy import boundary_integral, demailly_functional, membership, norm_report
from .measures import boundary_density
from .suite import run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pshlab", description="Weighted Hardy space experiments on the unit disk.")
    parser.add_argument("--version", action="version", version=f"pshlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="YAML experiment file; flags given here override it")
        p.add_argument("--weight", action="append",
                       help="weight expression, e.g. 'atom 0.5 1' or 'radial 0.5' (repeatable)")
        p.add_argument("--f", action="append", dest="functions",
                       help="function expression, e.g. 'pow 0.2' (repeatable)")
        p.add_argument("--p", type=_floats, help="exponents, comma separated")
        p.add_argument("--r-grid", type=_floats, dest="r_grid", help="negative levels; write --r-grid=-1,-0.1")
        p.add_argument("--t-grid", type=_floats, dest="t_grid", help="probe parameters in (0, 1)")
        p.add_argument("--tol", type=float, help="quadrature tolerance (verify: acceptance tolerance)")
        p.add_argument("--out", help="output directory")
        p.add_argument("--suite", choices=("core", "full"), help="verification suite")
        p.add_argument("--grid-size", type=int, dest="grid_size", help="density grid size")
        p.add_argument("--angle", type=float, dest="probe_angle", help="probe witness angle")
    return parser


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    if args.config:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read {args.config}: {exc.strerror}") from None
        cfg = parse_config(text)
        if cfg.command != args.command:
            raise ConfigError(f"config is for {cfg.command!r}, not {args.command!r}")
    else:
        cfg = ExperimentConfig(command=args.command)
        if args.command == "verify":
            cfg.tol = 1e-3
    overrides = {"weights": args.weight, "functions": args.functions, "p": args.p, "r_grid": args.r_grid,
                 "t_grid": args.t_grid, "tol": args.tol, "out": args.out, "suite": args.suite,
                 "grid_size": args.grid_size, "probe_angle": args.probe_angle}
    for key, value in overrides.items():
        if value is not None:
            setattr(cfg, key, value)
    if any(r >= 0 for r in cfg.r_grid):
        raise ConfigError("r-grid levels must be negative")
    if any(not 0 < t < 1 for t in cfg.t_grid):
        raise ConfigError("t-grid values must lie in (0, 1)")
    if any(p <= 0 for p in cfg.p):
        raise ConfigError("p must be positive")
    return cfg


def worker_count(cfg: ExperimentConfig) -> int:
    cap = os.environ.get("PSHLAB_THREADS")
    n = cfg.threads or os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise ConfigError(f"PSHLAB_THREADS must be an integer, got {cap!r}") from None
    return n


def sweep(tasks: Sequence[Callable[[], list]], workers: int) -> list:
    """Run independent tasks and concatenate their rows in task order."""
    if workers <= 1 or len(tasks) <= 1:
        results = [t() for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda t: t(), tasks))
    return [row for rows in results for row in rows]


def _cell(x):
    if isinstance(x, (float, np.floating)):
        return format_float(float(x))
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if x is None:
        return ""
    return str(x)


def write_csv(path: Path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(x) for x in row])
    path.write_bytes(buf.getvalue().encode("utf-8"))


def _verdict(res):
    return "divergent" if res.divergent else "finite"


def _value(res):
    return math.inf if res.divergent else res.value


def _require(cfg, weights=True, functions=True):
    if weights and not cfg.weights:
        raise ConfigError("at least one --weight is required")
    if functions and not cfg.functions:
        raise ConfigError("at least one --f is required")


def _pairs(cfg):
    """``(weight text, weight, function text, function)`` in sweep order."""
    out = []
    for wt in cfg.weights:
        nu = parse_weight(wt)
        cache = {}
        for ft in cfg.functions:
            out.append((wt, nu, ft, parse_function(ft, nu, cache)))
    return out


# ------------------------------------------------------------------ commands

def cmd_density(cfg):
    _require(cfg, functions=False)
    header = ["weight", "theta", "density", "verdict"]
    theta = 2.0 * math.pi * np.arange(cfg.grid_size) / cfg.grid_size

    def task(wt):
        alpha = boundary_density(parse_weight(wt), theta)
        return [[wt, t, a, "finite" if math.isfinite(a) else "divergent"] for t, a in zip(theta, alpha)]

    return header, [lambda wt=wt: task(wt) for wt in cfg.weights], []


def cmd_norm(cfg):
    _require(cfg)
    header = ["weight", "f", "p", "boundary_norm", "interior_norm", "classical_norm", "relative_gap", "verdict",
              "check"]

    def task(wt, nu, ft, f, p):
        rep = norm_report(f, p, nu, tol=cfg.tol)
        b, i, c = rep.boundary_value, rep.interior_value, rep.classical_value
        return [[wt, ft, p, _value(b), _value(i), _value(c), rep.agreement_gap, _verdict(b), "norm-route-agreement"]]

    tasks = [lambda a=a, p=p: task(*a, p) for a in _pairs(cfg) for p in cfg.p]
    return header, tasks, []


def cmd_measure(cfg):
    _require(cfg)
    header = ["weight", "f", "p", "r", "functional", "error", "boundary_limit", "gap_to_limit", "check"]

    def task(wt, nu, ft, f, p):
        phi = AbsPower(f, p)
        lim = boundary_integral(phi, nu)
        rows = []
        for r in sorted(cfg.r_grid):
            res = demailly_functional(nu, r, phi, tol=cfg.tol)
            rows.append([wt, ft, p, r, res.value, res.error_estimate, _value(lim),
                         abs(_value(lim) - res.value), "lelong-jensen-monotonicity"])
        return rows

    tasks = [lambda a=a, p=p: task(*a, p) for a in _pairs(cfg) for p in cfg.p]
    return header, tasks, []


def cmd_membership(cfg):
    _require(cfg)
    header = ["weight", "f", "p", "verdict", "exponent", "classical_member", "predicted_slope", "fitted_slope",
              "check"]

    def task(wt, nu, ft, f, p):
        rep = membership(f, p, nu)
        return [[wt, ft, p, rep.verdict, rep.exponent, rep.classical_member, rep.predicted_slope, rep.fitted_slope,
                 "boundary-membership"]]

    tasks = [lambda a=a, p=p: task(*a, p) for a in _pairs(cfg) for p in cfg.p]
    return header, tasks, []


def cmd_deflate(cfg):
    _require(cfg)
    header = ["weight", "f", "p", "blaschke", "g", "norm_f", "norm_g", "relative_gap", "min_abs_g", "route", "check"]

    def task(wt, nu, ft, f, p):
        B, g, rep = deflate(f, p, nu, tol=cfg.tol)
        return [[wt, ft, p, B.to_expr(), g.to_expr(), _value(rep.norm_f), _value(rep.norm_g), rep.relative_gap,
                 rep.min_abs_g, rep.route, "deflation-invariance"]]

    tasks = [lambda a=a, p=p: task(*a, p) for a in _pairs(cfg) for p in cfg.p]
    return header, tasks, []


def cmd_isometry(cfg):
    _require(cfg)
    header = ["weight", "f", "p", "image_norm", "weighted_norm", "relative_gap", "round_trip_error", "verdict",
              "check"]
    outers = {}

    def task(wt, nu, ft, f, p):
        rep = membership(f, p, nu, diagnostics=False)
        if rep.verdict != "member":
            return [[wt, ft, p, math.inf, math.inf, math.nan, math.nan, rep.verdict, "outer-isometry"]]
        iso = isometry_report(f, p, nu, tol=cfg.tol, outer=outers[wt])
        return [[wt, ft, p, iso.image_norm.value, iso.weighted_norm.value, iso.relative_gap, iso.round_trip_error,
                 "member", "outer-isometry"]]

    pairs = _pairs(cfg)
    for wt, nu, _, _ in pairs:
        if wt not in outers:
            outers[wt] = OuterFunction(nu)
    tasks = [lambda a=a, p=p: task(*a, p) for a in pairs for p in cfg.p]
    return header, tasks, []


def cmd_probe(cfg):
    _require(cfg, weights=False)
    header = ["f", "p", "t", "probe_norm", "error", "exceeds_one", "witness", "certified", "check"]

    def task(ft, p):
        f = parse_function(ft)
        rep = ball_probe(f, p, cfg.t_grid, angle=cfg.probe_angle)
        return [[ft, p, t, v, e, v > 1.0, rep.witness == t, rep.certified, "green-witness-probe"]
                for t, v, e in zip(rep.t_grid, rep.values, rep.errors)]

    tasks = [lambda ft=ft, p=p: task(ft, p) for ft in cfg.functions for p in cfg.p]
    return header, tasks, []


def cmd_verify(cfg):
    header = ["check", "case", "value", "threshold", "status"]
    checks = run_suite(cfg.suite, cfg.tol)
    rows = [[c.tag, c.name, c.value, c.threshold, "pass" if c.passed else "fail"] for c in checks]
    return header, [lambda: rows], []


HANDLERS = {"density": cmd_density, "norm": cmd_norm, "measure": cmd_measure, "membership": cmd_membership,
            "deflate": cmd_deflate, "isometry": cmd_isometry, "probe": cmd_probe, "verify": cmd_verify}


def _report(cfg, header, rows, failed) -> str:
    lines = [f"pshlab {cfg.command}", f"rows: {len(rows)}"]
    if "check" in header:
        k = header.index("check")
        for tag in sorted({r[k] for r in rows}):
            lines.append(f"check: {tag}")
    if cfg.command == "verify":
        for r in rows:
            lines.append(f"[{r[4]}] {r[0]}: {r[1]} (value {_cell(r[2])}, threshold {_cell(r[3])})")
        lines.append("result: " + ("FAIL " + ", ".join(failed) if failed else "PASS"))
    return "\n".join(lines) + "\n"


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = resolve_config(args)
        header, tasks, failed = HANDLERS[cfg.command](cfg)
        rows = sweep(tasks, worker_count(cfg))
        if cfg.command == "verify":
            failed = sorted({r[0] for r in rows if r[4] == "fail"})
    except ConfigError as exc:
        print(f"pshlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PshlabError as exc:
        print(f"pshlab: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    write_csv(out / f"{cfg.command}.csv", header, rows)
    report = _report(cfg, header, rows, failed)
    (out / f"{cfg.command}-report.txt").write_bytes(report.encode("utf-8"))
    sys.stdout.write(report)
    if failed:
        print("failing checks: " + ", ".join(failed), file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def main() -> None:
    sys.exit(run())
