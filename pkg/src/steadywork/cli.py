"""Command-line entry point: ``steadywork {steady,sweep,figure,verify,trends}``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .analytic import OrderingMode, analytic_steady_state
from .core import Basis, SystemParams, diagonalize_coupled_qubits, to_basis
from .ergotropy import work_report
from .redfield import build_generator, residual, singular_gap, steady_state_nullspace
from .reservoir import ReservoirSpec
from .sweep import (
    FIGURES,
    PRESET_NOTES,
    ConfigError,
    compare_analytic_numeric,
    figure_preset,
    load_config,
    parse_orderings,
    read_ini,
    config_from_ini,
    rows_to_csv,
    rows_to_json,
    run_sweep,
)
from .trends import report_json, run_trend_checks, summarize

# CLI flag -> (config section, key)
_CONFIG_FLAGS = {
    "statistics": ("system", "statistics"),
    "omega1": ("system", "omega1"),
    "omega2": ("system", "omega2"),
    "omega": ("system", "omega"),
    "Delta": ("system", "Delta"),
    "lambda_": ("system", "lambda"),
    "J": ("system", "J"),
    "T1": ("reservoir1", "T"),
    "mu1": ("reservoir1", "mu"),
    "T2": ("reservoir2", "T"),
    "mu2": ("reservoir2", "mu"),
    "axis1": ("sweep", "axis1"),
    "axis2": ("sweep", "axis2"),
    "anchor": ("sweep", "anchor"),
    "scenario": ("sweep", "scenario"),
    "ordering": ("sweep", "ordering"),
    "method": ("sweep", "method"),
    "tolerance": ("sweep", "tolerance"),
    "out": ("output", "out"),
    "format": ("output", "format"),
}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--method", choices=("analytic", "redfield", "both"), help="steady-state route")
    p.add_argument("--secular", action="store_true", help="drop the cross-frequency dissipator")
    p.add_argument("--tolerance", type=float, help="analytic vs Redfield tolerance (default 1e-8)")
    p.add_argument("--format", choices=("csv", "json"), help="output format for rows")


def _point_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--statistics", choices=("boson", "fermion"))
    p.add_argument("--omega1", type=float)
    p.add_argument("--omega2", type=float)
    p.add_argument("--omega", type=float, help="mean qubit frequency")
    p.add_argument("--Delta", type=float, help="detuning omega1 - omega2")
    p.add_argument("--lambda", dest="lambda_", type=float, help="inter-qubit coupling")
    p.add_argument("--J", type=float, help="flat spectral density of both reservoirs")
    p.add_argument("--T1", type=float)
    p.add_argument("--T2", type=float)
    p.add_argument("--mu1", type=float)
    p.add_argument("--mu2", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="steadywork", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("steady", help="one parameter point: rho in both bases and its work report (JSON)")
    _point_flags(p)
    p.add_argument("--ordering", choices=[m.value for m in OrderingMode], default="physical")
    _common(p)

    p = sub.add_parser("sweep", help="evaluate a parameter grid from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="output file (default: stdout)")
    _point_flags(p)
    p.add_argument("--axis1", help="'name lo hi steps' or 'name: v1, v2, ...'")
    p.add_argument("--axis2")
    p.add_argument("--anchor", choices=("base", "mean"))
    p.add_argument("--scenario", choices=("auto", "equilibrium", "nonequilibrium", "asymmetric"))
    p.add_argument("--ordering", help="physical, paper-literal, or both")
    _common(p)

    epilog = "\n".join(f"{k}: {v}" for k, v in PRESET_NOTES.items())
    p = sub.add_parser(
        "figure", help="run a figure preset", epilog=epilog,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("name", choices=FIGURES)
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--ordering", choices=[m.value for m in OrderingMode],
                   help="restrict to one ordering (default: the preset's modes)")
    _common(p)

    p = sub.add_parser("verify", help="compare closed forms with the Redfield null space")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="write the full per-point report (JSON) here")
    p.add_argument("--ordering", help="physical, paper-literal, or both")
    _common(p)

    p = sub.add_parser("trends", help="check the target figure trends in both ordering modes")
    p.add_argument("--out", help="write the full report (JSON) here")
    return parser


def _matrix_json(rho) -> dict:
    return {
        "basis": rho.basis.value,
        "labels": list(rho.labels),
        "real": np.real(rho.entries).tolist(),
        "imag": np.imag(rho.entries).tolist(),
        "min_eigenvalue": rho.min_eigenvalue,
    }


def _state_json(rho, system) -> dict:
    return {
        "rho_energy": _matrix_json(rho),
        "rho_standard": _matrix_json(to_basis(rho, system, Basis.STANDARD)),
        "work": work_report(rho, system).as_dict(),
    }


def cmd_steady(args) -> int:
    if args.statistics is None:
        raise ConfigError("--statistics is required")
    if args.omega1 is not None or args.omega2 is not None:
        if args.omega1 is None or args.omega2 is None:
            raise ConfigError("give both --omega1 and --omega2")
        w1, w2 = args.omega1, args.omega2
    else:
        omega = 10.0 if args.omega is None else args.omega
        Delta = 0.0 if args.Delta is None else args.Delta
        w1, w2 = omega + Delta / 2, omega - Delta / 2
    lam = 2.0 if args.lambda_ is None else args.lambda_
    J = 1.0 if args.J is None else args.J
    T1 = 1.0 if args.T1 is None else args.T1
    T2 = T1 if args.T2 is None else args.T2
    mu1 = 0.0 if args.mu1 is None else args.mu1
    mu2 = mu1 if args.mu2 is None else args.mu2
    system = diagonalize_coupled_qubits(SystemParams(w1, w2, lam))
    r1 = ReservoirSpec(args.statistics, T1, mu1, J)
    r2 = ReservoirSpec(args.statistics, T2, mu2, J)
    method = args.method or "analytic"
    out = {
        "system": {
            "omega1": w1, "omega2": w2, "lambda": lam, "delta": system.delta,
            "Delta": system.Delta, "Omega": system.Omega, "theta": system.theta,
            "energies": list(system.energies),
        },
        "reservoirs": [
            {"statistics": r.kind.value, "T": r.temperature, "mu": r.mu, "J": r.coupling} for r in (r1, r2)
        ],
        "method": method,
    }
    analytic = numeric = None
    if method in ("analytic", "both"):
        analytic = analytic_steady_state(system, r1, r2, OrderingMode(args.ordering))
        out["analytic"] = {"ordering": args.ordering, **_state_json(analytic, system)}
    if method in ("redfield", "both"):
        gen = build_generator(system, r1, r2, secular=args.secular)
        numeric = steady_state_nullspace(gen)
        out["redfield"] = {
            "secular": args.secular,
            "residual": residual(gen, numeric),
            "singular_gap": singular_gap(gen),
            **_state_json(numeric, system),
        }
    if analytic is not None and numeric is not None:
        out["discrepancy"] = float(np.max(np.abs(analytic.entries - numeric.entries)))
    print(json.dumps(out, indent=1))
    return 0


def _emit(rows, out_path, fmt) -> None:
    text = rows_to_json(rows) if fmt == "json" else rows_to_csv(rows)
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _flag_overrides(args) -> dict:
    overrides = {}
    for attr, key in _CONFIG_FLAGS.items():
        value = getattr(args, attr, None)
        if value is not None:
            overrides[key] = value
    if getattr(args, "secular", False):
        overrides[("sweep", "secular")] = "true"
    return overrides


def _load(args):
    with open(args.config, encoding="utf-8") as fh:
        parser = read_ini(fh.read(), _flag_overrides(args))
    return parser, config_from_ini(parser)


def cmd_sweep(args) -> int:
    parser, config = _load(args)
    rows = run_sweep(config)
    out = parser.get("output", "out", fallback=None)
    fmt = parser.get("output", "format", fallback="csv")
    _emit(rows, out, fmt)
    return 0


def cmd_figure(args) -> int:
    config = figure_preset(args.name)
    changes = {}
    if args.ordering:
        changes["orderings"] = (OrderingMode(args.ordering),)
    if args.method:
        changes["method"] = args.method
    if args.secular:
        changes["secular"] = True
    if args.tolerance is not None:
        changes["tolerance"] = args.tolerance
    config = replace(config, **changes)
    _emit(run_sweep(config), args.out, args.format or "csv")
    return 0


def cmd_verify(args) -> int:
    _, config = _load(args)
    report = compare_analytic_numeric(config)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
    sys.stdout.write(report.to_json(include_rows=False))
    return report.exit_code


def cmd_trends(args) -> int:
    checks = run_trend_checks()
    text = report_json(checks)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    for trend, entry in summarize(checks).items():
        modes = ", ".join(f"{m}={'pass' if ok else 'FAIL'}" for m, ok in entry["modes"].items())
        print(f"{trend}: {'reproduced' if entry['reproduced'] else 'NOT reproduced'} ({modes})")
    return 0


_COMMANDS = {
    "steady": cmd_steady,
    "sweep": cmd_sweep,
    "figure": cmd_figure,
    "verify": cmd_verify,
    "trends": cmd_trends,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"steadywork: error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
