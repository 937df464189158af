"""Command-line front end.

Exit status: 0 when every check passes, 1 when any check fails, 2 for usage
or configuration errors (including an unwritable output directory).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import checks
from . import ito_algebra as ia
from .paths import DEFAULT_SEED

OUTPUT_DIR_ENV = "SQRTPROC_OUTPUT_DIR"
DEFAULT_OUTPUT_DIR = "sqrtproc-out"


class ConfigError(ValueError):
    pass


def encode(value: Any) -> Any:
    """JSON-ready form; complex numbers become ``"re,im"`` strings."""
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        z = complex(value)
        return f"{z.real!r},{z.imag!r}"
    if isinstance(value, (Fraction, ia.QI, ia.Poly, ia.ItoExpr)):
        return str(value)
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [encode(v) for v in value]
    return str(value)


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text}")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return v


def _beta(text: str) -> str:
    if text == "schrodinger":
        return text
    parts = text.split(",")
    try:
        if len(parts) not in (1, 2):
            raise ValueError
        [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"beta must be 're,im' or 'schrodinger': {text!r}") from None
    return text


def _mu0(text: str) -> str:
    try:
        if not ia.parse_complex_rational(text):
            raise argparse.ArgumentTypeError("mu0 must be nonzero")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return text


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"master seed (default {DEFAULT_SEED})")
    common.add_argument("--workers", type=_positive_int, default=1, help="threads for Monte Carlo ensembles")
    common.add_argument("--output-dir", default=None, help=f"report directory (default ${OUTPUT_DIR_ENV} or ./{DEFAULT_OUTPUT_DIR})")
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="format of data exports")

    parser = argparse.ArgumentParser(prog="sqrtproc", description="Square-root Wiener process verification suites.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    verify = sub.add_parser("verify", help="symbolic and Monte Carlo identity checks")
    vsub = verify.add_subparsers(dest="target", required=True, metavar="TARGET")
    ito = vsub.add_parser("ito", parents=[common], help="theorem and corollary identities")
    ito.add_argument("--mu0", type=_mu0, default="1/2", help="leading coefficient as 'p/q' or 're,im'")
    ito.add_argument("--samples", type=_positive_int, default=20)
    phase = vsub.add_parser("phase", parents=[common], help="Bernoulli phase moments")
    phase.add_argument("--n", type=_positive_int, default=10**6)
    var = vsub.add_parser("variation", parents=[common], help="power variations and square residual")
    var.add_argument("--n", type=_positive_int, default=10**6)
    var.add_argument("--paths", type=_positive_int, default=10**4)

    regp = sub.add_parser("regularize", parents=[common], help="regularized |dW| sums and sign integral")
    regp.add_argument("--n", type=_positive_int, default=10**3)
    regp.add_argument("--paths", type=_positive_int, default=10**4)

    pdep = sub.add_parser("pde", parents=[common], help="evolve the Gaussian packet")
    pdep.add_argument("--beta", type=_beta, default="schrodinger")
    pdep.add_argument("--delta-x", type=_positive_float, default=1.0)
    pdep.add_argument("--x-min", type=float, default=-20.0)
    pdep.add_argument("--x-max", type=float, default=20.0)
    pdep.add_argument("--dx", type=_positive_float, default=0.05)
    pdep.add_argument("--dt", type=_positive_float, default=1e-3)
    pdep.add_argument("--steps", type=_positive_int, default=1000)

    mapp = sub.add_parser("map", parents=[common], help="binomial wavefunction map")
    mapp.add_argument("--n", type=_positive_int, default=16, help="n of the exported table")

    allp = sub.add_parser("all", parents=[common], help="every suite")
    allp.add_argument("--mu0", type=_mu0, default="1/2")
    return parser


def resolve_config(args: argparse.Namespace) -> dict[str, Any]:
    cfg = {k: v for k, v in vars(args).items() if k not in ("command", "target", "output_dir", "workers")}
    if "x_min" in cfg and not cfg["x_max"] > cfg["x_min"]:
        raise ConfigError("--x-max must exceed --x-min")
    return cfg


def command_name(args: argparse.Namespace) -> str:
    return f"verify {args.target}" if args.command == "verify" else args.command


def run_suite(args: argparse.Namespace) -> checks.SuiteResult:
    seed, workers = args.seed, args.workers
    if args.command == "verify":
        if args.target == "ito":
            return checks.verify_ito(mu0=args.mu0, samples=args.samples, seed=seed)
        if args.target == "phase":
            return checks.verify_phase(n=args.n, seed=seed)
        return checks.verify_variation(n=args.n, paths=args.paths, seed=seed, workers=workers)
    if args.command == "regularize":
        return checks.verify_regularization(n=args.n, paths=args.paths, seed=seed, workers=workers)
    if args.command == "pde":
        return checks.verify_pde(
            delta_x=args.delta_x, x_min=args.x_min, x_max=args.x_max,
            dx=args.dx, dt=args.dt, t_final=args.steps * args.dt, beta=args.beta,
        )
    if args.command == "map":
        return checks.verify_map(table_n=args.n)
    return checks.verify_all(seed=seed, workers=workers, mu0=args.mu0)


def write_report(
    result: checks.SuiteResult,
    command: str,
    config: dict[str, Any],
    output_dir: Path,
    fmt: str,
    timing: dict[str, Any],
) -> list[Path]:
    """Write ``report.json`` plus one data export per table."""
    output_dir.mkdir(parents=True, exist_ok=True)
    stem = command.replace(" ", "_")
    report = {
        "command": command,
        "config": encode(config),
        "checks": [
            {
                "name": c.name,
                "status": c.status,
                "observed": encode(c.observed),
                "expected": encode(c.expected),
                "tolerance": encode(c.tolerance),
            }
            for c in result.checks
        ],
        "data": encode(result.data),
        "timing": encode(timing),
    }
    written = []
    path = output_dir / f"{stem}.report.json"
    path.write_text(json.dumps(report, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    written.append(path)
    for name, (header, rows) in result.tables.items():
        fname = name.replace(".", "_")
        if fmt == "csv":
            p = output_dir / f"{stem}.{fname}.csv"
            with p.open("w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(header)
                for row in rows:
                    w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
        else:
            p = output_dir / f"{stem}.{fname}.json"
            p.write_text(
                json.dumps({"columns": header, "rows": encode(rows)}, indent=1) + "\n", encoding="utf-8"
            )
        written.append(p)
    return written


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = resolve_config(args)
        output_dir = Path(args.output_dir or os.environ.get(OUTPUT_DIR_ENV) or DEFAULT_OUTPUT_DIR)
        if output_dir.exists() and not output_dir.is_dir():
            raise ConfigError(f"output path is not a directory: {output_dir}")
        start = time.perf_counter()
        result = run_suite(args)
        elapsed = time.perf_counter() - start
    except (ConfigError, ValueError) as exc:
        print(f"sqrtproc: error: {exc}", file=sys.stderr)
        return 2
    command = command_name(args)
    timing = {"elapsed_seconds": round(elapsed, 3), "workers": args.workers, "output_dir": str(output_dir)}
    try:
        written = write_report(result, command, config, output_dir, args.format, timing)
    except OSError as exc:
        print(f"sqrtproc: error: cannot write report: {exc}", file=sys.stderr)
        return 2
    for c in result.checks:
        print(f"[{c.status.upper()}] {c.name}: observed={encode(c.observed)} expected={encode(c.expected)}")
    print(f"report: {written[0]}")
    return 0 if result.passed else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
