"""Command-line front end: synth, recover, phase-diagram, coherence.

Exit codes: 0 success, 2 usage or parameter errors, 3 unreadable or
malformed input files, 4 empty frequency estimate, 5 over-complete support.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import fileio
from .errors import EmptyEstimateError, OvercompleteSupportError, RecoveryError
from .experiments import (
    SUCCESS_THRESHOLD,
    default_jobs,
    default_threshold_constant,
    family_from_name,
    make_signal,
    phase_diagram,
)
from .fourier import (
    MeasurementModel,
    NoiseSpec,
    coherence,
    default_hankel_rows,
    grid_coherence,
    measure,
)
from .pencil import DEFAULT_PENCIL_CONFIG, PencilConfig, pencil_recover
from .pruning import superset_recover

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_EMPTY_ESTIMATE = 4
EXIT_OVERCOMPLETE = 5

FAMILY_CHOICES = ("k2", "k3", "k4", "well-separated", "five-cluster")


def parse_grid(spec: str, integer: bool = False) -> list:
    """Grid spec: either ``start:stop:step`` (inclusive) or a comma list."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid spec must be start:stop:step, got {spec!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValueError(f"bad grid range {spec!r}")
        count = int(round((stop - start) / step)) + 1
        values = [start + i * step for i in range(count) if start + i * step <= stop + 1e-9]
    else:
        values = [float(p) for p in spec.split(",") if p.strip()]
    if not values:
        raise ValueError(f"empty grid spec {spec!r}")
    if integer:
        return [int(round(v)) for v in values]
    return values


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="superres",
        description="Sparse super-resolution from contiguous Fourier measurements.",
    )
    parser.add_argument("--config", type=Path, default=None,
                        help="JSON file of option defaults (flags override it)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize a signal and its measurement")
    p.add_argument("--family", choices=FAMILY_CHOICES, required=True)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--L", type=int, default=None, help="Hankel rows (default floor(m/3))")
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=29,
                   help="spike count for the well-separated family")
    p.add_argument("--base", type=int, default=100,
                   help="first spike location for the k-sparse families")
    p.add_argument("--noise", choices=("circular", "real"), default="circular")
    p.add_argument("--signal-out", type=Path, default=Path("signal.txt"))
    p.add_argument("--measurement-out", type=Path, default=Path("measurement.csv"))
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("recover", help="recover a sparse signal from a measurement file")
    p.add_argument("--measurement", type=Path, required=True)
    p.add_argument("--signal", type=Path, default=None,
                   help="ground-truth signal file for error reporting")
    p.add_argument("--method", choices=("superset", "pencil", "both"), default="superset")
    p.add_argument("--sigma", type=float, default=None,
                   help="noise scale (default: value recorded in the measurement file)")
    p.add_argument("--c", type=float, default=1.0, help="angle-threshold multiplier")
    p.add_argument("--epsilon2", type=float, default=None,
                   help="pruning threshold (default 10*sigma)")
    p.add_argument("--L", type=int, default=None, help="override the Hankel row count")
    p.add_argument("--denoise-constant", type=float,
                   default=DEFAULT_PENCIL_CONFIG.denoise_constant)
    p.add_argument("--out", type=Path, default=Path("recovery.json"))
    p.add_argument("--verbose", "-v", action="store_true",
                   help="also dump the per-candidate angle profile as CSV")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("phase-diagram", help="success-frequency grid over (m, sigma)")
    p.add_argument("--family", choices=FAMILY_CHOICES, required=True)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--m-grid", default="10:220:10",
                   help="measurement counts, start:stop:step or comma list")
    p.add_argument("--sigma-grid", default="-3.5:-2:0.1",
                   help="log10 noise levels, start:stop:step or comma list")
    p.add_argument("--trials", type=_positive_int, default=100)
    p.add_argument("--method", choices=("superset", "pencil", "both"), default="both")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--c", type=float, default=None,
                   help="angle-threshold multiplier (default: family rule)")
    p.add_argument("--denoise-constant", type=float,
                   default=DEFAULT_PENCIL_CONFIG.denoise_constant)
    p.add_argument("--noise", choices=("circular", "real"), default="circular")
    p.add_argument("--out", default="phase",
                   help="output path prefix")
    p.add_argument("--pgm", action="store_true", help="also emit PGM images")
    p.add_argument("--jobs", type=int, default=None,
                   help="parallel workers (default: SUPERRES_JOBS or 1)")
    p.set_defaults(func=cmd_phase_diagram)

    p = sub.add_parser("coherence", help="print the sensing-matrix coherence")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_coherence)
    return parser


def cmd_synth(args) -> int:
    family = family_from_name(args.family)
    if family.kind == "well_separated":
        family.parameters["count"] = args.count
    elif family.kind == "k_sparse_adjacent":
        family.parameters["base"] = args.base
    L = args.L if args.L is not None else default_hankel_rows(args.m)
    model = MeasurementModel(args.n, args.m, L)
    signal = make_signal(family, args.n, args.m, args.seed)
    y = measure(signal, model, NoiseSpec(args.sigma, args.seed, args.noise))
    fileio.write_signal(signal, args.signal_out)
    fileio.write_measurement(y, args.measurement_out, sigma=args.sigma)
    print(f"wrote {args.signal_out} and {args.measurement_out}")
    print(f"coherence {coherence(model):.4f}")
    return EXIT_OK


def _recover_one(method, y, model, sigma, args):
    if method == "superset":
        return superset_recover(y, model, sigma, args.c, epsilon2=args.epsilon2)
    config = PencilConfig(denoise_constant=args.denoise_constant)
    return pencil_recover(y, model, sigma, config)


def cmd_recover(args) -> int:
    try:
        y, file_sigma = fileio.read_measurement(args.measurement)
        truth = fileio.read_signal(args.signal) if args.signal else None
    except (ValueError, OSError) as exc:
        print(f"error: cannot read input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    model = y.model
    if args.L is not None:
        model = MeasurementModel(model.n, model.m, args.L)
    sigma = args.sigma if args.sigma is not None else (file_sigma or 0.0)
    methods = ("superset", "pencil") if args.method == "both" else (args.method,)

    for method in methods:
        out = args.out
        if len(methods) > 1:
            out = out.with_suffix(f".{method}{out.suffix}")
        try:
            result = _recover_one(method, y, model, sigma, args)
        except EmptyEstimateError as exc:
            print(f"error: {method}: empty estimate: {exc}", file=sys.stderr)
            return EXIT_EMPTY_ESTIMATE
        except OvercompleteSupportError as exc:
            print(f"error: {method}: over-complete support: {exc}", file=sys.stderr)
            return EXIT_OVERCOMPLETE
        fileio.write_recovery(result, model, out, method=method)
        summary = (f"{method}: support={list(result.support)} "
                   f"residual={result.residual:.6g} iterations={result.iterations}")
        if truth is not None:
            rel = (np.linalg.norm(result.coefficients - truth.dense())
                   / np.linalg.norm(truth.dense()))
            summary += f" rel_error={rel:.6g} success={bool(rel < SUCCESS_THRESHOLD)}"
        print(summary)
        print(f"wrote {out}")
        if args.verbose and result.gammas is not None:
            gamma_path = out.with_suffix(".gammas.csv")
            fileio.write_gamma_csv(result.gammas, model.n, gamma_path)
            print(f"wrote {gamma_path}")
    return EXIT_OK


def _progress_path(prefix: str, family: str, method: str) -> Path:
    return Path(f"{prefix}_{family}_{method}.progress.json")


def _load_progress(path: Path, config_key: str) -> dict[tuple[int, int], float]:
    if not path.exists():
        return {}
    try:
        doc = json.loads(path.read_text())
    except ValueError:
        return {}
    if doc.get("config_key") != config_key:
        return {}
    return {tuple(int(v) for v in key.split(",")): float(val)
            for key, val in doc.get("cells", {}).items()}


def cmd_phase_diagram(args) -> int:
    family = family_from_name(args.family)
    m_grid = parse_grid(args.m_grid, integer=True)
    log_sigmas = parse_grid(args.sigma_grid)
    sigmas = [10.0 ** v for v in log_sigmas]
    jobs = args.jobs if args.jobs is not None else default_jobs()
    methods = ("superset", "pencil") if args.method == "both" else (args.method,)
    pencil_config = PencilConfig(denoise_constant=args.denoise_constant)

    for method in methods:
        c = args.c if args.c is not None else default_threshold_constant(family)
        config_key = json.dumps({
            "family": args.family, "n": args.n, "m_grid": m_grid,
            "sigmas": sigmas, "trials": args.trials, "method": method,
            "seed": args.seed, "c": c, "noise": args.noise,
            "denoise_constant": args.denoise_constant,
        }, sort_keys=True)
        progress = _progress_path(args.out, args.family, method)
        completed = _load_progress(progress, config_key)
        cells = {f"{i},{j}": v for (i, j), v in completed.items()}

        def on_cell(i, j, value, cells=cells, progress=progress, config_key=config_key):
            cells[f"{i},{j}"] = value
            progress.write_text(json.dumps(
                {"config_key": config_key, "cells": cells}))

        diagram = phase_diagram(
            family, args.n, m_grid, sigmas, args.trials, method,
            base_seed=args.seed, c=c, pencil_config=pencil_config,
            noise_convention=args.noise, jobs=jobs,
            completed=completed, on_cell=on_cell)

        stem = f"{args.out}_{args.family}_{method}"
        fileio.write_phase_diagram_csv(diagram, f"{stem}.csv")
        fileio.write_phase_diagram_json(
            diagram, f"{stem}.json",
            extra_config={"log10_sigmas": log_sigmas,
                          "success_threshold": SUCCESS_THRESHOLD})
        print(f"wrote {stem}.csv and {stem}.json")
        if args.pgm:
            fileio.write_phase_diagram_pgm(diagram, f"{stem}.pgm")
            print(f"wrote {stem}.pgm")
        progress.unlink(missing_ok=True)
    return EXIT_OK


def cmd_coherence(args) -> int:
    print(f"coherence {grid_coherence(args.n, args.m):.4f}")
    return EXIT_OK


def _inject_config_flags(argv: list[str], defaults: dict) -> list[str]:
    """Splice config-file values in as flags right after the subcommand.

    Flags typed by the user come later on the line, so they win (argparse
    keeps the last occurrence of a store action).
    """
    commands = ("synth", "recover", "phase-diagram", "coherence")
    for idx, token in enumerate(argv):
        if token in commands:
            extra: list[str] = []
            for key, value in defaults.items():
                flag = "--" + str(key).replace("_", "-")
                if isinstance(value, bool):
                    if value:
                        extra.append(flag)
                else:
                    extra.extend([flag, str(value)])
            return argv[: idx + 1] + extra + argv[idx + 1:]
    return argv


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", type=Path, default=None)
    pre_args, _ = pre.parse_known_args(argv)
    if pre_args.config is not None:
        try:
            defaults = json.loads(Path(pre_args.config).read_text())
        except (ValueError, OSError) as exc:
            print(f"error: cannot read config file: {exc}", file=sys.stderr)
            return EXIT_PARSE
        argv = _inject_config_flags(argv, defaults)
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RecoveryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EMPTY_ESTIMATE if isinstance(exc, EmptyEstimateError) else EXIT_OVERCOMPLETE


if __name__ == "__main__":
    sys.exit(main())
