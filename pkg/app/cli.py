# Author: Muthana
# © 2026 Muthana. All rights reserved.
# Unauthorized copying or distribution is prohibited.

"""
Command-line front end.

    python -m app.cli sweep  --c-min 0.2 --c-max 3.0 --c-step 0.2 --realizations 20 --n 400
    python -m app.cli energy --c-list 0.1,3.0 --k 200 --seed 5
    python -m app.cli series --c 0.5 --n 400
    python -m app.cli verify --n 25 --c-list 0,0.5,2.0 --seeds 5

Exit codes: 0 success, 1 verification mismatch or failed computation,
2 invalid arguments, 3 I/O failure.
"""

import argparse
import logging
import math
import os
import sys
from typing import List, Optional

from joblib import Parallel, delayed
from pydantic import ValidationError

from . import config
from .energy import energy_profiles
from .ensemble import SweepConfig, run_sweep, spearman_trend
from .errors import ConfigError, EstimateError, KrylabError, KrylovBreakdownError, NumericalDegeneracyError
from .estimate import GAMMA_MAX, GAMMA_MIN, GAMMA_STEP, default_gamma_grid, estimate_series
from .krylov import parse_mode, run_krylov
from .lattice import PotentialField
from .oracle import ORACLE_MAX_N, engine_discrepancy
from .serializers import (
    fit_to_dict,
    write_energy_csv,
    write_json,
    write_manifest,
    write_series_csv,
    write_summary_csv,
    write_sweep_csv,
)

logger = logging.getLogger("app.cli")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _float_list(text: str) -> List[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("list must not be empty")
    return values


def _int_list(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def disorder_grid(c_min: float, c_max: float, c_step: float) -> List[float]:
    """c_min, c_min + step, ... up to c_max inclusive, as exact decimals."""
    if c_step <= 0:
        raise ConfigError(f"--c-step must be positive, got {c_step}")
    if c_max < c_min:
        raise ConfigError(f"--c-max {c_max} is below --c-min {c_min}")
    count = int(math.floor((c_max - c_min) / c_step + 1e-9)) + 1
    return [round(c_min + i * c_step, 10) for i in range(count)]


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--out-dir", default=config.OUT_DIR)
    parser.add_argument("--log-level", default=None, help="overrides KRYLAB_LOG_LEVEL")


def _add_mode(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--mode", default="lanczos", help="gram-schmidt | lanczos")
    parser.add_argument("--reorth-every", type=int, default=5, help="0 disables reorthogonalization")
    parser.add_argument("--reorth-window", type=int, default=config.REORTH_WINDOW, help="0 keeps the full history")


def _add_fit(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--gamma-min", type=float, default=GAMMA_MIN)
    parser.add_argument("--gamma-max", type=float, default=GAMMA_MAX)
    parser.add_argument("--gamma-step", type=float, default=GAMMA_STEP)
    parser.add_argument("--tail-start", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="krylab", description="Krylov-distance delocalization lab")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="disorder sweep of y and L")
    sweep.add_argument("--c-min", type=float, default=0.2)
    sweep.add_argument("--c-max", type=float, default=3.0)
    sweep.add_argument("--c-step", type=float, default=0.2)
    sweep.add_argument("--c-list", type=_float_list, default=None)
    sweep.add_argument("--realizations", type=int, default=20)
    sweep.add_argument("--n", type=int, default=400)
    sweep.add_argument("--threads", type=int, default=None)
    _add_common(sweep)
    _add_mode(sweep)
    _add_fit(sweep)
    sweep.set_defaults(handler=cmd_sweep)

    energy = sub.add_parser("energy", help="shell-energy profile of m_k")
    energy.add_argument("--c-list", type=_float_list, default=[0.0])
    energy.add_argument("--k", type=int, required=True)
    energy.add_argument("--snapshots", type=_int_list, default=[])
    energy.add_argument("--realization", type=int, default=0)
    energy.add_argument("--threads", type=int, default=None)
    _add_common(energy)
    _add_mode(energy)
    energy.set_defaults(handler=cmd_energy)

    series = sub.add_parser("series", help="distance series and fit for one realization")
    series.add_argument("--c", type=float, required=True)
    series.add_argument("--n", type=int, default=400)
    series.add_argument("--realization", type=int, default=0)
    _add_common(series)
    _add_mode(series)
    _add_fit(series)
    series.set_defaults(handler=cmd_series)

    verify = sub.add_parser("verify", help="compare the engine with the dense oracle")
    verify.add_argument("--n", type=int, default=25)
    verify.add_argument("--c-list", type=_float_list, default=[0.0, 0.5, 2.0])
    verify.add_argument("--seeds", type=int, default=5, help="seeds 1..S are checked")
    verify.add_argument("--tolerance", type=float, default=1e-9)
    verify.add_argument("--box-radius", type=int, default=None)
    verify.add_argument("--log-level", default=None)
    verify.set_defaults(handler=cmd_verify)

    return parser


def _mode_options(args: argparse.Namespace) -> dict:
    return {
        "reorthogonalize_every": args.reorth_every or None,
        "window": args.reorth_window or None,
    }


def _prepare_out_dir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path


def cmd_sweep(args: argparse.Namespace) -> int:
    c_values = args.c_list if args.c_list is not None else disorder_grid(args.c_min, args.c_max, args.c_step)
    sweep = SweepConfig(
        c_values=c_values,
        realizations=args.realizations,
        n=args.n,
        seed=args.seed,
        mode=args.mode,
        gamma_min=args.gamma_min,
        gamma_max=args.gamma_max,
        gamma_step=args.gamma_step,
        tail_start=args.tail_start,
        **_mode_options(args),
    )
    threads = config.resolve_threads(args.threads)
    out_dir = _prepare_out_dir(args.out_dir)

    records = run_sweep(sweep, threads=threads)
    paths = [
        write_sweep_csv(records, os.path.join(out_dir, "sweep.csv")),
        write_summary_csv(records, os.path.join(out_dir, "summary.csv")),
    ]
    write_manifest("sweep", sweep.model_dump(mode="json"), paths, out_dir)

    if len(records) > 1:
        logger.info(f"spearman(c, min_y) = {spearman_trend(records):.4f}")
    return EXIT_OK


def _energy_job(c: float, args: argparse.Namespace, ks: List[int]):
    field = PotentialField(c=c, seed=args.seed, realization=args.realization)
    mode = parse_mode(args.mode, **_mode_options(args))
    return c, energy_profiles(field, ks, mode)


def cmd_energy(args: argparse.Namespace) -> int:
    if args.k < 0 or any(k < 0 for k in args.snapshots):
        raise ConfigError(f"--k and --snapshots must be non-negative, got k={args.k} snapshots={args.snapshots}")
    parse_mode(args.mode, **_mode_options(args))
    for c in args.c_list:
        if not math.isfinite(c) or c < 0:
            raise ConfigError(f"disorder values must be finite and non-negative, got {c}")
    c_values = sorted(set(args.c_list))
    snapshots = sorted(set(args.snapshots))
    out_dir = _prepare_out_dir(args.out_dir)
    ks = sorted({args.k, *snapshots})

    threads = min(config.resolve_threads(args.threads), len(c_values))
    if threads > 1:
        results = Parallel(n_jobs=threads)(delayed(_energy_job)(c, args, ks) for c in c_values)
    else:
        results = [_energy_job(c, args, ks) for c in c_values]

    paths = []
    for c, profiles in sorted(results, key=lambda item: item[0]):
        paths.append(write_energy_csv(profiles[args.k], os.path.join(out_dir, f"energy_{c:g}.csv")))
        for k in snapshots:
            paths.append(write_energy_csv(profiles[k], os.path.join(out_dir, f"energy_{c:g}_k{k}.csv")))

    echo = {
        "c_values": c_values,
        "k": args.k,
        "snapshots": snapshots,
        "seed": args.seed,
        "realization": args.realization,
        "mode": args.mode,
        **_mode_options(args),
    }
    write_manifest("energy", echo, paths, out_dir)
    return EXIT_OK


def cmd_series(args: argparse.Namespace) -> int:
    field = PotentialField(c=args.c, seed=args.seed, realization=args.realization)
    mode = parse_mode(args.mode, **_mode_options(args))
    grid = default_gamma_grid(args.gamma_min, args.gamma_max, args.gamma_step)
    out_dir = _prepare_out_dir(args.out_dir)

    series = run_krylov(field, args.n, mode)
    try:
        fit = fit_to_dict(estimate_series(series, grid, args.tail_start))
    except EstimateError as exc:
        logger.warning(f"no fit for c={args.c}: {exc}")
        fit = None

    payload = {
        "c": series.c,
        "seed": series.seed,
        "realization": series.realization,
        "mode": series.mode,
        "breakdown": series.breakdown,
        "breakdown_step": series.breakdown_step,
        "drift": series.drift,
        "fit": fit,
    }
    paths = [
        write_series_csv(series, os.path.join(out_dir, "series.csv")),
        write_json(payload, os.path.join(out_dir, "fit.json")),
    ]
    echo = {
        "c": args.c,
        "seed": args.seed,
        "realization": args.realization,
        "n": args.n,
        "mode": args.mode,
        "gamma_grid": list(grid),
        "tail_start": args.tail_start,
        **_mode_options(args),
    }
    write_manifest("series", echo, paths, out_dir)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    if not 1 <= args.n <= ORACLE_MAX_N:
        raise ConfigError(f"--n must be between 1 and {ORACLE_MAX_N}, got {args.n}")
    if args.seeds < 1:
        raise ConfigError(f"--seeds must be at least 1, got {args.seeds}")

    failures = 0
    for c in args.c_list:
        for seed in range(1, args.seeds + 1):
            discrepancy = engine_discrepancy(PotentialField(c=c, seed=seed), args.n, args.box_radius)
            passed = discrepancy <= args.tolerance
            failures += not passed
            print(f"c={c:g} seed={seed} n={args.n} max|dD|={discrepancy:.3e} {'ok' if passed else 'FAIL'}")

    if failures:
        logger.error(f"{failures} case(s) exceed tolerance {args.tolerance:g}")
        return EXIT_FAILURE
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (None, 0) else EXIT_USAGE

    try:
        config.configure_logging(args.log_level)
    except ValueError as exc:
        print(f"krylab: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        return args.handler(args)
    except (KrylovBreakdownError, NumericalDegeneracyError) as exc:
        logger.error(str(exc))
        return EXIT_FAILURE
    except (KrylabError, ValidationError) as exc:
        logger.error(f"invalid arguments: {exc}")
        return EXIT_USAGE
    except OSError as exc:
        logger.error(f"I/O failure: {exc}")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
