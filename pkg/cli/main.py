#!/usr/bin/env python3
"""Command-line interface for the FPU wave toolkit.

Settings are layered: ``utils.config.Config`` defaults, then ``--config FILE``
(key = value lines), then flags. Exit codes: 0 success, 1 numerical failure,
2 usage or configuration error.

Usage:
    python -m cli limit-ode --m 2 --xmax 50 --step 1e-3
    python -m cli solve --m 2 --delta 0.1 --X 6 --h 0.001953125
    python -m cli sweep --m 2 --deltas 0.2,0.1,0.05,0.025 --report sweep.csv
    python -m cli linearize --wave outputs/wave_m2_d0.1.json --a-frac 0.5
    python -m cli rescale --wave outputs/wave_m2_d0.1.json
    python -m cli simulate --wave outputs/wave_m2_d0.1.json --T-transits 5
    python -m cli lemma4 --deltas 0.2,0.1,0.05 --trials 20
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from cli import commands
from models.run_config import RunConfig
from utils.config_file import read_config_file
from utils.errors import ConfigurationError, FpuWaveError, NumericalFailure
from utils.logging_config import log_exception, reconfigure_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2


def _delta_list(text: str) -> List[float]:
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key = value configuration file")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Logging level")
    parser.add_argument("--out", dest="output_dir", help="Output directory (relative to FPU_OUTPUT_ROOT)")


def _add_grid(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--X", dest="half_width", type=float, help="Grid half width (multiple of 1/2)")
    parser.add_argument("--h", dest="spacing", type=float, help="Grid spacing 1/(2K)")
    parser.add_argument("--tol", type=float, help="Fixed-point tolerance")
    parser.add_argument("--max-iter", dest="max_iter", type=int, help="Fixed-point iteration cap")


def _add_weight(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--a-frac", dest="a_frac", type=float, help="Weight as a fraction of a_c")
    group.add_argument("--a", dest="a_abs", type=float, help="Absolute weight")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Solitary waves of FPU chains with a singular potential",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__.split("Usage:")[1],
    )
    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    limit = subparsers.add_parser("limit-ode", help="Tabulate the limit ODE and its constants")
    _add_common(limit)
    limit.add_argument("--m", type=float, required=True, help="Potential exponent (> 1)")
    limit.add_argument("--xmax", dest="xbar_max", type=float, help="Table extent")
    limit.add_argument("--step", dest="ode_step", type=float, help="RK4 step")

    solve = subparsers.add_parser("solve", help="Compute solitary waves")
    _add_common(solve)
    solve.add_argument("--m", type=float, help="Potential exponent (> 1)")
    solve.add_argument("--delta", dest="deltas", type=_delta_list, help="Norm defect(s), comma separated")
    _add_grid(solve)

    sweep = subparsers.add_parser("sweep", help="Convergence and kernel report over a delta sweep")
    _add_common(sweep)
    sweep.add_argument("--m", type=float, help="Potential exponent (> 1)")
    sweep.add_argument("--deltas", type=_delta_list, help="Comma-separated deltas")
    sweep.add_argument("--report", help="Report CSV path")
    sweep.add_argument("--append", action="store_true", help="Merge into an existing report")
    sweep.add_argument("--workers", type=int, help="Parallel deltas")
    _add_grid(sweep)
    _add_weight(sweep)
    sweep.add_argument("--ell-mode", dest="ell_mode", choices=["mu", "delta"], help="Rescaling length")

    linearize = subparsers.add_parser("linearize", help="Essential spectrum and kernel scan")
    _add_common(linearize)
    linearize.add_argument("--wave", help="Wave JSON written by solve (else solved from --delta)")
    linearize.add_argument("--m", type=float, help="Potential exponent (> 1)")
    linearize.add_argument("--delta", dest="deltas", type=_delta_list, help="Norm defect")
    linearize.add_argument("--kmax", type=float, default=None, help="Curve parameter range")
    linearize.add_argument("--nk", type=int, default=None, help="Curve samples (odd)")
    _add_grid(linearize)
    _add_weight(linearize)

    rescale = subparsers.add_parser("rescale", help="Rescaled kernel fit of a saved wave")
    _add_common(rescale)
    rescale.add_argument("--wave", required=True, help="Wave JSON written by solve")
    rescale.add_argument("--ell-mode", dest="ell_mode", choices=["mu", "delta"], help="Rescaling length")
    rescale.add_argument("--xmax", dest="xbar_max", type=float, help="Limit ODE table extent")
    rescale.add_argument("--step", dest="ode_step", type=float, help="Limit ODE step")
    _add_weight(rescale)

    simulate = subparsers.add_parser("simulate", help="Lattice dynamics of a wave")
    _add_common(simulate)
    simulate.add_argument("--wave", help="Wave JSON written by solve (else solved from --delta)")
    simulate.add_argument("--m", type=float, help="Potential exponent (> 1)")
    simulate.add_argument("--delta", dest="deltas", type=_delta_list, help="Norm defect")
    simulate.add_argument("--T-transits", dest="transits", type=float, help="Horizon in transits")
    simulate.add_argument("--dt-fraction", dest="dt_fraction", type=float, help="Step as a fraction of dt_max")
    _add_grid(simulate)

    lemma4 = subparsers.add_parser("lemma4", help="Empirical Green's function constants")
    _add_common(lemma4)
    lemma4.add_argument("--deltas", type=_delta_list, help="Comma-separated deltas")
    lemma4.add_argument("--trials", type=int, help="Random test functions per delta")
    lemma4.add_argument("--seed", type=int, help="Base seed")
    lemma4.add_argument("--weight", type=float, default=1.0, help="Weight a")
    lemma4.add_argument("--spacing", dest="rescaled_spacing", type=float, default=0.05,
                        help="Rescaled grid spacing (independent of the lattice grid)")

    return parser


FLAG_FIELDS = (
    "m", "deltas", "half_width", "tol", "max_iter", "xbar_max", "ode_step", "seed", "trials",
    "transits", "dt_fraction", "output_dir", "workers", "ell_mode",
)


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Build the RunConfig from defaults, the config file and flags.

    Raises:
        ConfigurationError: On file errors or a spacing that is not 1/(2K).
        ValidationError: On out-of-range values.
    """
    values: Dict[str, Any] = {}
    if getattr(args, "config", None):
        values.update(read_config_file(args.config, RunConfig.model_fields.keys()))

    for name in FLAG_FIELDS:
        value = getattr(args, name, None)
        if value is not None:
            values[name] = value

    spacing = getattr(args, "spacing", None)
    if spacing is not None:
        if spacing <= 0.0:
            raise ConfigurationError(f"Grid spacing must be positive, got {spacing}")
        K = 1.0 / (2.0 * spacing)
        if abs(K - round(K)) > 1e-9 * K:
            raise ConfigurationError(f"Grid spacing {spacing} is not of the form 1/(2K)")
        values["nodes_per_half"] = int(round(K))

    if getattr(args, "a_frac", None) is not None:
        values.update(a_policy="fraction", a_value=args.a_frac)
    elif getattr(args, "a_abs", None) is not None:
        values.update(a_policy="absolute", a_value=args.a_abs)

    return RunConfig(**values)


def dispatch(args: argparse.Namespace, run_config: RunConfig) -> Dict[str, Any]:
    if args.command == "limit-ode":
        return commands.limit_ode_command(run_config)
    if args.command == "solve":
        return commands.solve_command(run_config)
    if args.command == "sweep":
        return commands.sweep_command(run_config, report=args.report, append=args.append)
    if args.command == "linearize":
        extra = {k: v for k, v in (("kmax", args.kmax), ("nk", args.nk)) if v is not None}
        return commands.linearize_command(run_config, wave_path=args.wave, **extra)
    if args.command == "rescale":
        return commands.rescale_command(run_config, wave_path=args.wave)
    if args.command == "simulate":
        return commands.simulate_command(run_config, wave_path=args.wave)
    if args.command == "lemma4":
        return commands.lemma4_command(run_config, a=args.weight, spacing=args.rescaled_spacing)
    raise ConfigurationError(f"Unknown command: {args.command}")


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    if args.log_level:
        reconfigure_logging(log_level=args.log_level)

    try:
        run_config = resolve_config(args)
        written = dispatch(args, run_config)
    except (ConfigurationError, ValidationError) as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_USAGE
    except NumericalFailure as e:
        log_exception(logger, f"{args.command} failed", e)
        return EXIT_NUMERICAL
    except FpuWaveError as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_NUMERICAL
    except KeyboardInterrupt:
        print("\nOperation cancelled by user")
        return EXIT_NUMERICAL

    for name, path in written.items():
        print(f"{name}: {path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
