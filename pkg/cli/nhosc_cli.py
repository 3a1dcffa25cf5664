#!/usr/bin/env python3
"""
🌀 nhosc CLI - Non-Hermitian neutrino oscillation command line
Date: 03/09/2025
Description: Regime maps, probability sweeps over L and L/E, and the
cross-validation suite. Exit codes: 0 success, 1 validation failure,
2 usage error.
"""

import argparse
import sys
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

# Add parent directory to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from rich.console import Console

from automation.config_loader import ConfigLoader
from automation.cross_validation import default_validation_grid, run_validation
from automation.oracle import IntegrationConfig
from automation.scans import phase_map, probability_sweep, resolve_params, rows_to_frame, write_table
from models.errors import NhoscError
from models.oscillation import OscillationParams
from models.run_config import OutputFormat, RunConfig
from utils.logger import add_log_file, set_log_level, setup_logger

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_USAGE = 2

logger = setup_logger('cli')


def cmd_phase_map(cfg: RunConfig) -> int:
    """κ–σ regime grid"""
    frame = phase_map(cfg)
    write_table(frame, cfg.output_path, cfg.output_format, metadata=cfg.to_dict())
    return EXIT_OK


def cmd_probability(cfg: RunConfig) -> int:
    """Probability sweep over L or L/E"""
    rows = probability_sweep(cfg)
    write_table(rows_to_frame(rows), cfg.output_path, cfg.output_format, metadata=cfg.to_dict())
    return EXIT_OK


def _validation_grid(cfg: RunConfig) -> Tuple[List[OscillationParams], List[float]]:
    """Default grid in the configured units mode, led by the configured point"""
    settings = cfg.validation
    p_grid, t_grid = default_validation_grid(settings.points, settings.times, settings.seed, mode=cfg.units_mode)
    if cfg.params.uses_angles():
        logger.info("alpha / beta parameters have no (kappa, phi) form; validating the default grid")
        return p_grid, t_grid
    return [resolve_params(cfg.params)] + p_grid, t_grid


def cmd_validate(cfg: RunConfig) -> int:
    """Invariant and cross-validation suite; exit 0 iff every criterion passes"""
    settings = cfg.validation
    p_grid, t_grid = _validation_grid(cfg)
    logger.info(f"Validating {len(p_grid)} parameter points × {len(t_grid)} times")
    report = run_validation(p_grid, t_grid, IntegrationConfig(steps_per_period=cfg.steps_per_period),
                            inject_fault=settings.inject_fault, draws=settings.points, seed=settings.seed)

    suffix = 'json' if cfg.output_format is OutputFormat.JSON else 'csv'
    report_path = cfg.output_path or (
        Path("reports") / f"nhosc_validation_{datetime.now().strftime('%Y%m%d_%H%M%S')}.{suffix}")
    if cfg.output_format is OutputFormat.JSON:
        report.write(report_path)
    else:
        write_table(report.to_frame(), report_path, OutputFormat.CSV)

    console = Console()
    report.print_summary(console)
    console.print(f"Report saved: {report_path}")

    if report.all_passed:
        return EXIT_OK
    for name in report.failed_criteria():
        print(f"FAILED {name}: max |Δ| = {report.max_abs_dev[name]:.3e}", file=sys.stderr)
    if report.failures:
        print(f"FAILED {len(report.failures)} point evaluations", file=sys.stderr)
    return EXIT_VALIDATION_FAILED


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group('configuration')
    group.add_argument('--config', help='Run configuration file (.json, .yaml)')
    group.add_argument('--preset', help='Figure preset from config/figure_presets.yaml')
    group.add_argument('--out', help='Output file (stdout when omitted)')
    group.add_argument('--format', choices=['csv', 'json'], help='Output format')
    group.add_argument('--units-mode', choices=['paper', 'exact'],
                       help='Phase factor: rounded 1.27 or exact 1/(4ħc)')

    physics = common.add_argument_group('parameters (eV², GeV, angles as decimals or pi fractions)')
    for flag in ('--dm2', '--kappa', '--sigma', '--mbar2'):
        physics.add_argument(flag, type=float)
    physics.add_argument('--energy', type=float, help='Neutrino energy in GeV')
    for flag in ('--theta', '--phi', '--chi', '--tau', '--tau-p', '--alpha', '--beta'):
        physics.add_argument(flag)
    return common


def _logging_parser() -> argparse.ArgumentParser:
    logging_args = argparse.ArgumentParser(add_help=False)
    logging_args.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                              help='Log level (default from NHOSC_LOG_LEVEL)')
    logging_args.add_argument('--log-file', help='Also log to this file')
    return logging_args


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='nhosc',
        description="Two-flavor neutrino oscillations with non-Hermitian Hamiltonians",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Regime map in the kappa-sigma plane
  nhosc phase-map --preset fig1 --out fig1.csv

  # G-metric probabilities along L (PT-unbroken)
  nhosc probability --preset fig2 --out fig2.csv

  # Density-matrix probabilities over L/E, exact phase factor
  nhosc probability --method density-analytic --scan LE --theta pi/3 \\
        --alpha pi/6 --beta pi/3 --stop 3000 --units-mode exact

  # Invariants and cross-validation with a JSON report
  nhosc validate --points 100 --out reports/validation.json

  # Same suite in paper units around the fig2 point, criteria table as CSV
  nhosc validate --preset fig2 --units-mode paper --format csv --out validation.csv
        """
    )
    common = _common_parser()
    logging_args = _logging_parser()
    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    map_parser = subparsers.add_parser('phase-map', parents=[common, logging_args],
                                       help='Regime grid in the kappa-sigma plane')
    map_parser.add_argument('--kappa-range', nargs=2, type=float, metavar=('LOW', 'HIGH'))
    map_parser.add_argument('--sigma-range', nargs=2, type=float, metavar=('LOW', 'HIGH'))
    map_parser.add_argument('--samples', type=int, help='Grid points per axis')

    prob_parser = subparsers.add_parser('probability', parents=[common, logging_args],
                                        help='Probability sweep over L or L/E')
    prob_parser.add_argument('--method', choices=['g-metric', 'density-analytic',
                                                  'density-trace', 'density-rk4'])
    prob_parser.add_argument('--scan', choices=['L', 'LE'])
    prob_parser.add_argument('--start', type=float)
    prob_parser.add_argument('--stop', type=float)
    prob_parser.add_argument('--samples', type=int)
    prob_parser.add_argument('--vary-energy', action='store_const', const=True,
                             help='L/E sweeps: fix L at --baseline and vary E')
    prob_parser.add_argument('--baseline', type=float, help='Fixed baseline in km for --vary-energy')
    prob_parser.add_argument('--initial-states', choices=['eigenbasis', 'flavor'])
    prob_parser.add_argument('--static-metric', action='store_const', const=True,
                             help='Broken regime: time-independent G metric')
    prob_parser.add_argument('--appendix-verbatim', action='store_const', const=True,
                             help='Printed unit-converted density formula (paper mode)')
    prob_parser.add_argument('--steps-per-period', type=int, help='RK4 resolution')

    val_parser = subparsers.add_parser('validate', parents=[common, logging_args],
                                       help='Invariant checks and cross-validation of every path')
    val_parser.add_argument('--points', type=int, help='Random parameter draws (default 1000)')
    val_parser.add_argument('--times', type=int, help='Baselines per draw (default 10)')
    val_parser.add_argument('--seed', type=int)
    val_parser.add_argument('--steps-per-period', type=int, help='RK4 resolution')
    val_parser.add_argument('--inject-fault', action='store_const', const=True,
                            help='Perturb one closed form by 1e-3 (harness self-test)')
    val_parser.add_argument('--report', '-r', dest='out', help='Report output file (same as --out)')
    return parser


OVERRIDE_KEYS = (
    'out', 'format', 'units_mode', 'dm2', 'kappa', 'sigma', 'mbar2', 'energy',
    'theta', 'phi', 'chi', 'tau', 'tau_p', 'alpha', 'beta',
    'kappa_range', 'sigma_range', 'samples', 'method', 'scan', 'start', 'stop',
    'vary_energy', 'baseline', 'initial_states', 'static_metric',
    'appendix_verbatim', 'steps_per_period',
    'points', 'times', 'seed', 'inject_fault',
)

# validate writes a JSON report unless a format is configured
VALIDATE_DEFAULTS = {'format': 'json'}


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    values = {key: getattr(args, key, None) for key in OVERRIDE_KEYS}
    if args.command == 'phase-map':
        values['scan'] = 'kappa-sigma'
    return values


def _configure_logging(args: argparse.Namespace) -> None:
    if getattr(args, 'log_level', None):
        set_log_level(args.log_level)
    if getattr(args, 'log_file', None):
        add_log_file(Path(args.log_file))


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    _configure_logging(args)

    try:
        cfg = ConfigLoader().build(
            overrides=_overrides(args),
            preset=args.preset,
            config_file=Path(args.config) if args.config else None,
            defaults=VALIDATE_DEFAULTS if args.command == 'validate' else None,
        )
        if args.command == 'phase-map':
            return cmd_phase_map(cfg)
        if args.command == 'validate':
            return cmd_validate(cfg)
        return cmd_probability(cfg)

    except ValueError as e:
        # ConfigError, WrongRegimeError, NotPTSymmetricError, ... : usage errors
        logger.error(f"{args.command}: {e}")
        print(f"Error: {str(e)}", file=sys.stderr)
        return EXIT_USAGE
    except NhoscError as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"Error: {str(e)}", file=sys.stderr)
        return EXIT_VALIDATION_FAILED
    except KeyboardInterrupt:
        print("\nOperation cancelled by user", file=sys.stderr)
        return EXIT_VALIDATION_FAILED


if __name__ == '__main__':
    sys.exit(main())
