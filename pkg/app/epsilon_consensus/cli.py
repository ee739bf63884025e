import argparse
import functools
import sys
from typing import Callable, List, Optional

from . import EpsilonConsensus
from .core.config import ConfigParser
from .core.exceptions import (AssumptionViolation, ConfigurationError, GraphError,
                              SaddlePointError, TraceFormatError, ValidationError)
from .core.schedule import check_schedule
from .core.simulator import Simulator
from .core.trace import summarize
from .core.types import CheckMode
from .utils.helpers import format_interval, format_sig, format_vector

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ASSUMPTION = 3
EXIT_SADDLE = 4


def _guarded(command: Callable[..., int]) -> Callable[..., int]:
    """Map library exceptions to exit codes"""
    @functools.wraps(command)
    def wrapper(*args, **kwargs) -> int:
        try:
            return command(*args, **kwargs)
        except AssumptionViolation as e:
            print(f"✗ {e}")
            return EXIT_ASSUMPTION
        except SaddlePointError as e:
            print(f"✗ Saddle point construction failed: {e}")
            return EXIT_SADDLE
        except (ConfigurationError, GraphError, ValidationError, TraceFormatError) as e:
            print(f"✗ Configuration error: {e}")
            return EXIT_CONFIG
    return wrapper


def _load(config_path: str, iters: Optional[int] = None, quiet: bool = False) -> EpsilonConsensus:
    overrides = {'iters': iters}
    if quiet:
        overrides['logging.enabled'] = False
    return EpsilonConsensus(config_path, **overrides)


@_guarded
def cmd_run(config_path: str, out: Optional[str] = None,
            iters: Optional[int] = None, quiet: bool = False) -> int:
    """Run an experiment and write its trace"""
    lib = _load(config_path, iters, quiet)
    output = out or lib.config.output
    result = lib.run(output=output)

    summary = summarize(result.trace)
    print(f"final residual: {format_sig(summary['final_residual'])}  "
          f"consensus error: {format_sig(summary['final_consensus_error'])}  "
          f"iterations: {summary['iterations']}  "
          f"wall time: {format_sig(result.wall_time)} s")
    crossing = result.crossing(0.1)
    if crossing is not None:
        print(f"within 0.1 of x* from k = {crossing}")
    print(f"✓ Trace written to {output}")
    return EXIT_OK


@_guarded
def cmd_check(config_path: str, quiet: bool = False) -> int:
    """Print schedule verdicts, connectivity, diameter, minimum D and the feasible set"""
    overrides = {'logging.enabled': False} if quiet else {}
    config = ConfigParser(config_path).override(**overrides).build()

    for mode in CheckMode:
        print(check_schedule(config.alpha, config.eps, mode))

    graph = config.build_graph()
    if not graph.is_connected():
        components = [[i + 1 for i in c] for c in graph.components()]
        print(f"connected: no (components {components})")
        return EXIT_ASSUMPTION

    report = Simulator(config).check()
    feasible = report['feasible_set']
    print("connected: yes")
    print(f"diameter: {report['diameter']}")
    print(f"min D: {report['min_rounds']}")
    if feasible is not None:
        if feasible.dimension == 1:
            print(f"X = {format_interval(feasible.lower[0], feasible.upper[0])}")
        else:
            print(f"X = {format_vector(feasible.lower)} x {format_vector(feasible.upper)}")
    if not report['interior']:
        print("warning: X has an empty interior")
    return EXIT_OK


@_guarded
def cmd_reference(config_path: str, quiet: bool = False) -> int:
    """Print x*, f*, the mean-zero v* and the multipliers n"""
    lib = _load(config_path, quiet=quiet)
    saddle = lib.reference()

    print(f"x* = {format_sig(saddle.point[0])}")
    print(f"f* = {format_sig(saddle.f_star)}")
    print(f"v* = {format_vector(saddle.v_star[:, 0])}")
    print(f"n = {format_vector(saddle.multipliers)}")
    return EXIT_OK


@_guarded
def cmd_compare(config_path_a: str, config_path_b: str, out: Optional[str] = None,
                iters: Optional[int] = None, quiet: bool = False) -> int:
    """Run two experiments on the same setup and compare their residuals"""
    lib_a = _load(config_path_a, iters, quiet)
    lib_b = _load(config_path_b, iters, quiet)
    output = out or 'compare.csv'
    comparison = lib_a.compare(lib_b, output=output)

    for label in ('a', 'b'):
        result = comparison[label]
        print(f"{label}: {result.variant}  "
              f"overshoot: {format_sig(comparison['overshoot_' + label])}  "
              f"final residual: {format_sig(result.final_residual)}")
    print(f"✓ Residuals written to {output}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='epsilon-consensus',
        description="Distributed primal-dual eps-subgradient simulator",
        formatter_class=argparse.RawDescriptionHelpFormatter
    )

    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    run_parser = subparsers.add_parser('run', help='Run an experiment and write its trace')
    run_parser.add_argument('config_path', help='Path to configuration file')
    run_parser.add_argument('--out', help='Trace CSV path (default: the config\'s output key)')
    run_parser.add_argument('--iters', type=int, help='Override the number of steps')

    check_parser = subparsers.add_parser('check', help='Check schedules and assumptions')
    check_parser.add_argument('config_path', help='Path to configuration file')

    reference_parser = subparsers.add_parser('reference', help='Compute the reference saddle point')
    reference_parser.add_argument('config_path', help='Path to configuration file')

    compare_parser = subparsers.add_parser('compare', help='Compare two experiments')
    compare_parser.add_argument('config_path_a', help='First configuration file')
    compare_parser.add_argument('config_path_b', help='Second configuration file')
    compare_parser.add_argument('--out', help='Joined residual CSV path (default: compare.csv)')
    compare_parser.add_argument('--iters', type=int, help='Override the number of steps')

    for sub in (run_parser, check_parser, reference_parser, compare_parser):
        sub.add_argument('--quiet', action='store_true', help='Disable log events')
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """CLI entry point"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code else EXIT_OK

    if args.command == 'run':
        return cmd_run(args.config_path, args.out, args.iters, args.quiet)
    elif args.command == 'check':
        return cmd_check(args.config_path, args.quiet)
    elif args.command == 'reference':
        return cmd_reference(args.config_path, args.quiet)
    elif args.command == 'compare':
        return cmd_compare(args.config_path_a, args.config_path_b, args.out, args.iters, args.quiet)
    else:
        parser.print_help()
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
