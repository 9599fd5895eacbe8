#!/usr/bin/env python3
"""
Index Coding Workbench CLI
Command-line interface for broadcast-rate programs, code construction and checks
"""

import argparse
import sys
import traceback

from config import Config
from src.errors import CapExceededError, CodeConstructionError, FieldError, IndexCodingError, InputError
from src.optimization.cover_programs import PROGRAMS
from src.workflows.index_coding_workflow import (
    BUILD_SCHEMES,
    ORACLES,
    build_step,
    format_gic,
    format_oracles,
    format_rate_table,
    format_simulation,
    format_verification,
    gic_assign_step,
    gic_check_step,
    gic_generate_step,
    gic_roundtrip_step,
    oracle_step,
    rate_step,
    simulate_step,
    verify_step,
)

EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_CAP = 3
EXIT_FAILED = 4


class WorkbenchArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with code 1"""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"[ERROR] {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def print_banner(args=None):
    """Print CLI banner"""
    if args is not None and getattr(args, "json", False):
        return
    print("\n" + "="*70)
    print("INDEX CODING WORKBENCH CLI")
    print("="*70 + "\n")


def emit(args, report, text):
    """Print the report (text or JSON) and save it when --report is given"""
    if args.json:
        print(report.machine_readable())
    else:
        print(text)
    if args.report:
        report.save(args.report)
        if not args.json:
            print(f"\n[+] Report written to {args.report}")
    if not report.success:
        if not args.json:
            print("\n[!] Check failed")
        sys.exit(EXIT_FAILED)


def cmd_rate(args):
    """Compare covering-program optima"""
    print_banner(args)
    schemes = [s.strip() for s in args.schemes.split(",")] if args.schemes else None
    if not args.json:
        print(f"[*] Solving programs for {args.graph}\n")
    report = rate_step(
        args.graph,
        schemes=schemes,
        fractional=args.fractional,
        recursive=args.recursive,
        cap=args.cap,
        prune=False if args.no_prune else None,
        dot_path=args.dot,
    )
    emit(args, report, format_rate_table(report))


def cmd_build(args):
    """Build and verify an encoding matrix"""
    print_banner(args)
    if not args.json:
        print(f"[*] Building {args.scheme} code for {args.graph} (seed {args.seed})\n")
    report = build_step(args.graph, args.scheme, args.seed, out=args.out, cap=args.cap)
    text = format_verification(report)
    if args.out:
        text += f"\n\n[OK] Matrix written to {args.out}"
    emit(args, report, text)


def cmd_verify(args):
    """Check the alignment condition of a saved matrix"""
    print_banner(args)
    report = verify_step(args.graph, args.matrix)
    emit(args, report, format_verification(report))


def cmd_simulate(args):
    """Encode and decode random data"""
    print_banner(args)
    report = simulate_step(args.graph, args.matrix, args.trials, args.seed, args.width)
    emit(args, report, format_simulation(report))


def cmd_gic(args):
    """GIC structure commands"""
    print_banner(args)
    if args.gic_command == "check":
        report = gic_check_step(args.file)
    elif args.gic_command == "assign":
        report = gic_assign_step(args.file, args.q, args.seed)
    elif args.gic_command == "roundtrip":
        report = gic_roundtrip_step(args.file, args.q, args.seed, args.trials)
    else:
        report, text = gic_generate_step(args.n, args.k, args.max_path_len, args.seed, args.out)
        if not args.out and not args.json:
            print(text)
    emit(args, report, format_gic(report))


def cmd_oracle(args):
    """Brute-force reference values"""
    print_banner(args)
    report = oracle_step(args.graph, args.which, q=args.q, program=args.program)
    emit(args, report, format_oracles(report))


def cmd_config(args):
    """Show configuration status"""
    print_banner()
    Config.print_status()
    print()


def cmd_examples(args):
    """Show usage examples"""
    print_banner()
    print("USAGE EXAMPLES\n")

    examples = [
        ("Compare program optima", "python cli.py rate tests/fixtures/six_vertex.graph --fractional"),
        ("Add recursive optima", "python cli.py rate tests/fixtures/six_vertex.graph --recursive"),
        ("Export the cover as DOT", "python cli.py rate tests/fixtures/six_vertex.graph --dot six_vertex.dot"),
        ("Build a code matrix", "python cli.py build tests/fixtures/six_vertex.graph --scheme main --seed 7 --out six_vertex.json"),
        ("Verify a matrix", "python cli.py verify tests/fixtures/six_vertex.graph six_vertex.json"),
        ("Simulate broadcasts", "python cli.py simulate tests/fixtures/six_vertex.graph six_vertex.json --trials 100"),
        ("Check a GIC structure", "python cli.py gic check tests/fixtures/shared_fan.gic"),
        ("GIC round trip", "python cli.py gic roundtrip tests/fixtures/six_cycle.gic --q 7 --trials 20"),
        ("Generate a GIC", "python cli.py gic generate --n 5 --k 2 --max-path-len 3 --seed 1 --out g.gic"),
        ("Run oracles", "python cli.py oracle tests/fixtures/c5_bidirectional.graph --which all"),
        ("Machine-readable output", "python cli.py rate tests/fixtures/k3.graph --json"),
        ("Check configuration", "python cli.py config"),
    ]

    for i, (desc, cmd) in enumerate(examples, 1):
        print(f"{i}. {desc}")
        print(f"   {cmd}\n")

    print("="*70)
    print("For more help: python cli.py --help")
    print("For command help: python cli.py rate --help")
    print("="*70 + "\n")


def _output_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true', help='Print the machine-readable report')
    common.add_argument('--report', metavar='PATH', help='Write the machine-readable report to a file')
    common.add_argument('--verbose', '-v', action='store_true', help='Debug logging and full tracebacks')
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = WorkbenchArgumentParser(
        description="Index Coding Workbench - local partial clique covers, code construction and GIC codes",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s rate graph.txt --fractional
  %(prog)s build graph.txt --scheme main --out g.json
  %(prog)s verify graph.txt g.json
  %(prog)s gic roundtrip structure.gic --q 7
  %(prog)s oracle graph.txt --which minrank
  %(prog)s examples
        """
    )
    parser.add_argument('--version', action='version', version='%(prog)s 1.0.0')

    common = _output_options()
    subparsers = parser.add_subparsers(dest='command', help='Available commands', parser_class=WorkbenchArgumentParser)

    # Rate command
    rate_parser = subparsers.add_parser('rate', parents=[common], help='Compare covering-program optima')
    rate_parser.add_argument('graph', help='Graph file')
    rate_parser.add_argument(
        '--schemes',
        metavar='LIST',
        help=f"Comma-separated programs (default: all integer programs; any of {', '.join(PROGRAMS)})"
    )
    rate_parser.add_argument('--fractional', action='store_true', help='Also solve the LP relaxations')
    rate_parser.add_argument('--recursive', action='store_true', help='Also solve the recursive programs')
    rate_parser.add_argument('--cap', type=int, help=f'Maximum n for every program run (default: {Config.SUBSET_CAP}, recursive {Config.RECURSIVE_CAP})')
    rate_parser.add_argument('--no-prune', action='store_true', help='Disable dominated-set elimination')
    rate_parser.add_argument('--dot', metavar='PATH', help='Write the graph and cover as DOT')
    rate_parser.set_defaults(func=cmd_rate)

    # Build command
    build_parser_ = subparsers.add_parser('build', parents=[common], help='Build an encoding matrix')
    build_parser_.add_argument('graph', help='Graph file')
    build_parser_.add_argument('--scheme', choices=BUILD_SCHEMES, default='main', help='Construction (default: main)')
    build_parser_.add_argument('--seed', type=int, default=Config.DEFAULT_SEED, help='Construction seed')
    build_parser_.add_argument('--out', metavar='PATH', help='Matrix file to write (JSON)')
    build_parser_.add_argument('--cap', type=int, help='Maximum n for the underlying program')
    build_parser_.set_defaults(func=cmd_build)

    # Verify command
    verify_parser = subparsers.add_parser('verify', parents=[common], help='Check a matrix against a graph')
    verify_parser.add_argument('graph', help='Graph file')
    verify_parser.add_argument('matrix', help='Matrix file (JSON)')
    verify_parser.set_defaults(func=cmd_verify)

    # Simulate command
    simulate_parser = subparsers.add_parser('simulate', parents=[common], help='Encode/decode random data')
    simulate_parser.add_argument('graph', help='Graph file')
    simulate_parser.add_argument('matrix', help='Matrix file (JSON)')
    simulate_parser.add_argument('--trials', type=int, default=10, help='Number of trials (default: 10)')
    simulate_parser.add_argument('--seed', type=int, default=Config.DEFAULT_SEED, help='Data seed')
    simulate_parser.add_argument('--width', type=int, default=1, help='Payload columns per message (default: 1)')
    simulate_parser.set_defaults(func=cmd_simulate)

    # GIC commands
    gic_parser = subparsers.add_parser('gic', help='(k,n)-GIC structures')
    gic_sub = gic_parser.add_subparsers(dest='gic_command', parser_class=WorkbenchArgumentParser)
    gic_sub.required = True

    check_parser = gic_sub.add_parser('check', parents=[common], help='Validate a GIC file')
    check_parser.add_argument('file', help='GIC file')

    assign_parser = gic_sub.add_parser('assign', parents=[common], help='Show the u vectors')
    assign_parser.add_argument('file', help='GIC file')

    roundtrip_parser = gic_sub.add_parser('roundtrip', parents=[common], help='Encode and decode random data')
    roundtrip_parser.add_argument('file', help='GIC file')
    roundtrip_parser.add_argument('--trials', type=int, default=1, help='Number of trials (default: 1)')

    for sub in (assign_parser, roundtrip_parser):
        sub.add_argument('--q', type=int, default=7, help='Field size (prime, default: 7)')
        sub.add_argument('--seed', type=int, default=Config.DEFAULT_SEED, help='Code seed')

    generate_parser = gic_sub.add_parser('generate', parents=[common], help='Generate a random valid structure')
    generate_parser.add_argument('--n', type=int, required=True, help='Inner vertices')
    generate_parser.add_argument('--k', type=int, default=0, help='Slack parameter (default: 0)')
    generate_parser.add_argument('--max-path-len', type=int, default=1, help='Longest P-path (default: 1)')
    generate_parser.add_argument('--seed', type=int, default=Config.DEFAULT_SEED, help='Generator seed')
    generate_parser.add_argument('--out', metavar='PATH', help='GIC file to write')
    gic_parser.set_defaults(func=cmd_gic)

    # Oracle command
    oracle_parser = subparsers.add_parser('oracle', parents=[common], help='Brute-force reference values')
    oracle_parser.add_argument('graph', help='Graph file')
    oracle_parser.add_argument('--which', choices=ORACLES, default='all', help='Oracle (default: all)')
    oracle_parser.add_argument('--q', type=int, default=2, help='Minrank field size (default: 2)')
    oracle_parser.add_argument('--program', choices=PROGRAMS, default='local_partial', help='Partition-oracle program')
    oracle_parser.set_defaults(func=cmd_oracle)

    # Config command
    config_parser = subparsers.add_parser('config', help='Show configuration status')
    config_parser.set_defaults(func=cmd_config)

    # Examples command
    examples_parser = subparsers.add_parser('examples', help='Show usage examples')
    examples_parser.set_defaults(func=cmd_examples)

    return parser


def main(argv=None):
    """Main CLI entry point"""
    parser = build_parser()
    args = parser.parse_args(argv)

    # Show help if no command provided
    if not args.command:
        parser.print_help()
        sys.exit(0)

    verbose = getattr(args, 'verbose', False)
    Config.configure_logging('DEBUG' if verbose else None)

    # Execute command
    try:
        args.func(args)
    except (InputError, FieldError, FileNotFoundError) as e:
        print(f"\n[ERROR] {e}", file=sys.stderr)
        if verbose:
            traceback.print_exc()
        sys.exit(EXIT_INPUT)
    except CapExceededError as e:
        print(f"\n[ERROR] {e}", file=sys.stderr)
        sys.exit(EXIT_CAP)
    except CodeConstructionError as e:
        print(f"\n[ERROR] {e}", file=sys.stderr)
        for key, value in e.diagnostics.items():
            print(f"   {key}: {value}", file=sys.stderr)
        if verbose:
            traceback.print_exc()
        sys.exit(EXIT_FAILED)
    except IndexCodingError as e:
        print(f"\n[ERROR] {e}", file=sys.stderr)
        if verbose:
            traceback.print_exc()
        sys.exit(EXIT_FAILED)


if __name__ == "__main__":
    main()
