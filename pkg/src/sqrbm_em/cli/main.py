#!/usr/bin/env python3
"""
Main CLI entry point for sqrbm-em.
Provides a unified command interface with subcommands.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence

from ..version import PRNG_ALGORITHM, __version__

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERIC = 4
EXIT_VERIFY = 5

COMMANDS = ("gen-data", "train", "experiment", "verify", "export")


def _load_command(name: str):
    """Command modules keep numerical imports inside their handlers."""
    if name == "gen-data":
        from . import gen_data as module
    elif name == "train":
        from . import train as module
    elif name == "experiment":
        from . import experiment as module
    elif name == "verify":
        from . import verify as module
    else:
        from . import export as module
    return module


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--quiet",
        action="store_true",
        default=argparse.SUPPRESS,
        help="Only warnings and errors; no summaries on stdout",
    )
    common.add_argument(
        "-v",
        "--verbose",
        action="store_true",
        default=argparse.SUPPRESS,
        help="Debug logging (one event per epoch)",
    )

    parser = argparse.ArgumentParser(
        prog="sqrbm-em",
        description="sqrbm-em - exact em and gradient-descent training of semi-quantum RBMs",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  sqrbm-em gen-data --kind parity --n 4 --out parity.json
  sqrbm-em train --data parity.json --n-hidden 2 --algo em --out run.json
  sqrbm-em verify --n 2 --m 2 --trials 5
  sqrbm-em experiment --preset paper --out results/ --workers 4
  sqrbm-em export --record run.json --out run.csv

Exit codes: 0 success, 2 usage, 3 I/O, 4 numeric, 5 verification failure.
        """,
    )
    parser.add_argument("--quiet", action="store_true", default=False, help=argparse.SUPPRESS)
    parser.add_argument("-v", "--verbose", action="store_true", default=False, help=argparse.SUPPRESS)
    parser.add_argument(
        "--version",
        action="version",
        version=f"sqrbm-em {__version__} (PRNG: {PRNG_ALGORITHM})",
    )

    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)
    for name in COMMANDS:
        _load_command(name).add_parser(subparsers, [common])
    return parser


def _configure(args: argparse.Namespace):
    from ..core.config import Config
    from ..core.utils import set_quiet, setup_logging

    config = Config()
    if args.quiet:
        level = logging.WARNING
    elif args.verbose:
        level = logging.DEBUG
    else:
        level = config.resolved_log_level
    set_quiet(args.quiet)
    setup_logging(level, log_to_file=bool(config.log_file), unified_file=config.log_file)
    return config


def main(argv: Sequence[str] | None = None) -> int:
    """Main CLI function with subcommands; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    from ..core.errors import (
        DivergenceInfiniteError,
        DomainError,
        ExperimentError,
        NumericError,
        ResourceError,
    )
    from ..core.utils import safe_print

    try:
        config = _configure(args)
        return int(args.handler(args, config))
    except KeyboardInterrupt:
        safe_print("\n❌ Operation cancelled by user", file=sys.stderr)
        return 1
    except (DomainError, ResourceError) as e:
        safe_print(f"❌ Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        safe_print(f"❌ I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    except (NumericError, DivergenceInfiniteError, ExperimentError) as e:
        safe_print(f"❌ Numeric failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
