"""verify: cross-check every closed form against the dense oracle."""

from __future__ import annotations

import argparse
import sys


def add_parser(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "verify",
        parents=parents,
        help="Check closed forms against the dense oracle",
        description="Compare the closed-form model with brute-force dense matrices on random draws.",
    )
    parser.add_argument("--n", type=int, required=True, help="Visible units N")
    parser.add_argument("--m", type=int, required=True, help="Hidden units M")
    parser.add_argument("--trials", type=int, default=5, help="Random draws (default: 5)")
    parser.add_argument("--seed", type=int, default=0, help="PCG64 seed (default: 0)")
    parser.add_argument("--tol", type=float, help="Max absolute deviation (default: 1e-9)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config) -> int:
    from ..core.utils import safe_print
    from ..oracle import CHECKS, verify_against_oracle
    from .main import EXIT_VERIFY

    tolerance = args.tol if args.tol is not None else config.verify.tolerance
    if args.trials == 0:
        safe_print("⚠️ --trials 0: nothing to verify, passing vacuously", file=sys.stderr)

    report = verify_against_oracle(
        args.n,
        args.m,
        trials=args.trials,
        seed=args.seed,
        tolerance=tolerance,
        param_range=config.verify.param_range,
        max_qubits=config.verify.max_qubits,
    )
    if report.trials:
        safe_print(report.format_table())
        safe_print("")
        for check in CHECKS:
            safe_print(f"  {check:<18} max deviation {report.max_deviation(check):.3e}")

    if report.passed:
        safe_print(f"✅ All {report.trials} trials within {tolerance:g}")
        return 0
    safe_print(f"❌ Verification failed (tolerance {tolerance:g})", force=True)
    return EXIT_VERIFY
