"""export: turn saved JSON artifacts back into CSV without re-running anything."""

from __future__ import annotations

import argparse
from pathlib import Path


def add_parser(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "export",
        parents=parents,
        help="Convert saved records or results to CSV",
        description=(
            "--record writes the per-epoch CSV of a training record; --result writes "
            "table.csv and curves.csv of an experiment result.json into a directory."
        ),
    )
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--record", help="TrainRecord JSON written by train")
    source.add_argument("--result", help="result.json written by experiment")
    parser.add_argument("--out", required=True, help="CSV file (--record) or directory (--result)")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config) -> int:
    from ..core.utils import safe_print
    from ..experiments import compare_table, load_results, write_curves_csv
    from ..training import TrainRecord

    if args.record:
        record = TrainRecord.load(args.record)
        record.write_csv(args.out)
        safe_print(f"✅ {len(record.kl_curve)} epochs written to {args.out}")
        return 0

    results = load_results(args.result)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    compare_table(results).write_csv(out / "table.csv")
    write_curves_csv(results, out / "curves.csv")
    safe_print(f"✅ table.csv and curves.csv written to {out}")
    return 0
