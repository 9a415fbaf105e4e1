"""experiment: run a plan file (or a built-in preset) and write a results directory."""

from __future__ import annotations

import argparse


def add_parser(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "experiment",
        parents=parents,
        help="Run paired multi-run comparisons",
        description=(
            "Run every plan and write table.csv, curves.csv, curves.svg, result.json and "
            "manifest.json. Flags override values from the plan file."
        ),
    )
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--plan", help="Plan JSON file")
    source.add_argument("--preset", choices=["paper", "paper-rbm"], help="Built-in plan suite")
    parser.add_argument("--out", required=True, help="Results directory")
    parser.add_argument("--workers", type=int, help="Parallel runs (default: SQRBM_WORKERS or 1)")
    parser.add_argument("--runs", type=int, help="Override n_runs")
    parser.add_argument("--epochs", type=int, help="Override the outer epoch budget")
    parser.add_argument("--epochs-m", type=int, help="Override the inner m-step budget")
    parser.add_argument("--eta", type=float, help="Override the learning rate")
    parser.add_argument("--epsilon", type=float, help="Override the stopping threshold")
    parser.set_defaults(handler=run)


def _apply_overrides(plans, args: argparse.Namespace):
    from ..experiments import parse_plans, plans_to_dict

    train_overrides = {
        "n_epochs": args.epochs,
        "n_epochs_m": args.epochs_m,
        "eta": args.eta,
        "epsilon": args.epsilon,
    }
    train_overrides = {k: v for k, v in train_overrides.items() if v is not None}
    if not train_overrides and args.runs is None:
        return plans

    payload = plans_to_dict(plans)
    for plan in payload["plans"]:
        plan["train"].update(train_overrides)
        if args.runs is not None:
            plan["n_runs"] = args.runs
    return parse_plans(payload, source="command-line overrides")


def run(args: argparse.Namespace, config) -> int:
    from ..core.errors import DomainError
    from ..core.utils import safe_print
    from ..experiments import load_plans, preset_plans, run_experiment, write_results_dir
    from ..training import TrainConfig

    if args.plan:
        plans = load_plans(args.plan)
    else:
        base = TrainConfig.from_defaults(config.training)
        plans = preset_plans(args.preset, base=base, n_epochs=base.n_epochs)
    plans = _apply_overrides(plans, args)

    workers = args.workers if args.workers is not None else config.workers
    if workers < 1:
        raise DomainError(f"--workers must be >= 1, got {workers}")

    results = []
    for plan in plans:
        safe_print(f"▶ {plan.label}: {plan.n_runs} runs x {', '.join(plan.variant_labels)}")
        results.append(run_experiment(plan, workers=workers))

    table = write_results_dir(results, args.out)
    safe_print("")
    safe_print(table.format_text())
    safe_print("")
    safe_print(f"✅ Results written to {args.out}")
    return 0
