"""gen-data: write one of the benchmark distributions to a JSON file."""

from __future__ import annotations

import argparse


def add_parser(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "gen-data",
        parents=parents,
        help="Generate a target distribution",
        description="Generate an exact benchmark distribution and save it as JSON.",
    )
    parser.add_argument(
        "--kind",
        required=True,
        choices=["bernoulli", "random_support", "cardinality", "parity"],
        help="Distribution family",
    )
    parser.add_argument("--n", type=int, required=True, help="Number of spins")
    parser.add_argument("--k", type=int, help="Mixture components (bernoulli)")
    parser.add_argument("--p", type=float, help="Alignment probability (bernoulli)")
    parser.add_argument("--seed", type=int, default=0, help="PCG64 seed (default: 0)")
    parser.add_argument("--out", required=True, help="Output JSON file")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config) -> int:
    from ..core.distributions import entropy
    from ..core.utils import safe_print
    from ..datasets import generate, make_spec

    values = {"kind": args.kind, "n": args.n, "k": args.k, "p": args.p}
    if args.kind in ("bernoulli", "random_support"):
        values["seed"] = args.seed
    spec = make_spec(**{k: v for k, v in values.items() if v is not None})
    dataset = generate(spec)
    dataset.save(args.out)

    dist = dataset.distribution
    safe_print(f"✅ Wrote {args.out}")
    safe_print(f"   support size: {dist.support.size} of {1 << dist.n_visible}")
    safe_print(f"   entropy:      {entropy(dist):.6f} nats")
    if dataset.centers:
        safe_print(f"   centers:      {dataset.centers}")
    return 0
