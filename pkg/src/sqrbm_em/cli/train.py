"""train: fit an sqRBM (or the classical RBM limit) to a dataset file."""

from __future__ import annotations

import argparse
from pathlib import Path


def add_parser(subparsers, parents: list[argparse.ArgumentParser]) -> None:
    parser = subparsers.add_parser(
        "train",
        parents=parents,
        help="Train one model with gd or em",
        description=(
            "Train on a dataset file. Unset hyperparameters fall back to SQRBM_* "
            "environment variables, then to built-in defaults."
        ),
    )
    parser.add_argument("--data", required=True, help="Dataset JSON (from gen-data)")
    parser.add_argument("--n-hidden", type=int, required=True, help="Hidden units M")
    parser.add_argument("--algo", choices=["gd", "em"], default="em", help="Optimiser (default: em)")
    parser.add_argument(
        "--model", choices=["sqrbm", "rbm"], default="sqrbm", help="rbm freezes every gamma at 0"
    )
    parser.add_argument("--eta", type=float, help="Learning rate (default: 0.2)")
    parser.add_argument("--epsilon", type=float, help="Stopping threshold (default: 1e-7)")
    parser.add_argument("--epochs", type=int, help="Outer epoch budget (default: 200)")
    parser.add_argument("--epochs-m", type=int, help="Inner m-step budget (default: 1000)")
    parser.add_argument("--init-range", type=float, help="Uniform init half-width (default: 5)")
    parser.add_argument("--seed", type=int, default=0, help="PCG64 init seed (default: 0)")
    parser.add_argument("--out", required=True, help="Output record JSON; the CSV goes next to it")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace, config) -> int:
    from ..core.errors import NumericError
    from ..core.utils import safe_print
    from ..datasets import load_dataset
    from ..training import TrainConfig, train
    from ..version import PRNG_ALGORITHM, __version__

    cfg = TrainConfig.from_defaults(
        config.training,
        eta=args.eta,
        epsilon=args.epsilon,
        n_epochs=args.epochs,
        n_epochs_m=args.epochs_m,
        init_range=args.init_range,
        algorithm=args.algo,
        model=args.model,
        seed=args.seed,
    )
    dataset = load_dataset(args.data)
    out = Path(args.out)
    csv_path = out.with_suffix(".csv")
    meta = {"tool": {"version": __version__, "prng": PRNG_ALGORITHM}, "data": str(args.data)}

    try:
        record = train(dataset.distribution, (dataset.distribution.n_visible, args.n_hidden), cfg)
    except NumericError as e:
        if e.record is not None:
            e.record.save(out, extra=meta)
            e.record.write_csv(csv_path)
            safe_print(f"⚠️ Partial record written to {out}")
        raise

    record.save(out, extra=meta)
    record.write_csv(csv_path)
    status = "converged" if record.converged else "budget reached"
    safe_print(f"✅ {cfg.label}: {record.epochs_run} epochs ({status})")
    safe_print(f"   initial KL: {record.initial_kl:.6e}")
    safe_print(f"   final KL:   {record.final_kl:.6e}")
    safe_print(f"   wrote {out} and {csv_path}")
    return 0
