"""
Multi-run benchmark harness.

Every variant of a plan trains from the same initial parameters for a given run
index (seed = base_seed + run). Runs execute on a thread pool, but results are
keyed by (run, variant) and aggregated in run order, so the output does not
depend on the worker count.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import structlog

from ..core.distributions import VisibleDistribution
from ..core.errors import ExperimentError, NumericError
from ..datasets import generate
from ..training import TrainRecord, Variant, train
from .plan import ExperimentPlan

logger = structlog.get_logger(__name__)


def _json_float(value: float) -> float | None:
    return None if math.isnan(value) else value


@dataclass
class VariantSummary:
    """
    Aggregate of one variant over all runs.

    Attributes:
        label: Variant label, e.g. ``em-sqrbm``
        mean_curve: Per-epoch mean visible KL over successful runs, padded to the
            epoch budget
        final_kls: Final KL of every run in run order, None for failed runs
        failed: Number of failed runs

    A variant whose runs all failed has a NaN mean curve and NaN statistics.
    """

    label: str
    mean_curve: list[float]
    final_kls: list[float | None]
    failed: int = 0

    @property
    def successful(self) -> list[float]:
        return [kl for kl in self.final_kls if kl is not None]

    @property
    def runs(self) -> int:
        return len(self.successful)

    @property
    def final_mean(self) -> float:
        values = self.successful
        return float(np.mean(values)) if values else math.nan

    @property
    def final_std(self) -> float:
        values = self.successful
        if not values:
            return math.nan
        return float(np.std(values, ddof=1)) if len(values) > 1 else 0.0

    @property
    def curve_monotone(self) -> bool:
        """Whether the mean curve never increases (a soft report; visible KL may rise)."""
        return all(b <= a for a, b in zip(self.mean_curve, self.mean_curve[1:]))

    def to_dict(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "mean_curve": [_json_float(x) for x in self.mean_curve],
            "final_kls": list(self.final_kls),
            "failed": self.failed,
            "final_mean": _json_float(self.final_mean),
            "final_std": _json_float(self.final_std),
            "curve_monotone": self.curve_monotone,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> VariantSummary:
        return cls(
            label=str(data["label"]),
            mean_curve=[math.nan if x is None else float(x) for x in data["mean_curve"]],
            final_kls=[None if x is None else float(x) for x in data["final_kls"]],
            failed=int(data.get("failed", 0)),
        )


@dataclass
class ExperimentResult:
    """Outcome of one plan; ``records`` is only populated for in-process runs."""

    plan: ExperimentPlan
    variants: list[VariantSummary]
    wall_time: float = 0.0
    records: dict[str, list[TrainRecord | None]] = field(default_factory=dict, repr=False)

    @property
    def name(self) -> str:
        return self.plan.label

    @property
    def n_epochs(self) -> int:
        return self.plan.train.n_epochs

    def variant(self, label: str) -> VariantSummary:
        for summary in self.variants:
            if summary.label == label:
                return summary
        raise KeyError(label)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "plan": self.plan.model_dump(mode="json"),
            "variants": [summary.to_dict() for summary in self.variants],
            "wall_time": self.wall_time,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ExperimentResult:
        return cls(
            plan=ExperimentPlan.model_validate(data["plan"]),
            variants=[VariantSummary.from_dict(v) for v in data["variants"]],
            wall_time=float(data.get("wall_time", 0.0)),
        )


def _run_one(
    plan: ExperimentPlan, data: VisibleDistribution, run: int, variant: Variant
) -> tuple[int, str, TrainRecord | None]:
    cfg = variant.apply(plan.train, seed=plan.base_seed + run)
    try:
        record = train(data, plan.shape.as_tuple(), cfg)
    except NumericError as e:
        logger.warning(
            "run failed", plan=plan.label, variant=variant.label, run=run, error=str(e)
        )
        return run, variant.label, None
    logger.debug(
        "run finished",
        plan=plan.label,
        variant=variant.label,
        run=run,
        final_kl=record.final_kl,
        epochs=record.epochs_run,
    )
    return run, variant.label, record


def run_experiment(plan: ExperimentPlan, *, workers: int = 1) -> ExperimentResult:
    """
    Train every variant of the plan on n_runs paired initialisations.

    Args:
        plan: Validated experiment plan
        workers: Thread pool size; results are identical for any value

    Returns:
        ExperimentResult with padded mean curves and per-run final KLs

    Raises:
        ExperimentError: If every run of every variant failed
    """
    data = generate(plan.dataset).distribution
    tasks = [(run, variant) for run in range(plan.n_runs) for variant in plan.algorithms]
    log = logger.bind(plan=plan.label)
    log.info("experiment started", runs=plan.n_runs, variants=plan.variant_labels, workers=workers)

    start = time.perf_counter()
    outcomes: dict[tuple[int, str], TrainRecord | None] = {}
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        futures = [executor.submit(_run_one, plan, data, run, variant) for run, variant in tasks]
        for future in futures:
            run, label, record = future.result()
            outcomes[(run, label)] = record

    length = plan.train.n_epochs
    summaries = []
    records: dict[str, list[TrainRecord | None]] = {}
    for label in plan.variant_labels:
        ordered = [outcomes[(run, label)] for run in range(plan.n_runs)]
        records[label] = ordered
        succeeded = [record for record in ordered if record is not None]
        if succeeded:
            curves = np.array([record.padded_curve(length) for record in succeeded]).reshape(
                len(succeeded), length
            )
            mean_curve = [float(x) for x in curves.mean(axis=0)]
        else:
            log.warning("every run of a variant failed", variant=label, runs=plan.n_runs)
            mean_curve = [math.nan] * length
        summaries.append(
            VariantSummary(
                label=label,
                mean_curve=mean_curve,
                final_kls=[None if r is None else r.final_kl for r in ordered],
                failed=len(ordered) - len(succeeded),
            )
        )

    if all(summary.runs == 0 for summary in summaries):
        raise ExperimentError(f"Every run of {plan.label} failed numerically")

    for summary in summaries:
        if summary.runs and not summary.curve_monotone:
            log.info("mean curve is not monotone", variant=summary.label)

    result = ExperimentResult(
        plan=plan, variants=summaries, wall_time=time.perf_counter() - start, records=records
    )
    log.info(
        "experiment finished",
        wall_time=round(result.wall_time, 3),
        **{s.label: s.final_mean for s in summaries},
    )
    return result
