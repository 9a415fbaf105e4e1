"""
Experiment plan models.

A plan file holds either a single ExperimentPlan object or ``{"plans": [...]}``.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..core.config import Config
from ..core.errors import DomainError
from ..core.utils import read_json
from ..datasets import DatasetKind, DatasetSpec
from ..training import Algorithm, ModelKind, TrainConfig, Variant, validate_model
from ..training.config import MAX_SEED


class Shape(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    n_visible: int = Field(..., ge=1, description="Visible units N")
    n_hidden: int = Field(..., ge=0, description="Hidden units M")

    def as_tuple(self) -> tuple[int, int]:
        return self.n_visible, self.n_hidden


class ExperimentPlan(BaseModel):
    """One dataset, one model shape, several paired algorithm variants."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str | None = Field(default=None, description="Label used in tables and curves")
    dataset: DatasetSpec
    shape: Shape
    algorithms: list[Variant] = Field(..., description="Variants run on identical inits")
    n_runs: int = Field(default=20, ge=1, description="Independent runs per variant")
    base_seed: int = Field(default=0, ge=0, le=MAX_SEED, description="Run r uses base_seed + r")
    train: TrainConfig = Field(
        default_factory=dict,
        validate_default=True,
        description="Missing entries come from the SQRBM_* environment defaults",
    )

    @field_validator("train", mode="before")
    @classmethod
    def fill_train_defaults(cls, v: Any) -> Any:
        if isinstance(v, dict):
            return {**TrainConfig.from_defaults(Config().training).model_dump(), **v}
        return v

    @field_validator("algorithms")
    @classmethod
    def validate_algorithms(cls, v: list[Variant]) -> list[Variant]:
        if not v:
            raise ValueError("Plan must contain at least one algorithm variant")
        labels = [variant.label for variant in v]
        if len(labels) != len(set(labels)):
            raise ValueError("Algorithm variants must be unique")
        return v

    @model_validator(mode="after")
    def validate_consistency(self) -> ExperimentPlan:
        if self.dataset.n != self.shape.n_visible:
            raise ValueError(
                f"dataset.n ({self.dataset.n}) must equal shape.n_visible ({self.shape.n_visible})"
            )
        if self.base_seed + self.n_runs - 1 > MAX_SEED:
            raise ValueError("base_seed + n_runs exceeds the 64-bit seed range")
        return self

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        return f"{self.dataset.label}-n{self.shape.n_visible}-m{self.shape.n_hidden}"

    @property
    def variant_labels(self) -> list[str]:
        return [variant.label for variant in self.algorithms]


class PlanSuite(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    plans: list[ExperimentPlan]

    @field_validator("plans")
    @classmethod
    def validate_plans(cls, v: list[ExperimentPlan]) -> list[ExperimentPlan]:
        if not v:
            raise ValueError("Plan file must contain at least one plan")
        labels = [plan.label for plan in v]
        if len(labels) != len(set(labels)):
            raise ValueError("Plan names must be unique")
        return v


def parse_plans(data: Any, *, source: str = "plan") -> list[ExperimentPlan]:
    """Validate a decoded plan document into a list of plans."""
    if isinstance(data, dict) and "plans" in data:
        return list(validate_model(PlanSuite, data, source=source).plans)
    return [validate_model(ExperimentPlan, data, source=source)]


def load_plans(path: str | Path) -> list[ExperimentPlan]:
    """
    Read and validate a plan file.

    Raises:
        PlanValidationError: On schema violations
        DomainError: If the file is not valid JSON
        OSError: If the file cannot be read
    """
    return parse_plans(read_json(path, "Plan file"), source=str(path))


def plans_to_dict(plans: list[ExperimentPlan]) -> dict[str, Any]:
    return {"plans": [plan.model_dump(mode="json") for plan in plans]}


PRESET_VARIANTS: dict[str, list[Variant]] = {
    "paper": [
        Variant(algorithm=Algorithm.EM, model=ModelKind.SQRBM),
        Variant(algorithm=Algorithm.GD, model=ModelKind.SQRBM),
    ],
    "paper-rbm": [
        Variant(algorithm=Algorithm.EM, model=ModelKind.SQRBM),
        Variant(algorithm=Algorithm.EM, model=ModelKind.RBM),
    ],
}


def preset_plans(
    name: str, *, n_runs: int = 20, n_epochs: int = 500, base: TrainConfig | None = None
) -> list[ExperimentPlan]:
    """
    Built-in plan suites over datasets A-D at N=4, M=2 (A: K=8, p=0.9, seed 0),
    paired inits from seed 0.

    ``paper``: em vs gd on the sqRBM.
    ``paper-rbm``: em on the sqRBM vs em on the classical RBM.

    Raises:
        DomainError: For an unknown preset name
    """
    if name not in PRESET_VARIANTS:
        available = ", ".join(PRESET_VARIANTS)
        raise DomainError(f"Unknown preset '{name}' (available: {available})")
    if n_runs < 1:
        raise DomainError(f"n_runs must be >= 1, got {n_runs}")
    train = validate_model(
        TrainConfig,
        {**(base or TrainConfig()).model_dump(), "n_epochs": n_epochs},
        source=f"preset '{name}'",
    )
    variants = PRESET_VARIANTS[name]
    datasets = [
        ("A", DatasetSpec(kind=DatasetKind.BERNOULLI, n=4, k=8, p=0.9, seed=0)),
        ("B", DatasetSpec(kind=DatasetKind.RANDOM_SUPPORT, n=4, seed=0)),
        ("C", DatasetSpec(kind=DatasetKind.CARDINALITY, n=4)),
        ("D", DatasetSpec(kind=DatasetKind.PARITY, n=4)),
    ]
    return [
        ExperimentPlan(
            name=f"{tag}-{spec.label}",
            dataset=spec,
            shape=Shape(n_visible=4, n_hidden=2),
            algorithms=variants,
            n_runs=n_runs,
            base_seed=0,
            train=train,
        )
        for tag, spec in datasets
    ]
