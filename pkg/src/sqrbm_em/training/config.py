"""
Pydantic models for optimiser settings.

TrainConfig is what plan files, the CLI and the experiment harness hand to
``train``; values that arrive from JSON are validated here.
"""

from __future__ import annotations

from enum import Enum
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..core.config import TrainingDefaults
from ..core.errors import PlanValidationError

MAX_SEED = 2**64 - 1


class Algorithm(str, Enum):
    """Outer optimiser."""

    GD = "gd"
    EM = "em"


class ModelKind(str, Enum):
    """sqRBM, or the classical RBM obtained by freezing every gamma at 0."""

    SQRBM = "sqrbm"
    RBM = "rbm"


class TrainConfig(BaseModel):
    """Hyperparameters of one training run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    eta: float = Field(default=0.2, gt=0, allow_inf_nan=False, description="Learning rate")
    epsilon: float = Field(
        default=1e-7, gt=0, allow_inf_nan=False, description="Stopping threshold on |delta KL|"
    )
    n_epochs: int = Field(default=200, ge=0, description="Outer epoch budget")
    n_epochs_m: int = Field(default=1000, ge=1, description="Inner m-step budget (em only)")
    algorithm: Algorithm = Field(default=Algorithm.EM, description="gd or em")
    model: ModelKind = Field(default=ModelKind.SQRBM, description="sqrbm or rbm")
    seed: int = Field(default=0, ge=0, le=MAX_SEED, description="PCG64 seed for initialisation")
    init_range: float = Field(
        default=5.0, ge=0, allow_inf_nan=False, description="Half-width of the uniform init"
    )

    @property
    def freeze_gamma(self) -> bool:
        return self.model is ModelKind.RBM

    @property
    def label(self) -> str:
        """Variant label used in tables and curves, e.g. ``em-sqrbm``."""
        return f"{self.algorithm.value}-{self.model.value}"

    @classmethod
    def from_defaults(cls, defaults: TrainingDefaults | None = None, **overrides: Any) -> TrainConfig:
        """Build from environment-backed defaults, letting explicit overrides win."""
        defaults = defaults or TrainingDefaults()
        values: dict[str, Any] = {
            "eta": defaults.eta,
            "epsilon": defaults.epsilon,
            "n_epochs": defaults.n_epochs,
            "n_epochs_m": defaults.n_epochs_m,
            "init_range": defaults.init_range,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return validate_model(cls, values, source="training settings")


class Variant(BaseModel):
    """One algorithm/model combination inside an experiment plan."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    algorithm: Algorithm
    model: ModelKind = ModelKind.SQRBM
    n_epochs_m: int | None = Field(default=None, ge=1, description="Per-variant inner budget")

    @property
    def label(self) -> str:
        label = f"{self.algorithm.value}-{self.model.value}"
        if self.n_epochs_m is not None:
            label += f"-m{self.n_epochs_m}"
        return label

    @model_validator(mode="after")
    def validate_inner_budget(self) -> Variant:
        if self.algorithm is Algorithm.GD and self.n_epochs_m is not None:
            raise ValueError("n_epochs_m only applies to the em algorithm")
        return self

    def apply(self, base: TrainConfig, seed: int) -> TrainConfig:
        update: dict[str, Any] = {"algorithm": self.algorithm, "model": self.model, "seed": seed}
        if self.n_epochs_m is not None:
            update["n_epochs_m"] = self.n_epochs_m
        return base.model_copy(update=update)


def validate_model(model: type[BaseModel], data: Any, *, source: str):
    """model_validate with pydantic errors rewrapped as PlanValidationError."""
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise PlanValidationError(source, e.errors()) from e
