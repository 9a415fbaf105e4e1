"""Training run records and their JSON / CSV serialisations."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..core.errors import DomainError
from ..core.utils import read_json_object
from ..model import Params
from .config import TrainConfig

CSV_COLUMNS = ("epoch", "kl", "inner_steps", "joint_kl_final")


@dataclass
class TrainRecord:
    """
    Everything one training run produced.

    Attributes:
        config: Settings the run used
        n_visible: Number of visible units N
        n_hidden: Number of hidden units M
        initial_params: Parameters before the first epoch
        final_params: Parameters after the last completed epoch
        initial_kl: D_KL(P_V || P_theta) at initial_params
        kl_curve: Visible KL after each completed epoch
        joint_kl_curve: em only; per epoch, the joint objective at the start of the
            m-step followed by its value after every inner step
        inner_steps_per_epoch: em only; inner steps taken in each epoch
        epochs_run: Completed epochs
        converged: Stopped because |delta KL| fell below epsilon
        failed: Aborted by a numeric failure; the curves hold what was completed
        error: Failure message when failed
        wall_time: Seconds spent in the training loop
    """

    config: TrainConfig
    n_visible: int
    n_hidden: int
    initial_params: Params
    final_params: Params
    initial_kl: float
    kl_curve: list[float] = field(default_factory=list)
    joint_kl_curve: list[list[float]] = field(default_factory=list)
    inner_steps_per_epoch: list[int] = field(default_factory=list)
    epochs_run: int = 0
    converged: bool = False
    failed: bool = False
    error: str | None = None
    wall_time: float = 0.0

    @property
    def final_kl(self) -> float:
        return self.kl_curve[-1] if self.kl_curve else self.initial_kl

    def padded_curve(self, length: int) -> list[float]:
        """kl_curve extended to ``length`` entries with its last value."""
        curve = list(self.kl_curve[:length])
        fill = curve[-1] if curve else self.initial_kl
        return curve + [fill] * (length - len(curve))

    def csv_rows(self) -> list[dict[str, Any]]:
        rows = []
        for index, kl in enumerate(self.kl_curve):
            em = index < len(self.inner_steps_per_epoch)
            rows.append(
                {
                    "epoch": index + 1,
                    "kl": repr(kl),
                    "inner_steps": self.inner_steps_per_epoch[index] if em else "",
                    "joint_kl_final": repr(self.joint_kl_curve[index][-1]) if em else "",
                }
            )
        return rows

    def write_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.DictWriter(f, fieldnames=CSV_COLUMNS, lineterminator="\n")
            writer.writeheader()
            writer.writerows(self.csv_rows())

    def to_dict(self) -> dict[str, Any]:
        return {
            "config": self.config.model_dump(mode="json"),
            "shape": {"n_visible": self.n_visible, "n_hidden": self.n_hidden},
            "initial_params": self.initial_params.to_dict(),
            "final_params": self.final_params.to_dict(),
            "initial_kl": self.initial_kl,
            "kl_curve": list(self.kl_curve),
            "joint_kl_curve": [list(trace) for trace in self.joint_kl_curve],
            "inner_steps_per_epoch": list(self.inner_steps_per_epoch),
            "epochs_run": self.epochs_run,
            "converged": self.converged,
            "failed": self.failed,
            "error": self.error,
            "wall_time": self.wall_time,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> TrainRecord:
        try:
            return cls(
                config=TrainConfig.model_validate(data["config"]),
                n_visible=int(data["shape"]["n_visible"]),
                n_hidden=int(data["shape"]["n_hidden"]),
                initial_params=Params.from_dict(data["initial_params"]),
                final_params=Params.from_dict(data["final_params"]),
                initial_kl=float(data["initial_kl"]),
                kl_curve=[float(x) for x in data["kl_curve"]],
                joint_kl_curve=[[float(x) for x in t] for t in data.get("joint_kl_curve", [])],
                inner_steps_per_epoch=[int(x) for x in data.get("inner_steps_per_epoch", [])],
                epochs_run=int(data["epochs_run"]),
                converged=bool(data["converged"]),
                failed=bool(data.get("failed", False)),
                error=data.get("error"),
                wall_time=float(data.get("wall_time", 0.0)),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise DomainError(f"Malformed training record: {e}") from e

    def save(self, path: str | Path, extra: dict[str, Any] | None = None) -> None:
        payload = self.to_dict()
        if extra:
            payload.update(extra)
        Path(path).write_text(json.dumps(payload, indent=2), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> TrainRecord:
        return cls.from_dict(read_json_object(path, "Training record"))
