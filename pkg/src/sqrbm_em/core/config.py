"""
Configuration management for sqrbm-em.

This module provides the runtime defaults shared by the CLI and the experiment
harness: optimiser hyperparameters, verification tolerances, worker count and
logging settings. Every value can be overridden via environment variables (or a
.env file); command-line flags and plan files take precedence over both.
"""

import logging
import os
from dataclasses import dataclass, field
from typing import Any

import structlog

logger = structlog.get_logger(__name__)


def _env_float(name: str, default: float) -> float:
    try:
        return float(os.getenv(name, default))
    except ValueError:
        return default


def _env_int(name: str, default: int) -> int:
    try:
        return int(os.getenv(name, default))
    except ValueError:
        return default


@dataclass
class TrainingDefaults:
    """Default optimiser settings (learning rate, thresholds, budgets)."""

    eta: float = field(default_factory=lambda: _env_float("SQRBM_ETA", 0.2))
    epsilon: float = field(default_factory=lambda: _env_float("SQRBM_EPSILON", 1e-7))
    init_range: float = field(
        default_factory=lambda: _env_float("SQRBM_INIT_RANGE", 5.0)
    )
    n_epochs: int = field(default_factory=lambda: _env_int("SQRBM_EPOCHS", 200))
    n_epochs_m: int = field(default_factory=lambda: _env_int("SQRBM_EPOCHS_M", 1000))


@dataclass
class VerifyDefaults:
    """Settings for the model-versus-oracle verification command."""

    tolerance: float = field(
        default_factory=lambda: _env_float("SQRBM_VERIFY_TOL", 1e-9)
    )
    max_qubits: int = 14
    param_range: float = 2.0


@dataclass
class Config:
    """
    Main configuration class for sqrbm-em.

    Seeds are never read from the environment; randomness comes from explicit
    seed arguments only.
    """

    training: TrainingDefaults = field(default_factory=TrainingDefaults)
    verify: VerifyDefaults = field(default_factory=VerifyDefaults)

    workers: int = field(default_factory=lambda: _env_int("SQRBM_WORKERS", 1))
    debug_mode: bool = field(
        default_factory=lambda: os.getenv("SQRBM_DEBUG", "false").lower() == "true"
    )
    log_level: str = field(default_factory=lambda: os.getenv("LOG_LEVEL", "INFO").upper())
    log_file: str | None = field(default_factory=lambda: os.getenv("LOG_FILE_PATH") or None)

    def __post_init__(self):
        """Load .env, then re-read and validate the environment."""
        self._load_dotenv()
        self._validate_and_load_environment()

    def _load_dotenv(self) -> None:
        try:
            from dotenv import find_dotenv, load_dotenv

            load_dotenv(find_dotenv(usecwd=True))
            logger.debug("environment loaded from .env")
        except ImportError:
            logger.debug("python-dotenv not available, relying on system environment")

    def _validate_and_load_environment(self) -> None:
        """Re-read environment values after .env loading, rejecting bad ranges."""
        checks = [
            (self.training, "eta", "SQRBM_ETA", float, 0.2, lambda x: x > 0),
            (self.training, "epsilon", "SQRBM_EPSILON", float, 1e-7, lambda x: x > 0),
            (self.training, "init_range", "SQRBM_INIT_RANGE", float, 5.0, lambda x: x >= 0),
            (self.training, "n_epochs", "SQRBM_EPOCHS", int, 200, lambda x: x >= 0),
            (self.training, "n_epochs_m", "SQRBM_EPOCHS_M", int, 1000, lambda x: x >= 1),
            (self, "workers", "SQRBM_WORKERS", int, 1, lambda x: x >= 1),
            (self.verify, "tolerance", "SQRBM_VERIFY_TOL", float, 1e-9, lambda x: x > 0),
        ]
        for target, attr, env_name, parse, default, valid in checks:
            raw = os.getenv(env_name)
            if not raw:
                continue
            try:
                value = parse(raw)
            except ValueError:
                logger.warning("error parsing environment variable", name=env_name, value=raw)
                setattr(target, attr, default)
                continue
            if valid(value):
                setattr(target, attr, value)
            else:
                logger.warning("environment value out of range, using default", name=env_name, value=value)
                setattr(target, attr, default)

    @property
    def resolved_log_level(self) -> int:
        if self.debug_mode:
            return logging.DEBUG
        return getattr(logging, self.log_level, logging.INFO)

    def validate(self) -> list[str]:
        """
        Validate the configuration and return any errors.

        Returns:
            List of validation error messages
        """
        errors = []

        if self.training.eta <= 0:
            errors.append("Learning rate must be positive")
        if self.training.epsilon <= 0:
            errors.append("Convergence threshold must be positive")
        if self.training.init_range < 0:
            errors.append("Initialisation range must be non-negative")
        if self.training.n_epochs < 0:
            errors.append("Epoch budget must be non-negative")
        if self.training.n_epochs_m < 1:
            errors.append("Inner m-step budget must be at least 1")
        if self.workers <= 0:
            errors.append("Worker count must be positive")
        if self.verify.tolerance <= 0:
            errors.append("Verification tolerance must be positive")

        return errors

    def to_dict(self) -> dict[str, Any]:
        return {
            "training": {
                "eta": self.training.eta,
                "epsilon": self.training.epsilon,
                "init_range": self.training.init_range,
                "n_epochs": self.training.n_epochs,
                "n_epochs_m": self.training.n_epochs_m,
            },
            "verify": {
                "tolerance": self.verify.tolerance,
                "max_qubits": self.verify.max_qubits,
                "param_range": self.verify.param_range,
            },
            "runtime": {
                "workers": self.workers,
                "debug_mode": self.debug_mode,
                "log_level": self.log_level,
                "log_file": self.log_file,
            },
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Config":
        config = cls()

        if training_data := data.get("training"):
            for key, value in training_data.items():
                if hasattr(config.training, key):
                    setattr(config.training, key, value)

        if verify_data := data.get("verify"):
            for key, value in verify_data.items():
                if hasattr(config.verify, key):
                    setattr(config.verify, key, value)

        if runtime_data := data.get("runtime"):
            for key, value in runtime_data.items():
                if hasattr(config, key):
                    setattr(config, key, value)

        return config

    def __repr__(self) -> str:
        return (
            f"Config("
            f"eta={self.training.eta}, "
            f"epsilon={self.training.epsilon}, "
            f"workers={self.workers}, "
            f"log_level='{self.log_level}')"
        )
