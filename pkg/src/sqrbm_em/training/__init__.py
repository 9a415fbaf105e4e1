"""Optimisers for the sqRBM: gradient descent and the em algorithm."""

from .config import Algorithm, ModelKind, TrainConfig, Variant, validate_model
from .optimizers import (
    EStep,
    cross_entropy,
    delta_qre,
    e_step,
    gd_step,
    init_params,
    m_step,
    make_rng,
    train,
    train_from,
)
from .record import CSV_COLUMNS, TrainRecord

__all__ = [
    "CSV_COLUMNS",
    "Algorithm",
    "EStep",
    "ModelKind",
    "TrainConfig",
    "TrainRecord",
    "Variant",
    "cross_entropy",
    "delta_qre",
    "e_step",
    "gd_step",
    "init_params",
    "m_step",
    "make_rng",
    "train",
    "train_from",
    "validate_model",
]
