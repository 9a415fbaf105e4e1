"""
Closed-form semi-quantum restricted Boltzmann machine.

Parameters, effective fields, the exact visible marginal and partition function,
and the positive/negative phase expectation values that drive both optimisers.
"""

from .params import GradientVector, HiddenLocalState, Params
from .sqrbm import (
    Evaluation,
    clamped_hidden_state,
    conditional_kl_per_config,
    conditional_relative_entropy_term,
    effective_field,
    evaluated_joint_objective,
    evaluate,
    hidden_gap,
    joint_objective,
    log_partition_function,
    log_visible_weight,
    negative_phase,
    positive_phase,
    tanh_ratio,
    visible_marginal,
)

__all__ = [
    "Evaluation",
    "GradientVector",
    "HiddenLocalState",
    "Params",
    "clamped_hidden_state",
    "conditional_kl_per_config",
    "conditional_relative_entropy_term",
    "effective_field",
    "evaluated_joint_objective",
    "evaluate",
    "hidden_gap",
    "joint_objective",
    "log_partition_function",
    "log_visible_weight",
    "negative_phase",
    "positive_phase",
    "tanh_ratio",
    "visible_marginal",
]
