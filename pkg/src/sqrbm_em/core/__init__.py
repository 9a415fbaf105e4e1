"""
Core substrate for sqrbm-em.

Spin configurations, exact probability tables, the classical KL divergence, and
the ambient pieces every other module shares (configuration and errors).
"""

from .config import Config
from .distributions import (
    SpinConfig,
    VisibleDistribution,
    all_configs,
    decode_config,
    encode_config,
    entropy,
    kl_divergence,
    log_cosh,
)
from .errors import (
    DivergenceInfiniteError,
    DomainError,
    ExperimentError,
    NumericError,
    PlanValidationError,
    ResourceError,
    SqrbmError,
)

__all__ = [
    "Config",
    "SpinConfig",
    "VisibleDistribution",
    "all_configs",
    "decode_config",
    "encode_config",
    "entropy",
    "kl_divergence",
    "log_cosh",
    "DivergenceInfiniteError",
    "DomainError",
    "ExperimentError",
    "NumericError",
    "PlanValidationError",
    "ResourceError",
    "SqrbmError",
]
