"""
sqrbm-em: exact em and gradient-descent training for semi-quantum RBMs.

The closed-form model lives in ``sqrbm_em.model``, the optimisers in
``sqrbm_em.training``, the dense verification oracle in ``sqrbm_em.oracle`` and
the benchmark harness in ``sqrbm_em.datasets`` / ``sqrbm_em.experiments``.
"""

import structlog

from .core.utils.logging_config import configure_structlog
from .version import PRNG_ALGORITHM, __version__

if not structlog.is_configured():
    configure_structlog()

__all__ = ["PRNG_ALGORITHM", "__version__"]
