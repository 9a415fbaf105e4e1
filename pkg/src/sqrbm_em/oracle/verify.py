"""
Model vs dense-oracle cross-checks.

Each trial draws random parameters, a random pair of parameter points for the
joint objective and a full-support random data distribution, then records the
max absolute deviation of every closed form from its dense counterpart.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
import structlog

from ..core.distributions import SpinConfig, VisibleDistribution
from ..core.errors import DomainError, ResourceError
from ..model import (
    Params,
    clamped_hidden_state,
    joint_objective,
    log_partition_function,
    negative_phase,
    positive_phase,
    visible_marginal,
)
from .dense import (
    MAX_QUBITS,
    build_hamiltonian,
    clamped_hamiltonian,
    dense_joint_objective,
    dense_negative_phase,
    dense_positive_phase,
    gibbs_state,
    golden_thompson_bound_gradient,
    log_trace_exp,
    max_abs,
    reduce_to_visible,
)

logger = structlog.get_logger(__name__)

CHECKS = (
    "marginal",
    "log_partition",
    "positive_phase",
    "negative_phase",
    "conditional_state",
    "joint_objective",
    "clamped_gradient",
)


@dataclass
class VerificationReport:
    """Per-trial deviations of every check."""

    n_visible: int
    n_hidden: int
    tolerance: float
    rows: list[dict[str, float]] = field(default_factory=list)

    @property
    def trials(self) -> int:
        return len(self.rows)

    def max_deviation(self, check: str) -> float:
        return max((row[check] for row in self.rows), default=0.0)

    def row_passed(self, row: dict[str, float]) -> bool:
        return all(row[check] < self.tolerance for check in CHECKS)

    @property
    def passed(self) -> bool:
        return all(self.row_passed(row) for row in self.rows)

    def format_table(self) -> str:
        header = ["trial", *CHECKS, "status"]
        lines = ["  ".join(f"{h:>17}" for h in header)]
        for index, row in enumerate(self.rows):
            cells = [f"{index:>17}"] + [f"{row[c]:>17.3e}" for c in CHECKS]
            cells.append(f"{'PASS' if self.row_passed(row) else 'FAIL':>17}")
            lines.append("  ".join(cells))
        return "\n".join(lines)


def random_params(rng: np.random.Generator, n: int, m: int, param_range: float) -> Params:
    values = rng.uniform(-param_range, param_range, size=n + 2 * m + n * m)
    return Params.from_flat(n, m, values)


def random_distribution(rng: np.random.Generator, n: int) -> VisibleDistribution:
    """Full-support random distribution, so every conditional is defined."""
    return VisibleDistribution.from_weights(n, rng.uniform(0.05, 1.0, size=1 << n))


def _hidden_product_state(p: Params, v: SpinConfig) -> np.ndarray:
    state = np.ones((1, 1))
    # highest hidden index is the leading Kronecker factor
    for j in reversed(range(p.n_hidden)):
        local = clamped_hidden_state(p, v, j)
        single = 0.5 * np.array(
            [[1.0 + local.mz, local.mx], [local.mx, 1.0 - local.mz]]
        )
        state = np.kron(state, single)
    return state


def _conditional_deviation(p: Params) -> float:
    h = build_hamiltonian(p)
    worst = 0.0
    for index in range(1 << p.n_visible):
        v = SpinConfig.from_index(index, p.n_visible)
        dense = gibbs_state(clamped_hamiltonian(h, v)).matrix
        worst = max(worst, max_abs(dense - _hidden_product_state(p, v)))
    return worst


def run_trial(rng: np.random.Generator, n: int, m: int, param_range: float) -> dict[str, float]:
    p = random_params(rng, n, m, param_range)
    p_t = random_params(rng, n, m, param_range)
    data = random_distribution(rng, n)

    rho = gibbs_state(build_hamiltonian(p))
    checks: dict[str, Callable[[], float]] = {
        "marginal": lambda: max_abs(visible_marginal(p).probs - reduce_to_visible(rho, n).probs),
        "log_partition": lambda: abs(log_partition_function(p) - log_trace_exp(build_hamiltonian(p))),
        "positive_phase": lambda: max_abs(
            (positive_phase(p, data) - dense_positive_phase(p, data)).flatten()
        ),
        "negative_phase": lambda: max_abs((negative_phase(p) - dense_negative_phase(p)).flatten()),
        "conditional_state": lambda: _conditional_deviation(p),
        "joint_objective": lambda: abs(
            joint_objective(p_t, p, data) - dense_joint_objective(p_t, p, data)
        ),
        "clamped_gradient": lambda: max_abs(
            (
                golden_thompson_bound_gradient(p, data)
                + (positive_phase(p, data) - negative_phase(p))
            ).flatten()
        ),
    }
    return {name: float(checks[name]()) for name in CHECKS}


def verify_against_oracle(
    n_visible: int,
    n_hidden: int,
    *,
    trials: int,
    seed: int,
    tolerance: float = 1e-9,
    param_range: float = 2.0,
    max_qubits: int = MAX_QUBITS,
) -> VerificationReport:
    """
    Compare every closed form against the dense oracle on random draws.

    Args:
        n_visible: Number of visible units N
        n_hidden: Number of hidden units M
        trials: Number of random parameter draws; 0 gives an empty (passing) report
        seed: PCG64 seed for the draws
        tolerance: Max absolute deviation allowed per check
        param_range: Entries are drawn uniformly from [-param_range, param_range]
        max_qubits: Size cap for N+M, never above the oracle's own MAX_QUBITS

    Raises:
        DomainError: On invalid sizes or a negative trial count
        ResourceError: If N+M exceeds max_qubits or the dense-oracle cap
    """
    if n_visible < 1 or n_hidden < 0:
        raise DomainError(f"Invalid shape N={n_visible}, M={n_hidden}")
    if trials < 0:
        raise DomainError(f"trials must be >= 0, got {trials}")
    cap = min(max_qubits, MAX_QUBITS)
    if n_visible + n_hidden > cap:
        raise ResourceError(
            f"Verification is capped at {cap} qubits, got N+M={n_visible + n_hidden}"
        )

    rng = np.random.Generator(np.random.PCG64(seed))
    report = VerificationReport(n_visible, n_hidden, tolerance)
    for trial in range(trials):
        row = run_trial(rng, n_visible, n_hidden, param_range)
        report.rows.append(row)
        logger.debug("oracle trial", trial=trial, **row)
    logger.info(
        "oracle verification finished",
        trials=trials,
        passed=report.passed,
        n_visible=n_visible,
        n_hidden=n_hidden,
    )
    return report
