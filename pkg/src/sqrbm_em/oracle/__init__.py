"""Dense Hilbert-space oracle used to certify the closed forms."""

from .dense import (
    MAX_QUBITS,
    DenseOperator,
    build_hamiltonian,
    clamped_hamiltonian,
    classical_rbm_gradient,
    classical_rbm_marginal,
    conditional_hidden_state,
    dense_joint_objective,
    dense_negative_phase,
    dense_positive_phase,
    embed,
    gibbs_state,
    golden_thompson_bound_gradient,
    joint_state,
    log_trace_exp,
    quantum_relative_entropy,
    reduce_to_visible,
    relative_entropy_to_gibbs,
)
from .verify import CHECKS, VerificationReport, verify_against_oracle

__all__ = [
    "CHECKS",
    "MAX_QUBITS",
    "DenseOperator",
    "VerificationReport",
    "build_hamiltonian",
    "clamped_hamiltonian",
    "classical_rbm_gradient",
    "classical_rbm_marginal",
    "conditional_hidden_state",
    "dense_joint_objective",
    "dense_negative_phase",
    "dense_positive_phase",
    "embed",
    "gibbs_state",
    "golden_thompson_bound_gradient",
    "joint_state",
    "log_trace_exp",
    "quantum_relative_entropy",
    "reduce_to_visible",
    "relative_entropy_to_gibbs",
    "verify_against_oracle",
]
