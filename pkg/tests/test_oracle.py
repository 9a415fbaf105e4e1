"""Dense Gibbs-state oracle and the closed-form cross-checks."""

import math

import numpy as np
import pytest

from sqrbm_em.core import DivergenceInfiniteError, DomainError, ResourceError, SpinConfig
from sqrbm_em.core import VisibleDistribution, kl_divergence
from sqrbm_em.model import Params, negative_phase, positive_phase, visible_marginal
from sqrbm_em.oracle import (
    CHECKS,
    DenseOperator,
    VerificationReport,
    build_hamiltonian,
    clamped_hamiltonian,
    classical_rbm_gradient,
    conditional_hidden_state,
    dense_joint_objective,
    embed,
    gibbs_state,
    golden_thompson_bound_gradient,
    joint_state,
    log_trace_exp,
    quantum_relative_entropy,
    reduce_to_visible,
    relative_entropy_to_gibbs,
    verify_against_oracle,
)

PAULI_Z = np.diag([1.0, -1.0])


def test_embed_places_operator_at_bit_position():
    z0 = embed(PAULI_Z, 0, 2)
    z1 = embed(PAULI_Z, 1, 2)
    np.testing.assert_array_equal(np.diag(z0), [1, -1, 1, -1])
    np.testing.assert_array_equal(np.diag(z1), [1, 1, -1, -1])


def test_hamiltonian_of_single_visible_bias():
    p = Params(b_v=[0.7], b_h=[], gamma=[], w=[])
    np.testing.assert_allclose(build_hamiltonian(p).matrix, np.diag([-0.7, 0.7]))


def test_hamiltonian_transverse_field_is_off_diagonal():
    p = Params(b_v=[0.0], b_h=[0.0], gamma=[1.5], w=[[0.0]])
    h = build_hamiltonian(p).matrix
    assert h[0, 1] == -1.5
    assert h[2, 3] == -1.5
    assert h[0, 2] == 0.0


def test_hamiltonian_coupling_diagonal():
    p = Params(b_v=[0.0], b_h=[0.0], gamma=[0.0], w=[[2.0]])
    # basis |v, h>: v spin from bit 1, h spin from bit 0
    np.testing.assert_allclose(np.diag(build_hamiltonian(p).matrix), [-2.0, 2.0, 2.0, -2.0])


def test_hamiltonian_size_cap():
    with pytest.raises(ResourceError):
        build_hamiltonian(Params.zeros(10, 5))


def test_dense_operator_validation():
    with pytest.raises(DomainError):
        DenseOperator(np.zeros((3, 3)))
    with pytest.raises(DomainError):
        DenseOperator(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(DomainError):
        DenseOperator(np.zeros((2, 4)))


def test_gibbs_state_of_zero_hamiltonian_is_maximally_mixed():
    rho = gibbs_state(DenseOperator(np.zeros((4, 4))))
    np.testing.assert_allclose(rho.matrix, np.eye(4) / 4, atol=1e-15)
    assert log_trace_exp(DenseOperator(np.zeros((4, 4)))) == pytest.approx(math.log(4.0))


def test_gibbs_state_of_diagonal_hamiltonian():
    rho = gibbs_state(DenseOperator(np.diag([0.0, 1.0])))
    e = math.exp(-1.0)
    np.testing.assert_allclose(np.diag(rho.matrix), [1 / (1 + e), e / (1 + e)], atol=1e-15)


def test_gibbs_state_is_a_density_matrix(make_params):
    rho = gibbs_state(build_hamiltonian(make_params(2, 2)))
    assert rho.trace() == pytest.approx(1.0, abs=1e-12)
    assert np.min(np.linalg.eigvalsh(rho.matrix)) > -1e-14


def test_reduce_to_visible_sums_hidden_blocks():
    rho = DenseOperator(np.diag([0.1, 0.2, 0.3, 0.4]))
    np.testing.assert_allclose(reduce_to_visible(rho, 1).probs, [0.3, 0.7])


def test_conditional_hidden_state():
    rho = DenseOperator(np.diag([0.1, 0.3, 0.0, 0.6]))
    cond = conditional_hidden_state(rho, SpinConfig.from_index(0, 1))
    np.testing.assert_allclose(cond.matrix, np.diag([0.25, 0.75]))


def test_conditional_on_impossible_configuration():
    rho = DenseOperator(np.diag([0.4, 0.6, 0.0, 0.0]))
    with pytest.raises(DomainError):
        conditional_hidden_state(rho, SpinConfig.from_index(1, 1))


def test_quantum_relative_entropy_of_diagonal_states():
    rho = DenseOperator(np.diag([0.75, 0.25]))
    sigma = DenseOperator(np.diag([0.5, 0.5]))
    assert quantum_relative_entropy(rho, sigma) == pytest.approx(0.130812, abs=1e-6)
    assert quantum_relative_entropy(rho, rho) == pytest.approx(0.0, abs=1e-14)


def test_quantum_relative_entropy_infinite_off_support():
    rho = DenseOperator(np.eye(2) / 2)
    sigma = DenseOperator(np.diag([1.0, 0.0]))
    with pytest.raises(DivergenceInfiniteError):
        quantum_relative_entropy(rho, sigma)


def test_quantum_relative_entropy_dimension_mismatch():
    with pytest.raises(DomainError):
        quantum_relative_entropy(DenseOperator(np.eye(2) / 2), DenseOperator(np.eye(4) / 4))


@pytest.mark.parametrize(("n", "m"), [(1, 1), (2, 2), (3, 2), (3, 3), (2, 0)])
def test_closed_forms_agree_with_dense_oracle(n, m):
    report = verify_against_oracle(n, m, trials=3, seed=11)

    assert report.trials == 3
    assert report.passed, report.format_table()
    for check in CHECKS:
        assert report.max_deviation(check) < 1e-9


def test_verification_is_deterministic():
    a = verify_against_oracle(2, 1, trials=2, seed=5)
    b = verify_against_oracle(2, 1, trials=2, seed=5)
    assert a.rows == b.rows


def test_verification_with_no_trials_passes():
    report = verify_against_oracle(2, 2, trials=0, seed=0)
    assert report.passed
    assert report.trials == 0
    assert report.max_deviation("marginal") == 0.0


def test_verification_rejects_bad_input():
    with pytest.raises(DomainError):
        verify_against_oracle(0, 1, trials=1, seed=0)
    with pytest.raises(DomainError):
        verify_against_oracle(2, 1, trials=-1, seed=0)
    with pytest.raises(ResourceError):
        verify_against_oracle(8, 7, trials=1, seed=0)


def test_verification_honours_a_lower_qubit_cap():
    with pytest.raises(ResourceError, match="capped at 3 qubits"):
        verify_against_oracle(2, 2, trials=1, seed=0, max_qubits=3)
    assert verify_against_oracle(2, 2, trials=1, seed=0, max_qubits=4).passed


def test_failing_report_is_flagged():
    report = VerificationReport(1, 1, tolerance=1e-30)
    report.rows.append({check: 1e-20 for check in CHECKS})
    assert not report.passed
    assert "FAIL" in report.format_table()


def test_joint_objective_bounds_visible_kl_in_dense_form(make_params, make_data):
    # data processing: tracing out the hidden layer can only lower the divergence
    for _ in range(5):
        p_t, p, data = make_params(2, 2), make_params(2, 2), make_data(2)
        joint = dense_joint_objective(p_t, p, data)
        assert kl_divergence(data, visible_marginal(p)) <= joint + 1e-10


def test_joint_state_blocks_carry_data_weights(make_params):
    p = make_params(2, 1)
    data = VisibleDistribution(2, [0.5, 0.0, 0.25, 0.25])
    sigma = joint_state(p, data)
    np.testing.assert_allclose(reduce_to_visible(sigma, 2).probs, data.probs, atol=1e-14)
    assert np.all(sigma.matrix[2:4, :] == 0.0)


def test_clamped_gradient_is_negative_minus_positive(make_params, make_data):
    p, data = make_params(3, 2), make_data(3)
    expected = negative_phase(p) - positive_phase(p, data)
    np.testing.assert_allclose(
        golden_thompson_bound_gradient(p, data).flatten(), expected.flatten(), atol=1e-10
    )


def test_clamped_gradient_vanishes_at_the_model_marginal(make_params):
    p = make_params(2, 2)
    grad = golden_thompson_bound_gradient(p, visible_marginal(p))
    np.testing.assert_allclose(grad.flatten(), 0.0, atol=1e-10)


def test_clamped_gradient_reduces_to_classical_rbm(make_params, make_data):
    p, data = make_params(3, 2).with_zero_gamma(), make_data(3)
    np.testing.assert_allclose(
        golden_thompson_bound_gradient(p, data).flatten(),
        classical_rbm_gradient(p, data).flatten(),
        atol=1e-10,
    )


def test_conditioning_the_global_state_matches_the_clamped_block(make_params):
    p = make_params(2, 2, scale=1.0)
    h = build_hamiltonian(p)
    rho = gibbs_state(h)
    for index in range(4):
        v = SpinConfig.from_index(index, 2)
        np.testing.assert_allclose(
            conditional_hidden_state(rho, v).matrix,
            gibbs_state(clamped_hamiltonian(h, v)).matrix,
            atol=1e-10,
        )


def test_relative_entropy_to_gibbs_matches_matrix_logarithms(make_params):
    h = build_hamiltonian(make_params(1, 1, scale=1.0))
    sigma = gibbs_state(build_hamiltonian(make_params(1, 1, scale=1.0)))
    assert relative_entropy_to_gibbs(sigma, h) == pytest.approx(
        quantum_relative_entropy(sigma, gibbs_state(h)), abs=1e-10
    )
