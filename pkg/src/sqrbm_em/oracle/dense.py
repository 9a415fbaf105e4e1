"""
Brute-force dense simulator of the sqRBM Gibbs state.

Builds the full 2^(N+M) Hamiltonian from Kronecker products of Pauli matrices
and works with explicit eigendecompositions. Slow by construction and capped at
N+M <= 14; it exists to certify the closed forms in sqrbm_em.model.

Qubit layout: the visible register is the leading Kronecker factor, so the basis
index of |v, h> is v_index * 2^M + h_index, where both indices use the
encode_config convention (bit k set iff spin k is -1). Inside a register, unit k
sits at bit k.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import structlog

from ..core.distributions import SpinConfig, VisibleDistribution, all_configs
from ..core.errors import DivergenceInfiniteError, DomainError, NumericError, ResourceError
from ..model.params import GradientVector, Params

logger = structlog.get_logger(__name__)

MAX_QUBITS = 14
SYMMETRY_TOL = 1e-12

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]])
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """Real symmetric operator on 2^n qubits."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError(f"Operator must be square, got shape {m.shape}")
        dim = m.shape[0]
        if dim < 1 or dim & (dim - 1):
            raise DomainError(f"Operator dimension {dim} is not a power of two")
        if dim > 1 and np.max(np.abs(m - m.T)) > SYMMETRY_TOL * max(1.0, float(np.max(np.abs(m)))):
            raise DomainError("Operator is not symmetric")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def n_qubits(self) -> int:
        return self.dim.bit_length() - 1

    def trace(self) -> float:
        return float(np.trace(self.matrix))

    def expectation(self, op: np.ndarray) -> float:
        """Tr[self op] for a symmetric op."""
        return float(np.sum(self.matrix * op))


def embed(op: np.ndarray, position: int, n_qubits: int) -> np.ndarray:
    """Place a single-qubit operator at bit ``position`` of an n-qubit register."""
    left = np.eye(1 << (n_qubits - 1 - position))
    right = np.eye(1 << position)
    return np.kron(np.kron(left, op), right)


def _visible_position(i: int, n_hidden: int) -> int:
    return n_hidden + i


def _check_size(n_visible: int, n_hidden: int) -> None:
    if n_visible + n_hidden > MAX_QUBITS:
        raise ResourceError(
            f"Dense oracle supports at most {MAX_QUBITS} qubits, got N+M={n_visible + n_hidden}"
        )


def build_hamiltonian(p: Params) -> DenseOperator:
    """
    H = -sum b_i Z_i - sum (b_j Z_j + gamma_j X_j) - sum w_ij Z_i Z_j on 2^(N+M) states.

    Raises:
        ResourceError: If N+M exceeds the dense-oracle cap
    """
    n, m = p.n_visible, p.n_hidden
    _check_size(n, m)
    total = n + m
    dim = 1 << total
    h = np.zeros((dim, dim))

    z_vis = [embed(PAULI_Z, _visible_position(i, m), total) for i in range(n)]
    z_hid = [embed(PAULI_Z, j, total) for j in range(m)]

    for i in range(n):
        h -= p.b_v[i] * z_vis[i]
    for j in range(m):
        h -= p.b_h[j] * z_hid[j]
        h -= p.gamma[j] * embed(PAULI_X, j, total)
        for i in range(n):
            h -= p.w[i, j] * (z_vis[i] @ z_hid[j])

    return DenseOperator(h)


def _eigh(h: DenseOperator) -> tuple[np.ndarray, np.ndarray]:
    try:
        return scipy.linalg.eigh(h.matrix)
    except np.linalg.LinAlgError as e:
        raise NumericError(f"Eigensolver did not converge: {e}") from e


def log_trace_exp(h: DenseOperator) -> float:
    """log Tr exp(-H), shifted by the smallest eigenvalue for stability."""
    eigvals, _ = _eigh(h)
    shifted = -(eigvals - eigvals[0])
    return float(-eigvals[0] + np.log(np.sum(np.exp(shifted))))


def gibbs_state(h: DenseOperator) -> DenseOperator:
    """rho = exp(-H) / Tr exp(-H) via a symmetric eigendecomposition."""
    eigvals, vecs = _eigh(h)
    weights = np.exp(-(eigvals - eigvals[0]))
    weights /= np.sum(weights)
    rho = (vecs * weights) @ vecs.T
    return DenseOperator(0.5 * (rho + rho.T))


def reduce_to_visible(rho: DenseOperator, n_visible: int) -> VisibleDistribution:
    """P(v) = sum_h <v,h|rho|v,h>."""
    n_hidden = rho.n_qubits - n_visible
    if n_hidden < 0 or n_visible < 1:
        raise DomainError(f"Cannot reduce a {rho.n_qubits}-qubit state to N={n_visible}")
    diag = np.clip(np.diag(rho.matrix), 0.0, None)
    probs = diag.reshape(1 << n_visible, 1 << n_hidden).sum(axis=1)
    return VisibleDistribution.from_weights(n_visible, probs)


def conditional_hidden_state(rho: DenseOperator, v: SpinConfig) -> DenseOperator:
    """
    rho_{H|V=v} = <v|rho|v> / Tr<v|rho|v>.

    Raises:
        DomainError: If v has zero probability under rho
    """
    n_hidden = rho.n_qubits - v.n
    if n_hidden < 0:
        raise DomainError(f"Configuration with {v.n} spins does not fit a {rho.n_qubits}-qubit state")
    block_dim = 1 << n_hidden
    start = v.index * block_dim
    block = rho.matrix[start : start + block_dim, start : start + block_dim]
    weight = float(np.trace(block))
    if weight <= 0.0:
        raise DomainError(f"Cannot condition on configuration {v.index}: zero probability")
    return DenseOperator(block / weight)


def _neg_entropy(rho: DenseOperator) -> float:
    lam, _ = _eigh(rho)
    lam = lam[lam > 1e-300]
    return float(np.sum(lam * np.log(lam)))


def quantum_relative_entropy(rho: DenseOperator, sigma: DenseOperator) -> float:
    """
    Tr rho (log rho - log sigma) with 0 log 0 = 0.

    Raises:
        DomainError: If the dimensions differ
        DivergenceInfiniteError: If sigma vanishes on the support of rho
    """
    if rho.dim != sigma.dim:
        raise DomainError(f"Dimension mismatch: {rho.dim} vs {sigma.dim}")
    neg_entropy = _neg_entropy(rho)
    mu, vecs = _eigh(sigma)
    # <u_k| rho |u_k> for every eigenvector of sigma
    overlaps = np.einsum("ik,ij,jk->k", vecs, rho.matrix, vecs)
    support = overlaps > 1e-14
    if np.any(mu[support] <= 0.0):
        raise DivergenceInfiniteError("sigma is singular on the support of rho")
    cross = float(np.sum(overlaps[support] * np.log(mu[support])))
    return neg_entropy - cross


def clamped_hamiltonian(h: DenseOperator, v: SpinConfig) -> DenseOperator:
    """
    H_v = <v|H|v>, the hidden-register block of H at visible configuration v.

    H is diagonal on the visible register, so <v|exp(-H)|v> = exp(-H_v) and the
    conditional state can be formed without dividing by P(v).
    """
    n_hidden = h.n_qubits - v.n
    if n_hidden < 0:
        raise DomainError(f"Configuration with {v.n} spins does not fit a {h.n_qubits}-qubit operator")
    block_dim = 1 << n_hidden
    start = v.index * block_dim
    return DenseOperator(h.matrix[start : start + block_dim, start : start + block_dim])


def relative_entropy_to_gibbs(sigma: DenseOperator, h: DenseOperator) -> float:
    """D(sigma || exp(-H)/Z) using log rho = -H - log Z."""
    if sigma.dim != h.dim:
        raise DomainError(f"Dimension mismatch: {sigma.dim} vs {h.dim}")
    return _neg_entropy(sigma) + sigma.expectation(h.matrix) + log_trace_exp(h)


def joint_state(p_t: Params, data: VisibleDistribution) -> DenseOperator:
    """P_V x rho_{H|V,theta_t}: block-diagonal, block v = P_V(v) rho_{H|v,theta_t}."""
    if data.n_visible != p_t.n_visible:
        raise DomainError(f"Data has N={data.n_visible}, model has N={p_t.n_visible}")
    h = build_hamiltonian(p_t)
    n, m = p_t.n_visible, p_t.n_hidden
    block_dim = 1 << m
    out = np.zeros_like(h.matrix)
    for index in np.flatnonzero(data.probs > 0.0):
        cond = gibbs_state(clamped_hamiltonian(h, SpinConfig.from_index(int(index), n)))
        start = int(index) * block_dim
        out[start : start + block_dim, start : start + block_dim] = data.probs[index] * cond.matrix
    return DenseOperator(out)


def dense_joint_objective(p_t: Params, p: Params, data: VisibleDistribution) -> float:
    """D(P_V x rho_{H|V,theta_t} || rho_{VH,theta}) on the full Hilbert space."""
    return relative_entropy_to_gibbs(joint_state(p_t, data), build_hamiltonian(p))


def _pauli_expectations(state: DenseOperator, n_visible: int, n_hidden: int) -> GradientVector:
    total = n_visible + n_hidden
    z_vis = [embed(PAULI_Z, _visible_position(i, n_hidden), total) for i in range(n_visible)]
    z_hid = [embed(PAULI_Z, j, total) for j in range(n_hidden)]
    x_hid = [embed(PAULI_X, j, total) for j in range(n_hidden)]
    w = np.array(
        [[state.expectation(z_vis[i] @ z_hid[j]) for j in range(n_hidden)] for i in range(n_visible)]
    ).reshape(n_visible, n_hidden)
    return GradientVector(
        b_v=[state.expectation(z) for z in z_vis],
        b_h=[state.expectation(z) for z in z_hid],
        gamma=[state.expectation(x) for x in x_hid],
        w=w,
    )


def dense_negative_phase(p: Params) -> GradientVector:
    """Tr[rho_{VH,theta} O] for O in {Z_i, Z_j, X_j, Z_i Z_j}."""
    rho = gibbs_state(build_hamiltonian(p))
    return _pauli_expectations(rho, p.n_visible, p.n_hidden)


def dense_positive_phase(p: Params, data: VisibleDistribution) -> GradientVector:
    """Tr[(P_V x rho_{H|V,theta}) O] for O in {Z_i, Z_j, X_j, Z_i Z_j}."""
    return _pauli_expectations(joint_state(p, data), p.n_visible, p.n_hidden)


def _clamped_expectations(h_v: DenseOperator, n_hidden: int) -> tuple[np.ndarray, np.ndarray]:
    sigma = gibbs_state(h_v)
    mz = np.array([sigma.expectation(embed(PAULI_Z, j, n_hidden)) for j in range(n_hidden)])
    mx = np.array([sigma.expectation(embed(PAULI_X, j, n_hidden)) for j in range(n_hidden)])
    return mz, mx


def golden_thompson_bound_gradient(p: Params, data: VisibleDistribution) -> GradientVector:
    """
    Gradient of the Golden-Thompson bound from dense clamped Hamiltonians.

    d/dtheta = sum_v P_V(v) (<dH/dtheta>_{H_v} - <dH/dtheta>_H), with the
    clamped Hamiltonian H_v = <v|H|v> cut out of the full matrix. Since
    dH/dtheta is minus the corresponding Pauli operator, this equals
    negative phase minus positive phase.
    """
    if data.n_visible != p.n_visible:
        raise DomainError(f"Data has N={data.n_visible}, model has N={p.n_visible}")
    n, m = p.n_visible, p.n_hidden
    h = build_hamiltonian(p)
    spins = all_configs(n)

    pos_b_v = np.zeros(n)
    pos_b_h = np.zeros(m)
    pos_gamma = np.zeros(m)
    pos_w = np.zeros((n, m))
    for index in np.flatnonzero(data.probs > 0.0):
        h_v = clamped_hamiltonian(h, SpinConfig.from_index(int(index), n))
        mz, mx = _clamped_expectations(h_v, m)
        weight = data.probs[index]
        pos_b_v += weight * spins[index]
        pos_b_h += weight * mz
        pos_gamma += weight * mx
        pos_w += weight * np.outer(spins[index], mz)

    positive = GradientVector(pos_b_v, pos_b_h, pos_gamma, pos_w)
    negative = _pauli_expectations(gibbs_state(h), n, m)
    logger.debug("dense clamped gradient computed", n_visible=n, n_hidden=m)
    return negative - positive


def classical_rbm_marginal(p: Params) -> VisibleDistribution:
    """
    Gamma-ignoring RBM marginal by explicit (v, h) enumeration.

    P(v) ~ sum_h exp(sum_i b_i v_i + sum_j b_j h_j + sum_ij w_ij v_i h_j).
    Independent of the cosh closed form; used as the classical-limit oracle.
    """
    n, m = p.n_visible, p.n_hidden
    vs = all_configs(n)
    if m == 0:
        log_w = vs @ p.b_v
    else:
        hs = all_configs(m)
        energies = (
            (vs @ p.b_v)[:, None]
            + (hs @ p.b_h)[None, :]
            + np.einsum("vi,ij,hj->vh", vs, p.w, hs)
        )
        top = np.max(energies)
        log_w = top + np.log(np.sum(np.exp(energies - top), axis=1))
    log_w = log_w - np.max(log_w)
    return VisibleDistribution.from_weights(n, np.exp(log_w))


def classical_rbm_gradient(p: Params, data: VisibleDistribution) -> GradientVector:
    """
    KL gradient of the classical RBM (gamma ignored) from full (v, h) enumeration.

    Same sign convention as golden_thompson_bound_gradient; the gamma block is 0.
    """
    n, m = p.n_visible, p.n_hidden
    vs = all_configs(n)
    hs = all_configs(m) if m else np.zeros((1, 0))
    energies = (
        (vs @ p.b_v)[:, None] + (hs @ p.b_h)[None, :] + np.einsum("vi,ij,hj->vh", vs, p.w, hs)
    )
    joint = np.exp(energies - np.max(energies))
    joint /= np.sum(joint)
    cond = joint / np.sum(joint, axis=1, keepdims=True)
    clamped = data.probs[:, None] * cond

    def moments(weights: np.ndarray) -> GradientVector:
        pv = np.sum(weights, axis=1)
        return GradientVector(
            b_v=pv @ vs,
            b_h=np.sum(weights, axis=0) @ hs,
            gamma=np.zeros(m),
            w=np.einsum("vh,vi,hj->ij", weights, vs, hs),
        )

    return moments(joint) - moments(clamped)


def max_abs(values: np.ndarray) -> float:
    values = np.asarray(values, dtype=np.float64)
    return float(np.max(np.abs(values))) if values.size else 0.0


__all__ = [
    "DenseOperator",
    "MAX_QUBITS",
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
    "max_abs",
    "quantum_relative_entropy",
    "reduce_to_visible",
    "relative_entropy_to_gibbs",
]
