"""
Closed-form semi-quantum RBM.

The Hamiltonian

    H = -sum_i b_i Z_i - sum_j (b_j Z_j + gamma_j X_j) - sum_ij w_ij Z_i Z_j

is diagonal on the visible qubits, so for each visible configuration v the
clamped Hamiltonian is a sum of independent single-qubit terms
-(b_eff_j(v) Z + gamma_j X). Everything below is an exact enumeration over the
2^N visible configurations using that product structure:

    P(v) ~ exp(sum_i b_i v_i) * prod_j cosh D_j(v),  D_j = hypot(gamma_j, b_eff_j)
    <Z_j>_v = (b_eff_j / D_j) tanh D_j,  <X_j>_v = (gamma_j / D_j) tanh D_j

Sums over v are plain numpy reductions in a fixed order, so results do not
depend on thread count.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.special import logsumexp

from ..core.distributions import SpinConfig, VisibleDistribution, all_configs, kl_divergence, log_cosh
from ..core.errors import DomainError
from .params import GradientVector, HiddenLocalState, Params

_RATIO_ZERO = 1e-12
_RATIO_SERIES = 1e-4
LOG2 = math.log(2.0)


def tanh_ratio(d: np.ndarray | float) -> np.ndarray:
    """tanh(d)/d with the removable singularity at 0 handled by its series."""
    d = np.asarray(d, dtype=np.float64)
    d2 = d * d
    series = 1.0 - d2 / 3.0 + 2.0 * d2 * d2 / 15.0
    safe = np.where(d < _RATIO_SERIES, 1.0, d)
    ratio = np.tanh(safe) / safe
    ratio = np.where(d < _RATIO_SERIES, series, ratio)
    return np.where(d < _RATIO_ZERO, 1.0, ratio)


def _spins(p: Params, v: SpinConfig | Sequence[int]) -> np.ndarray:
    if isinstance(v, SpinConfig):
        spins = v.as_array()
    else:
        spins = SpinConfig.from_bits(v).as_array()
    if spins.shape[0] != p.n_visible:
        raise DomainError(f"Configuration has {spins.shape[0]} spins, model has N={p.n_visible}")
    return spins


def _check_hidden(p: Params, j: int) -> None:
    if not 0 <= j < p.n_hidden:
        raise DomainError(f"Hidden index {j} out of range [0, {p.n_hidden})")


def _check_data(p: Params, data: VisibleDistribution) -> None:
    if data.n_visible != p.n_visible:
        raise DomainError(f"Data has N={data.n_visible}, model has N={p.n_visible}")


def effective_field(p: Params, v: SpinConfig | Sequence[int], j: int) -> float:
    """b_eff_j(v) = b_h[j] + sum_i w[i][j] v_i."""
    _check_hidden(p, j)
    spins = _spins(p, v)
    return float(p.b_h[j] + np.dot(spins, p.w[:, j]))


def hidden_gap(p: Params, v: SpinConfig | Sequence[int], j: int) -> float:
    """D_j(v) = sqrt(gamma_j^2 + b_eff_j(v)^2)."""
    b_eff = effective_field(p, v, j)
    return float(math.hypot(p.gamma[j], b_eff))


def clamped_hidden_state(p: Params, v: SpinConfig | Sequence[int], j: int) -> HiddenLocalState:
    """Bloch data of hidden unit j with the visible layer clamped to v."""
    b_eff = effective_field(p, v, j)
    d = math.hypot(p.gamma[j], b_eff)
    ratio = float(tanh_ratio(d))
    return HiddenLocalState(b_eff=b_eff, d=d, mz=b_eff * ratio, mx=float(p.gamma[j]) * ratio)


def log_visible_weight(p: Params, v: SpinConfig | Sequence[int]) -> float:
    """Unnormalised log P(v) = sum_i b_i v_i + sum_j log cosh D_j(v)."""
    spins = _spins(p, v)
    b_eff = p.b_h + spins @ p.w
    gaps = np.hypot(p.gamma, b_eff)
    return float(np.dot(p.b_v, spins) + np.sum(log_cosh(gaps)))


@dataclass(frozen=True, eq=False)
class Evaluation:
    """
    Every per-configuration quantity of one parameter point, computed once.

    Arrays are indexed [v] or [v, j] with v in visible index order.
    """

    params: Params
    spins: np.ndarray
    b_eff: np.ndarray
    gap: np.ndarray
    mz: np.ndarray
    mx: np.ndarray
    log_weights: np.ndarray
    log_norm: float

    @cached_property
    def probs(self) -> np.ndarray:
        probs = np.exp(self.log_weights - self.log_norm)
        return probs / math.fsum(probs)

    @cached_property
    def marginal(self) -> VisibleDistribution:
        return VisibleDistribution(self.params.n_visible, self.probs)

    @property
    def log_partition(self) -> float:
        """log Tr exp(-H); each hidden trace contributes 2 cosh D_j."""
        return self.log_norm + self.params.n_hidden * LOG2

    def expectations(self, weights: np.ndarray) -> GradientVector:
        """Average <Z_i>, <Z_j>, <X_j>, <Z_i Z_j> of the clamped states under weights[v]."""
        return GradientVector(
            b_v=weights @ self.spins,
            b_h=weights @ self.mz,
            gamma=weights @ self.mx,
            w=self.spins.T @ (weights[:, None] * self.mz),
        )


def evaluate(p: Params) -> Evaluation:
    """Enumerate all visible configurations of p."""
    spins = all_configs(p.n_visible)
    b_eff = p.b_h[None, :] + spins @ p.w
    gap = np.hypot(p.gamma[None, :], b_eff)
    ratio = tanh_ratio(gap)
    log_weights = spins @ p.b_v + np.sum(log_cosh(gap), axis=1)
    return Evaluation(
        params=p,
        spins=spins,
        b_eff=b_eff,
        gap=gap,
        mz=b_eff * ratio,
        mx=p.gamma[None, :] * ratio,
        log_weights=log_weights,
        log_norm=float(logsumexp(log_weights)),
    )


def visible_marginal(p: Params) -> VisibleDistribution:
    """Exact visible marginal P_theta(v) = Tr[Lambda_v rho]."""
    return evaluate(p).marginal


def log_partition_function(p: Params) -> float:
    """log Z = log Tr exp(-H)."""
    return evaluate(p).log_partition


def positive_phase(p: Params, data: VisibleDistribution) -> GradientVector:
    """Data-averaged clamped expectations of Z_i, Z_j, X_j and Z_i Z_j."""
    _check_data(p, data)
    return evaluate(p).expectations(data.probs)


def negative_phase(p: Params) -> GradientVector:
    """Model expectations of Z_i, Z_j, X_j and Z_i Z_j."""
    ev = evaluate(p)
    return ev.expectations(ev.probs)


def conditional_kl_per_config(ev_t: Evaluation, ev: Evaluation) -> np.ndarray:
    """
    sum_j D(rho_{j|v,t} || rho_{j|v}) for every v.

    For single-qubit Gibbs states exp(a.sigma)/(2 cosh|a|) with Bloch vector
    m = (a/|a|) tanh|a| the relative entropy is
    m_t . (a_t - a) + log cosh|a| - log cosh|a_t|.
    """
    cross = ev_t.mz * (ev_t.b_eff - ev.b_eff) + ev_t.mx * (
        ev_t.params.gamma[None, :] - ev.params.gamma[None, :]
    )
    per_unit = cross + log_cosh(ev.gap) - log_cosh(ev_t.gap)
    return np.sum(per_unit, axis=1)


def _check_pair(p_t: Params, p: Params, data: VisibleDistribution) -> None:
    if not p_t.same_shape(p):
        raise DomainError("Parameter sets have different shapes")
    _check_data(p, data)


def _conditional_term(ev_t: Evaluation, ev: Evaluation, data: VisibleDistribution) -> float:
    if ev.params.n_hidden == 0:
        return 0.0
    rows = conditional_kl_per_config(ev_t, ev)
    mask = data.probs > 0.0
    return float(np.dot(data.probs[mask], rows[mask]))


def evaluated_joint_objective(ev_t: Evaluation, ev: Evaluation, data: VisibleDistribution) -> float:
    """joint_objective on already enumerated parameter points."""
    return _conditional_term(ev_t, ev, data) + kl_divergence(data, ev.marginal)


def conditional_relative_entropy_term(p_t: Params, p: Params, data: VisibleDistribution) -> float:
    """sum_v P_V(v) D(rho_{H|v,theta_t} || rho_{H|v,theta})."""
    _check_pair(p_t, p, data)
    return _conditional_term(evaluate(p_t), evaluate(p), data)


def joint_objective(p_t: Params, p: Params, data: VisibleDistribution) -> float:
    """D(P_V x rho_{H|V,theta_t} || rho_{VH,theta}), split into its two exact parts."""
    _check_pair(p_t, p, data)
    return evaluated_joint_objective(evaluate(p_t), evaluate(p), data)
