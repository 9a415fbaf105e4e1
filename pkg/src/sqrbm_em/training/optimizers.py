"""
Gradient descent and the em algorithm for the sqRBM.

Both optimisers move along the same direction, positive phase minus negative
phase. Plain gradient descent recomputes the positive phase at every step. The
em algorithm fixes the hidden conditional at the start of an epoch (e-step), so
the positive phase becomes a constant, and then descends the convex joint
objective in theta (m-step) until its change drops below epsilon. With a single
inner step the two optimisers perform identical arithmetic.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
import structlog

from ..core.distributions import VisibleDistribution, kl_divergence
from ..core.errors import DivergenceInfiniteError, DomainError, NumericError
from ..model import (
    Evaluation,
    GradientVector,
    Params,
    evaluate,
    evaluated_joint_objective,
    log_partition_function,
)
from .config import Algorithm, TrainConfig
from .record import TrainRecord

logger = structlog.get_logger(__name__)


def init_params(
    n_visible: int, n_hidden: int, rng: np.random.Generator, init_range: float
) -> Params:
    """
    Draw every entry i.i.d. uniform on [-init_range, init_range].

    Draw order is b_v, b_h, gamma, then w row-major, one double per entry.

    Raises:
        DomainError: If init_range is negative or the shape is invalid
    """
    if init_range < 0 or not math.isfinite(init_range):
        raise DomainError(f"init_range must be finite and >= 0, got {init_range}")
    if n_visible < 1 or n_hidden < 0:
        raise DomainError(f"Invalid shape N={n_visible}, M={n_hidden}")
    size = n_visible + 2 * n_hidden + n_visible * n_hidden
    values = rng.uniform(-init_range, init_range, size=size)
    return Params.from_flat(n_visible, n_hidden, values)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _descend(
    p: Params,
    positive: GradientVector,
    ev: Evaluation,
    eta: float,
    freeze_gamma: bool,
    iterate: int | None = None,
) -> Params:
    direction = positive - ev.expectations(ev.probs)
    if freeze_gamma:
        direction = direction.without_gamma()
    bad = direction.first_nonfinite_entry()
    if bad is not None:
        raise NumericError(f"Non-finite gradient entry {bad}", entry=bad, iterate=iterate)
    updated = p.flatten() + eta * direction.flatten()
    if not np.all(np.isfinite(updated)):
        bad = p.entry_names()[int(np.flatnonzero(~np.isfinite(updated))[0])]
        raise NumericError(f"Parameter entry {bad} overflowed", entry=bad, iterate=iterate)
    return Params.from_flat(p.n_visible, p.n_hidden, updated)


def _check_data(p: Params, data: VisibleDistribution) -> None:
    if data.n_visible != p.n_visible:
        raise DomainError(f"Data has N={data.n_visible}, model has N={p.n_visible}")


def gd_step(
    p: Params, data: VisibleDistribution, eta: float, *, freeze_gamma: bool = False
) -> Params:
    """
    One gradient-descent step on D_KL(P_V || P_theta).

    Returns p + eta * (positive_phase(p, data) - negative_phase(p)).

    Raises:
        DomainError: If data and p disagree on N
        NumericError: If the gradient has a non-finite entry
    """
    _check_data(p, data)
    ev = evaluate(p)
    return _descend(p, ev.expectations(data.probs), ev, eta, freeze_gamma)


@dataclass(frozen=True, eq=False)
class EStep:
    """
    Hidden conditional of theta_t, frozen for one m-step.

    Attributes:
        params: theta_t
        evaluation: Enumeration of theta_t (supplies the clamped states)
        positive: Data-averaged clamped expectations, constant during the m-step
    """

    params: Params
    evaluation: Evaluation
    positive: GradientVector


def e_step(p_t: Params, data: VisibleDistribution) -> EStep:
    """Project onto the data manifold: fix rho_{H|V} to theta_t's conditional."""
    _check_data(p_t, data)
    ev = evaluate(p_t)
    return EStep(params=p_t, evaluation=ev, positive=ev.expectations(data.probs))


@dataclass(frozen=True, eq=False)
class MStepResult:
    params: Params
    evaluation: Evaluation
    inner_steps: int
    trace: list[float]


def _check_marginal(ev: Evaluation, iterate: int) -> None:
    if not np.all(np.isfinite(ev.probs)):
        raise NumericError("Model marginal is not finite", iterate=iterate)


def _m_projection(estep: EStep, data: VisibleDistribution, cfg: TrainConfig) -> MStepResult:
    ev_t = estep.evaluation
    theta = estep.params
    ev = ev_t
    previous = evaluated_joint_objective(ev_t, ev, data)
    trace = [previous]
    steps = 0
    for steps in range(1, cfg.n_epochs_m + 1):
        theta = _descend(theta, estep.positive, ev, cfg.eta, cfg.freeze_gamma, iterate=steps)
        ev = evaluate(theta)
        _check_marginal(ev, steps)
        try:
            value = evaluated_joint_objective(ev_t, ev, data)
        except DivergenceInfiniteError as e:
            raise NumericError(f"Joint objective diverged: {e}", iterate=steps) from e
        if not math.isfinite(value):
            raise NumericError(f"Non-finite joint objective {value}", iterate=steps)
        trace.append(value)
        if abs(value - previous) < cfg.epsilon:
            break
        previous = value
    return MStepResult(params=theta, evaluation=ev, inner_steps=steps, trace=trace)


def m_step(
    p_t: Params, data: VisibleDistribution, cfg: TrainConfig
) -> tuple[Params, int, float]:
    """
    Minimise the joint objective over theta with theta_t's conditional fixed.

    Runs theta <- theta + eta (positive_t - negative(theta)) from theta = p_t until
    the joint objective changes by less than cfg.epsilon or cfg.n_epochs_m steps
    were taken.

    Returns:
        (theta, inner steps taken, final joint objective)

    Raises:
        NumericError: With the inner iterate index, on non-finite values
    """
    result = _m_projection(e_step(p_t, data), data, cfg)
    return result.params, result.inner_steps, result.trace[-1]


def cross_entropy(statistics: GradientVector, p: Params) -> float:
    """
    -Tr[rho' log rho_theta] = log Z(theta) - <theta, statistics>.

    ``statistics`` are the Pauli expectations of rho' (the e-step positive phase).
    """
    return log_partition_function(p) - statistics.dot(p)


def delta_qre(statistics: GradientVector, p_old: Params, p_new: Params) -> float:
    """Change of the m-step objective between two parameter points."""
    return cross_entropy(statistics, p_new) - cross_entropy(statistics, p_old)


def _visible_kl(data: VisibleDistribution, ev: Evaluation, epoch: int) -> float:
    _check_marginal(ev, epoch)
    try:
        kl = kl_divergence(data, ev.marginal)
    except DivergenceInfiniteError as e:
        raise NumericError(f"Visible KL diverged: {e}", iterate=epoch) from e
    if not math.isfinite(kl):
        raise NumericError(f"Non-finite visible KL {kl}", iterate=epoch)
    return kl


def train_from(data: VisibleDistribution, initial: Params, cfg: TrainConfig) -> TrainRecord:
    """
    Run the configured optimiser from given initial parameters.

    Stops after cfg.n_epochs epochs, or earlier once the visible KL changes by
    less than cfg.epsilon between consecutive epochs.

    Raises:
        NumericError: With the partial record attached as ``record``
    """
    _check_data(initial, data)
    if cfg.freeze_gamma:
        initial = initial.with_zero_gamma()
    ev = evaluate(initial)
    record = TrainRecord(
        config=cfg,
        n_visible=initial.n_visible,
        n_hidden=initial.n_hidden,
        initial_params=initial,
        final_params=initial,
        initial_kl=_visible_kl(data, ev, 0),
    )
    log = logger.bind(variant=cfg.label, seed=cfg.seed)
    log.info("training started", n_epochs=cfg.n_epochs, initial_kl=record.initial_kl)

    theta = initial
    previous = record.initial_kl
    start = time.perf_counter()
    try:
        for epoch in range(1, cfg.n_epochs + 1):
            if cfg.algorithm is Algorithm.GD:
                theta = _descend(
                    theta, ev.expectations(data.probs), ev, cfg.eta, cfg.freeze_gamma, epoch
                )
                ev = evaluate(theta)
                inner = None
            else:
                result = _m_projection(
                    EStep(params=theta, evaluation=ev, positive=ev.expectations(data.probs)),
                    data,
                    cfg,
                )
                theta, ev, inner = result.params, result.evaluation, result
            kl = _visible_kl(data, ev, epoch)

            record.kl_curve.append(kl)
            record.final_params = theta
            record.epochs_run = epoch
            if inner is not None:
                record.joint_kl_curve.append(inner.trace)
                record.inner_steps_per_epoch.append(inner.inner_steps)
            log.debug(
                "epoch finished",
                epoch=epoch,
                kl=kl,
                inner_steps=inner.inner_steps if inner is not None else None,
            )

            if abs(previous - kl) < cfg.epsilon:
                record.converged = True
                break
            previous = kl
    except NumericError as e:
        record.failed = True
        record.error = str(e)
        record.wall_time = time.perf_counter() - start
        log.warning("training failed", epoch=record.epochs_run + 1, error=str(e))
        raise NumericError(str(e), entry=e.entry, iterate=e.iterate, record=record) from e

    record.wall_time = time.perf_counter() - start
    log.info(
        "training finished",
        epochs=record.epochs_run,
        converged=record.converged,
        final_kl=record.final_kl,
    )
    return record


def train(data: VisibleDistribution, shape: tuple[int, int], cfg: TrainConfig) -> TrainRecord:
    """
    Initialise from cfg.seed and train.

    Args:
        data: Target distribution P_V
        shape: (N, M)
        cfg: Training settings, including the init seed and range

    Returns:
        The completed TrainRecord

    Raises:
        DomainError: If data.n_visible != N
        NumericError: On numeric failure, carrying the partial record
    """
    n_visible, n_hidden = shape
    if data.n_visible != n_visible:
        raise DomainError(f"Data has N={data.n_visible}, shape asks for N={n_visible}")
    initial = init_params(n_visible, n_hidden, make_rng(cfg.seed), cfg.init_range)
    return train_from(data, initial, cfg)
