"""Initialisation, gradient descent, the e/m projections and full training runs."""

import csv

import numpy as np
import pytest

from sqrbm_em.core import DivergenceInfiniteError, DomainError, NumericError, VisibleDistribution
from sqrbm_em.core import kl_divergence
from sqrbm_em.datasets import gen_parity, generate
from sqrbm_em.experiments import preset_plans
from sqrbm_em.model import Params, joint_objective, log_partition_function, visible_marginal
from sqrbm_em.training import (
    Algorithm,
    ModelKind,
    TrainConfig,
    TrainRecord,
    cross_entropy,
    delta_qre,
    e_step,
    gd_step,
    init_params,
    m_step,
    make_rng,
    optimizers,
    train,
    train_from,
)


def em(**overrides):
    return TrainConfig(algorithm=Algorithm.EM, **overrides)


def gd(**overrides):
    return TrainConfig(algorithm=Algorithm.GD, **overrides)


def fd_kl_gradient(p, data, h=1e-5):
    flat = p.flatten()
    grad = np.empty_like(flat)
    for k in range(flat.size):
        up, down = flat.copy(), flat.copy()
        up[k] += h
        down[k] -= h
        grad[k] = (
            kl_divergence(data, visible_marginal(Params.from_flat(p.n_visible, p.n_hidden, up)))
            - kl_divergence(
                data, visible_marginal(Params.from_flat(p.n_visible, p.n_hidden, down))
            )
        ) / (2 * h)
    return grad


# --- initialisation ----------------------------------------------------------


def test_init_params_draw_order():
    p = init_params(1, 2, make_rng(0), 5.0)
    expected = np.random.Generator(np.random.PCG64(0)).uniform(-5.0, 5.0, size=7)
    np.testing.assert_array_equal(p.flatten(), expected)


def test_init_params_zero_range():
    p = init_params(3, 2, make_rng(4), 0.0)
    assert p == Params.zeros(3, 2)


def test_init_params_is_deterministic():
    assert init_params(3, 2, make_rng(9), 1.0) == init_params(3, 2, make_rng(9), 1.0)
    assert init_params(3, 2, make_rng(9), 1.0) != init_params(3, 2, make_rng(10), 1.0)


def test_init_params_rejects_bad_input():
    with pytest.raises(DomainError):
        init_params(3, 2, make_rng(0), -1.0)
    with pytest.raises(DomainError):
        init_params(0, 2, make_rng(0), 1.0)


# --- gradient descent ---------------------------------------------------------


def test_gd_step_with_zero_learning_rate_keeps_params(make_params, make_data):
    p = make_params(3, 2)
    assert gd_step(p, make_data(3), 0.0) == p


def test_gd_step_at_the_model_marginal_is_stationary(make_params):
    p = make_params(3, 2)
    assert gd_step(p, visible_marginal(p), 0.2) == p


def test_gd_direction_is_minus_kl_gradient(make_params, make_data):
    for _ in range(5):
        p, data = make_params(3, 2, scale=1.0), make_data(3)
        direction = gd_step(p, data, 1.0).flatten() - p.flatten()
        np.testing.assert_allclose(direction, -fd_kl_gradient(p, data), atol=1e-7)


def test_gd_direction_from_zero_params_on_parity():
    p, data = Params.zeros(3, 1), gen_parity(3)
    direction = gd_step(p, data, 1.0).flatten() - p.flatten()
    np.testing.assert_allclose(direction, -fd_kl_gradient(p, data), atol=1e-6)


def test_gd_step_shape_mismatch(make_params):
    with pytest.raises(DomainError):
        gd_step(make_params(3, 2), VisibleDistribution.uniform(2), 0.1)


def test_gd_step_freezes_gamma(make_params, make_data):
    p = make_params(3, 2)
    np.testing.assert_array_equal(gd_step(p, make_data(3), 0.5, freeze_gamma=True).gamma, p.gamma)


# --- e-step and m-step --------------------------------------------------------


def test_e_step_without_hidden_units_gives_data_moments():
    data = VisibleDistribution(2, [0.4, 0.3, 0.2, 0.1])
    estep = e_step(Params(b_v=[0.3, -0.1], b_h=[], gamma=[], w=[]), data)
    # <v_0> = 0.4 - 0.3 + 0.2 - 0.1, <v_1> = 0.4 + 0.3 - 0.2 - 0.1
    np.testing.assert_allclose(estep.positive.b_v, [0.2, 0.4])
    assert estep.positive.w.shape == (2, 0)


def test_e_step_is_a_pure_function(make_params, make_data):
    p, data = make_params(3, 2), make_data(3)
    assert e_step(p, data).positive == e_step(p, data).positive


def test_single_inner_step_matches_gradient_descent(make_params, make_data):
    p, data = make_params(3, 2), make_data(3)
    theta, steps, _ = m_step(p, data, em(n_epochs_m=1, eta=0.2))
    assert steps == 1
    np.testing.assert_array_equal(theta.flatten(), gd_step(p, data, 0.2).flatten())


def test_m_step_at_the_model_marginal_stops_immediately(make_params):
    p = make_params(3, 2)
    theta, steps, joint = m_step(p, visible_marginal(p), em(n_epochs_m=50))
    assert theta == p
    assert steps == 1
    assert joint == pytest.approx(0.0, abs=1e-12)


def test_m_step_respects_inner_budget(make_params, make_data):
    _, steps, _ = m_step(make_params(3, 1), make_data(3), em(n_epochs_m=3, epsilon=1e-30))
    assert steps == 3


def test_inner_iterates_decrease_the_joint_objective(make_params):
    data = gen_parity(3)
    p_t = make_params(3, 1)
    estep = e_step(p_t, data)
    cfg = em(n_epochs_m=40, epsilon=1e-30)
    trace = optimizers._m_projection(estep, data, cfg).trace

    assert len(trace) == 41
    assert trace[0] == pytest.approx(kl_divergence(data, visible_marginal(p_t)), abs=1e-12)
    assert all(b <= a + 1e-12 for a, b in zip(trace, trace[1:]))


def test_inner_iterates_from_seeded_init_on_parity():
    data = gen_parity(3)
    p_t = init_params(3, 2, make_rng(0), 5.0)
    trace = optimizers._m_projection(e_step(p_t, data), data, em(eta=0.1, n_epochs_m=200)).trace

    assert all(b <= a + 1e-12 for a, b in zip(trace, trace[1:]))
    assert trace[-1] < trace[0]


def test_delta_qre_equals_joint_objective_difference(make_params, make_data):
    p_t, a, b, data = make_params(3, 2), make_params(3, 2), make_params(3, 2), make_data(3)
    stats = e_step(p_t, data).positive
    expected = joint_objective(p_t, b, data) - joint_objective(p_t, a, data)
    assert delta_qre(stats, a, b) == pytest.approx(expected, abs=1e-10)


def test_cross_entropy_at_zero_params(make_params, make_data):
    stats = e_step(make_params(2, 1), make_data(2)).positive
    assert cross_entropy(stats, Params.zeros(2, 1)) == pytest.approx(
        log_partition_function(Params.zeros(2, 1))
    )


def test_joint_objective_is_convex_along_lines(make_params, make_data):
    p_t, a, b, data = make_params(3, 2), make_params(3, 2), make_params(3, 2), make_data(3)
    ts = np.linspace(0.0, 1.0, 11)
    values = [
        joint_objective(
            p_t, Params.from_flat(3, 2, (1 - t) * a.flatten() + t * b.flatten()), data
        )
        for t in ts
    ]
    second = np.diff(values, n=2)
    assert np.all(second >= -1e-10)


# --- full runs --------------------------------------------------------------


def test_em_with_one_inner_step_reproduces_gradient_descent(make_data):
    data = make_data(3)
    em_record = train(data, (3, 2), em(n_epochs=15, n_epochs_m=1, seed=3, epsilon=1e-12))
    gd_record = train(data, (3, 2), gd(n_epochs=15, seed=3, epsilon=1e-12))

    assert em_record.kl_curve == gd_record.kl_curve
    assert em_record.final_params == gd_record.final_params
    assert em_record.inner_steps_per_epoch == [1] * em_record.epochs_run


def test_zero_epochs_returns_the_initial_state(make_data):
    data = make_data(3)
    record = train(data, (3, 2), em(n_epochs=0, seed=1))

    assert record.kl_curve == []
    assert record.epochs_run == 0
    assert record.final_params == record.initial_params
    assert record.final_kl == record.initial_kl
    assert record.initial_kl == pytest.approx(
        kl_divergence(data, visible_marginal(init_params(3, 2, make_rng(1), 5.0)))
    )


def test_em_epochs_never_increase_visible_kl():
    data = gen_parity(3)
    record = train(data, (3, 1), em(n_epochs=8, n_epochs_m=30, seed=2, init_range=1.0))

    curve = [record.initial_kl, *record.kl_curve]
    assert all(b <= a + 1e-12 for a, b in zip(curve, curve[1:]))
    # tracing out the hidden layer can only lower the divergence
    for kl, trace in zip(record.kl_curve, record.joint_kl_curve):
        assert kl <= trace[-1] + 1e-12


def test_large_epsilon_stops_after_first_epoch(make_data):
    record = train(make_data(3), (3, 2), gd(n_epochs=50, epsilon=10.0, init_range=0.5))
    assert record.converged
    assert record.epochs_run == 1


def test_rbm_variant_keeps_gamma_at_zero(make_data):
    cfg = gd(n_epochs=5, model=ModelKind.RBM, seed=6)
    record = train(make_data(3), (3, 2), cfg)

    np.testing.assert_array_equal(record.initial_params.gamma, [0.0, 0.0])
    np.testing.assert_array_equal(record.final_params.gamma, [0.0, 0.0])
    assert cfg.label == "gd-rbm"


def test_train_rejects_shape_mismatch(make_data):
    with pytest.raises(DomainError):
        train(make_data(3), (4, 2), gd())


def test_numeric_failure_keeps_partial_record(monkeypatch, make_data):
    real = optimizers.kl_divergence
    calls = {"n": 0}

    def flaky(p, q):
        calls["n"] += 1
        if calls["n"] == 3:
            raise DivergenceInfiniteError("forced")
        return real(p, q)

    monkeypatch.setattr(optimizers, "kl_divergence", flaky)
    with pytest.raises(NumericError) as exc:
        train(make_data(3), (3, 2), gd(n_epochs=10, epsilon=1e-30))

    record = exc.value.record
    assert record.failed
    assert record.epochs_run == 1
    assert len(record.kl_curve) == 1
    assert "forced" in record.error
    assert exc.value.iterate == 2


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_overflowing_marginal_raises_numeric_error(make_data):
    huge = Params(b_v=[1e308, 1e308, 1e308], b_h=[0.0], gamma=[0.0], w=np.zeros((3, 1)))
    with pytest.raises(NumericError):
        train_from(make_data(3), huge, gd(n_epochs=2))


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_non_finite_gradient_names_the_entry(make_data):
    huge = Params(b_v=[1e308, 1e308, 1e308], b_h=[0.0], gamma=[0.0], w=np.zeros((3, 1)))
    with pytest.raises(NumericError) as exc:
        gd_step(huge, make_data(3), 0.1)
    assert exc.value.entry == "b_v[0]"


def test_record_csv_and_json(tmp_path, make_data):
    record = train(make_data(3), (3, 1), em(n_epochs=3, n_epochs_m=5, seed=8, epsilon=1e-30))
    record.write_csv(tmp_path / "run.csv")
    record.save(tmp_path / "run.json")

    with open(tmp_path / "run.csv", newline="") as f:
        rows = list(csv.DictReader(f))
    assert [row["epoch"] for row in rows] == ["1", "2", "3"]
    assert float(rows[0]["kl"]) == record.kl_curve[0]
    assert int(rows[2]["inner_steps"]) == record.inner_steps_per_epoch[2]

    loaded = TrainRecord.load(tmp_path / "run.json")
    assert loaded.kl_curve == record.kl_curve
    assert loaded.final_params == record.final_params
    assert loaded.config == record.config


def test_gd_record_leaves_em_columns_blank(tmp_path, make_data):
    record = train(make_data(3), (3, 1), gd(n_epochs=2, epsilon=1e-30))
    record.write_csv(tmp_path / "run.csv")
    lines = (tmp_path / "run.csv").read_text().splitlines()
    assert lines[0] == "epoch,kl,inner_steps,joint_kl_final"
    assert lines[1].endswith(",,")


def test_padded_curve(make_data):
    record = train(make_data(2), (2, 1), gd(n_epochs=2, epsilon=1e-30))
    padded = record.padded_curve(5)
    assert padded[:2] == record.kl_curve
    assert padded[2:] == [record.kl_curve[-1]] * 3


def test_malformed_record_file(tmp_path):
    (tmp_path / "bad.json").write_text('{"config": {}}')
    with pytest.raises(DomainError):
        TrainRecord.load(tmp_path / "bad.json")


@pytest.mark.slow
def test_em_learns_four_bit_parity():
    data = gen_parity(4)
    record = train(data, (4, 2), em(n_epochs=50, n_epochs_m=200, seed=0))
    assert record.final_kl < record.initial_kl


@pytest.mark.parametrize("seed", range(5))
def test_single_inner_step_matches_gradient_descent_on_four_bit_parity(seed):
    data = gen_parity(4)
    em_record = train(data, (4, 2), em(n_epochs=20, n_epochs_m=1, seed=seed, epsilon=1e-12))
    gd_record = train(data, (4, 2), gd(n_epochs=20, seed=seed, epsilon=1e-12))

    assert em_record.kl_curve == gd_record.kl_curve
    assert em_record.final_params == gd_record.final_params


@pytest.mark.slow
@pytest.mark.parametrize("plan", preset_plans("paper"), ids=lambda plan: plan.label)
def test_em_chain_never_increases_on_benchmark_families(plan):
    data = generate(plan.dataset).distribution
    for seed in range(10):
        record = train(data, plan.shape.as_tuple(), em(n_epochs=100, seed=seed))
        starts = [record.initial_kl, *record.kl_curve]
        for start, kl, trace in zip(starts, record.kl_curve, record.joint_kl_curve):
            assert trace[0] == pytest.approx(start, abs=1e-9)
            assert all(b <= a + 1e-9 for a, b in zip(trace, trace[1:]))
            assert kl <= trace[-1] + 1e-9
