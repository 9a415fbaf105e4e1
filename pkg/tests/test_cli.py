"""End-to-end tests of the sqrbm-em command line."""

import csv
import json

import pytest

from sqrbm_em.cli.main import EXIT_IO, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, main


@pytest.fixture
def parity_file(tmp_path):
    path = tmp_path / "parity.json"
    assert main(["gen-data", "--kind", "parity", "--n", "3", "--out", str(path)]) == EXIT_OK
    return path


def kl_column(path):
    with open(path, newline="") as f:
        return [row["kl"] for row in csv.DictReader(f)]


def test_version_names_the_prng(capsys):
    assert main(["--version"]) == EXIT_OK
    assert "PCG64" in capsys.readouterr().out


def test_missing_command_is_a_usage_error():
    assert main([]) == EXIT_USAGE


def test_gen_data_parity(parity_file, capsys):
    probs = json.loads(parity_file.read_text())["probs"]
    assert sorted(probs) == [0.0] * 4 + [0.25] * 4


def test_gen_data_rejects_odd_cardinality(tmp_path):
    out = tmp_path / "c.json"
    assert main(["gen-data", "--kind", "cardinality", "--n", "5", "--out", str(out)]) == EXIT_USAGE
    assert not out.exists()


def test_gen_data_bernoulli_echoes_centers(tmp_path, capsys):
    out = tmp_path / "a.json"
    argv = ["gen-data", "--kind", "bernoulli", "--n", "4", "--k", "8", "--p", "0.9"]
    assert main([*argv, "--seed", "0", "--out", str(out)]) == EXIT_OK

    spec = json.loads(out.read_text())["spec"]
    assert len(spec["centers"]) == 8
    assert spec["k"] == 8
    assert "centers" in capsys.readouterr().out


def test_train_with_zero_epochs(parity_file, tmp_path):
    out = tmp_path / "run.json"
    argv = ["train", "--data", str(parity_file), "--n-hidden", "1", "--epochs", "0"]
    assert main([*argv, "--out", str(out)]) == EXIT_OK

    record = json.loads(out.read_text())
    assert record["kl_curve"] == []
    assert record["epochs_run"] == 0
    assert record["tool"]["prng"] == "PCG64"
    assert (tmp_path / "run.csv").read_text() == "epoch,kl,inner_steps,joint_kl_final\n"


def test_single_inner_step_matches_gradient_descent(parity_file, tmp_path):
    common = ["train", "--data", str(parity_file), "--n-hidden", "2", "--epochs", "6"]
    common += ["--seed", "3", "--init-range", "1"]
    em_out, gd_out = tmp_path / "em.json", tmp_path / "gd.json"
    assert main([*common, "--algo", "em", "--epochs-m", "1", "--out", str(em_out)]) == EXIT_OK
    assert main([*common, "--algo", "gd", "--out", str(gd_out)]) == EXIT_OK

    assert kl_column(tmp_path / "em.csv") == kl_column(tmp_path / "gd.csv")


def test_train_missing_data_file_is_an_io_error(tmp_path):
    argv = ["train", "--data", str(tmp_path / "absent.json"), "--n-hidden", "1"]
    assert main([*argv, "--out", str(tmp_path / "run.json")]) == EXIT_IO


def test_train_rejects_bad_learning_rate(parity_file, tmp_path):
    argv = ["train", "--data", str(parity_file), "--n-hidden", "1", "--eta", "-1"]
    assert main([*argv, "--out", str(tmp_path / "run.json")]) == EXIT_USAGE


def test_verify_passes(capsys):
    assert main(["verify", "--n", "2", "--m", "2", "--trials", "5"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.count("PASS") == 5


def test_verify_rejects_oversized_systems():
    assert main(["verify", "--n", "10", "--m", "5", "--trials", "1"]) == EXIT_USAGE


def test_verify_with_no_trials_warns(capsys):
    assert main(["verify", "--n", "2", "--m", "1", "--trials", "0"]) == EXIT_OK
    assert "--trials 0" in capsys.readouterr().err


def test_verify_failure_exit_code():
    assert main(["verify", "--n", "2", "--m", "1", "--trials", "1", "--tol", "1e-30"]) == EXIT_VERIFY


def test_experiment_from_plan_file(tmp_path):
    plan = {
        "dataset": {"kind": "parity", "n": 3},
        "shape": {"n_visible": 3, "n_hidden": 1},
        "algorithms": [{"algorithm": "em"}, {"algorithm": "gd"}],
        "n_runs": 2,
        "train": {"n_epochs": 3, "n_epochs_m": 10, "init_range": 1.0},
    }
    plan_path = tmp_path / "plan.json"
    plan_path.write_text(json.dumps(plan))
    out = tmp_path / "results"

    assert main(["experiment", "--plan", str(plan_path), "--out", str(out), "--workers", "2"]) == 0
    assert sorted(p.name for p in out.iterdir()) == sorted(
        ["table.csv", "curves.csv", "curves.svg", "result.json", "manifest.json"]
    )
    with open(out / "table.csv", newline="") as f:
        assert [row["algorithm"] for row in csv.DictReader(f)] == ["em-sqrbm", "gd-sqrbm"]


def test_experiment_flags_override_the_plan(tmp_path):
    plan = {
        "dataset": {"kind": "parity", "n": 3},
        "shape": {"n_visible": 3, "n_hidden": 1},
        "algorithms": [{"algorithm": "gd"}],
        "n_runs": 5,
        "train": {"n_epochs": 50},
    }
    plan_path = tmp_path / "plan.json"
    plan_path.write_text(json.dumps(plan))
    out = tmp_path / "results"

    argv = ["experiment", "--plan", str(plan_path), "--out", str(out)]
    assert main([*argv, "--runs", "1", "--epochs", "2"]) == EXIT_OK
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["plans"][0]["n_runs"] == 1
    assert manifest["plans"][0]["train"]["n_epochs"] == 2


def test_experiment_with_invalid_plan(tmp_path):
    plan_path = tmp_path / "plan.json"
    plan_path.write_text(json.dumps({"dataset": {"kind": "parity", "n": 3}}))
    assert main(["experiment", "--plan", str(plan_path), "--out", str(tmp_path / "r")]) == 2


def test_export_record(parity_file, tmp_path):
    run = tmp_path / "run.json"
    argv = ["train", "--data", str(parity_file), "--n-hidden", "1", "--epochs", "3"]
    assert main([*argv, "--epochs-m", "5", "--out", str(run)]) == EXIT_OK

    exported = tmp_path / "exported.csv"
    assert main(["export", "--record", str(run), "--out", str(exported)]) == EXIT_OK
    assert exported.read_text() == (tmp_path / "run.csv").read_text()


def test_export_result(tmp_path):
    plan = {
        "dataset": {"kind": "parity", "n": 3},
        "shape": {"n_visible": 3, "n_hidden": 1},
        "algorithms": [{"algorithm": "gd"}],
        "n_runs": 1,
        "train": {"n_epochs": 2},
    }
    plan_path = tmp_path / "plan.json"
    plan_path.write_text(json.dumps(plan))
    assert main(["experiment", "--plan", str(plan_path), "--out", str(tmp_path / "r")]) == 0

    argv = ["export", "--result", str(tmp_path / "r" / "result.json"), "--out", str(tmp_path / "e")]
    assert main(argv) == EXIT_OK
    for name in ("table.csv", "curves.csv"):
        assert (tmp_path / "e" / name).read_bytes() == (tmp_path / "r" / name).read_bytes()


def test_quiet_suppresses_summaries(tmp_path, capsys):
    out = tmp_path / "d.json"
    assert main(["gen-data", "--kind", "parity", "--n", "3", "--out", str(out), "--quiet"]) == 0
    assert capsys.readouterr().out == ""
    assert out.exists()


@pytest.mark.parametrize(
    "command",
    [
        ["train", "--n-hidden", "1", "--data"],
        ["export", "--record"],
        ["export", "--result"],
        ["experiment", "--plan"],
    ],
)
@pytest.mark.parametrize("content", ["{not json", "[1,2", "[1, 2]"])
def test_corrupt_input_files_are_usage_errors(tmp_path, capsys, command, content):
    path = tmp_path / "input.json"
    path.write_text(content)
    argv = [*command, str(path), "--out", str(tmp_path / "out")]
    assert main(argv) == EXIT_USAGE
    assert "Error" in capsys.readouterr().err
