import csv
import json

import pytest

import main
from src.algorithms.bounds import M_HALF
from src.algorithms.inequalities import GapReport
from src.controllers.experiment_controller import (
    EXIT_OK,
    EXIT_USAGE,
    RUN_LOG,
    ExperimentController,
    RunConfig,
    run,
)
from src.models.errors import LabError


def read_rows(path):
    with open(path, newline='') as f:
        return list(csv.DictReader(f))


def test_run_config_validation():
    with pytest.raises(LabError):
        RunConfig("plot")
    with pytest.raises(LabError):
        RunConfig("constants", seed=-1)
    assert RunConfig("constants").seed == 20080706


def test_default_seed_override(monkeypatch):
    monkeypatch.setenv("CSITLAB_SEED", "99")
    assert RunConfig("constants").seed == 99


def test_maxent_rows(tmp_path):
    out = tmp_path / "maxent.csv"
    code = run(RunConfig("maxent", output_path=str(out), options={"gamma": [1 / 3.141592653589793, 2.0]}))
    assert code == EXIT_OK
    rows = read_rows(out)
    assert len(rows) == 2
    assert float(rows[1]["alpha"]) == pytest.approx(0.6968, abs=1e-4)


def test_maxent_out_of_family(tmp_path, capsys):
    code = run(RunConfig("maxent", output_path=str(tmp_path / "m.csv"), options={"gamma": [0.1]}))
    assert code == EXIT_USAGE
    assert "1/pi" in capsys.readouterr().err


def test_constants_row(tmp_path):
    out = tmp_path / "constants.csv"
    assert run(RunConfig("constants", output_path=str(out))) == EXIT_OK
    (row,) = read_rows(out)
    assert float(row["m_half"]) == pytest.approx(M_HALF, abs=1e-6)


def test_bound_csv(tmp_path, config_file):
    out = tmp_path / "bound.csv"
    options = {"snr_db_start": 0.0, "snr_db_stop": 120.0, "snr_db_step": 20.0}
    assert run(RunConfig("bound", config_path=str(config_file), output_path=str(out), options=options)) == EXIT_OK
    rows = read_rows(out)
    assert [float(r["snr_db"]) for r in rows] == [0.0, 20.0, 40.0, 60.0, 80.0, 100.0, 120.0]
    assert list(rows[0]) == ["snr_db", "snr", "term_log_a", "term_log_h", "term_constants", "total", "ratio"]


def test_bound_one_decade_grid(tmp_path, config_file):
    options = {"snr_db_start": 10.0, "snr_db_stop": 20.0, "snr_db_step": 2.0}
    config = RunConfig("bound", config_path=str(config_file), output_path=str(tmp_path / "b.csv"), options=options)
    assert run(config) == EXIT_USAGE


def test_missing_config_file(tmp_path):
    config = RunConfig("bound", config_path=str(tmp_path / "absent.cfg"), output_path=str(tmp_path / "b.csv"))
    assert run(config) == EXIT_USAGE


def test_run_log_is_appended(tmp_path):
    out = str(tmp_path / "constants.csv")
    run(RunConfig("constants", output_path=out))
    run(RunConfig("constants", output_path=out))
    with open(tmp_path / RUN_LOG) as f:
        records = json.load(f)
    assert len(records) == 2
    assert records[0]["subcommand"] == "constants"
    assert records[0]["exit_code"] == EXIT_OK
    assert records[0]["rows"] == 1


def test_verify_rows_and_determinism(tmp_path):
    paths = [tmp_path / "first.csv", tmp_path / "second.csv"]
    for path in paths:
        code = run(RunConfig("verify", seed=7, output_path=str(path), options={"lemma": 2, "trials": 3}))
        assert code == EXIT_OK
    assert paths[0].read_bytes() == paths[1].read_bytes()
    rows = read_rows(paths[0])
    assert len(rows) == 3
    assert {"lemma", "trial", "check", "lhs", "rhs", "gap", "combined_se", "pass", "mode"} <= set(rows[0])


@pytest.mark.slow
def test_verify_lemma4_suite(tmp_path):
    out = tmp_path / "lemma4.csv"
    code = run(RunConfig("verify", seed=7, output_path=str(out), options={"lemma": 4, "trials": 25}))
    assert code == EXIT_OK
    assert len(read_rows(out)) == 75


def test_verify_reports_violations(tmp_path, capsys, monkeypatch):
    failing = GapReport.build("forced", 0.0, 1.0)
    monkeypatch.setattr("src.controllers.experiment_controller.run_suite", lambda lemma, trials, stream: [[failing]])
    code = run(RunConfig("verify", output_path=str(tmp_path / "v.csv"), options={"lemma": 1}))
    assert code == 1
    assert "forced" in capsys.readouterr().err


def test_sim_csv(tmp_path, config_file):
    out = tmp_path / "sim.csv"
    options = {"scheme": "cooperative", "snr_db_start": 0.0, "snr_db_stop": 30.0, "snr_db_step": 10.0,
               "mc": 10_000}
    assert run(RunConfig("sim", config_path=str(config_file), output_path=str(out), options=options)) == EXIT_OK
    rows = read_rows(out)
    assert len(rows) == 4
    assert all(float(r["sum_rate"]) <= float(r["bound_total"]) for r in rows)


def test_controller_keeps_rows(tmp_path):
    controller = ExperimentController(RunConfig("constants", output_path=str(tmp_path / "c.csv")))
    assert controller.run() == EXIT_OK
    assert len(controller.rows) == 1
    assert controller.summary.startswith("constants")


def test_main_entry_point(tmp_path):
    out = tmp_path / "maxent.csv"
    assert main.main(["maxent", "--gamma", "2", "5", "--out", str(out)]) == EXIT_OK
    assert len(read_rows(out)) == 2


def test_main_usage_errors():
    with pytest.raises(SystemExit) as exc:
        main.main(["verify", "--lemma", "9"])
    assert exc.value.code == 2
    assert main.main(["constants", "--seed", str(2 ** 64)]) == EXIT_USAGE


@pytest.mark.parametrize("argv", [
    ["bound", "--snr-db-step", "0"],
    ["bound", "--snr-db-start", "40", "--snr-db-stop", "0"],
    ["sim", "--scheme", "cooperative", "--snr-db-step", "0"],
    ["sim", "--scheme", "cooperative", "--snr-db-start", "40", "--snr-db-stop", "0"],
])
def test_bad_grid_flags_are_usage_errors(argv, tmp_path, config_file, capsys):
    out = tmp_path / "grid.csv"
    code = main.main(argv + ["--config", str(config_file), "--out", str(out)])
    assert code == EXIT_USAGE
    assert "snr" in capsys.readouterr().err
    assert not out.exists()


def test_maxent_huge_gamma(tmp_path):
    out = tmp_path / "maxent.csv"
    assert main.main(["maxent", "--gamma", "1e8", "1e17", "--out", str(out)]) == EXIT_OK
    rows = read_rows(out)
    assert float(rows[1]["alpha"]) == pytest.approx(1.0)
    assert rows[1]["constraint_residual"] == "nan"
