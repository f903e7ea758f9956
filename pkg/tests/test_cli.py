import json
from pathlib import Path

import pytest

from gauss_eof.cli import main
from gauss_eof.ensemble import CSV_COLUMNS
from gauss_eof.eof import entropy_of_entanglement

STATES = Path(__file__).resolve().parent.parent / "states"


def state_file(tmp_path, payload, name="state.json") -> str:
    path = tmp_path / name
    path.write_text(payload if isinstance(payload, str) else json.dumps(payload), encoding="utf-8")
    return str(path)


def test_bounds_of_tmsv(capsys):
    assert main(["bounds", str(STATES / "tmsv.json")]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["lower"] == pytest.approx(entropy_of_entanglement(0.5), rel=1e-9)
    assert out["upper"] == pytest.approx(out["lower"], rel=1e-9)


def test_exact_of_separable_state(capsys):
    assert main(["exact", str(STATES / "sep.json")]) == 0
    assert json.loads(capsys.readouterr().out)["exact"] == 0.0


def test_exact_csv_output(capsys):
    assert main(["exact", str(STATES / "mixed.json"), "--format", "csv"]) == 0
    header, row = capsys.readouterr().out.splitlines()
    assert header.split(",")[:3] == ["lower", "upper", "exact"]
    assert float(row.split(",")[2]) == pytest.approx(0.383653740168, abs=1e-8)


def test_check_reports_unphysical_state(tmp_path, capsys):
    path = state_file(tmp_path, {"standard_form": {"a": 1.0, "b": 1.0, "c1": 0.5, "c2": 0.5}})
    assert main(["check", path]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["physical"] is False
    assert out["detail"]


def test_check_of_glems(capsys):
    assert main(["check", str(STATES / "glems.json")]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["physical"] and not out["separable"]
    assert out["spectrum"]["nu_minus"] == pytest.approx(1.0, abs=1e-9)


def test_conjecture_on_glems(capsys):
    assert main(["conjecture", str(STATES / "glems.json")]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["applicable"] and out["tight"]


def test_conjecture_on_mixed_is_input_error(capsys):
    assert main(["conjecture", str(STATES / "mixed.json")]) == 1
    assert "error:" in capsys.readouterr().err


def test_bad_json_is_input_error(tmp_path, capsys):
    assert main(["bounds", state_file(tmp_path, "{not json")]) == 1
    assert "not valid JSON" in capsys.readouterr().err


def test_two_representations_are_rejected(tmp_path):
    payload = {
        "standard_form": {"a": 2.0, "b": 1.5, "c1": 1.2, "c2": -1.0},
        "purity_params": {"mu_a": 0.5, "mu_b": 0.7, "mu": 0.5, "beta": -1.0},
    }
    assert main(["bounds", state_file(tmp_path, payload)]) == 1


def test_missing_file_is_io_error(tmp_path):
    assert main(["bounds", str(tmp_path / "missing.json")]) == 3


def test_non_convergence_is_numerical_error():
    assert main(["exact", str(STATES / "mixed.json"), "--tol-r", "-1"]) == 2


def test_sweep_writes_records(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--n", "5", "--seed", "3", "--grid-points", "200", "--out", str(out)]) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 6
    summary = json.loads(capsys.readouterr().out)
    assert summary["n_states"] == 5
    assert "records" not in summary or summary["records"] is None


def test_sweep_csv_to_stdout(capsys):
    assert main(["sweep", "--n", "3", "--seed", "3", "--grid-points", "200", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 4


def test_sweep_into_directory_is_io_error(tmp_path):
    assert main(["sweep", "--n", "2", "--grid-points", "200", "--out", str(tmp_path)]) == 3


def test_invalid_sweep_config_is_input_error():
    assert main(["sweep", "--n", "0"]) == 1


def test_ragged_matrix_is_input_error(tmp_path, capsys):
    rows = [[1, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    assert main(["check", state_file(tmp_path, {"matrix": rows})]) == 1
    assert "error:" in capsys.readouterr().err


def test_binary_state_file_is_input_error(tmp_path, capsys):
    path = tmp_path / "state.json"
    path.write_bytes(b"\xff\xfe\x00\x81binary")
    assert main(["bounds", str(path)]) == 1
    assert "UTF-8" in capsys.readouterr().err


def test_negative_seed_is_input_error(capsys):
    assert main(["sweep", "--n", "1", "--seed", "-1"]) == 1
    assert "seed" in capsys.readouterr().err
