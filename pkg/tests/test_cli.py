import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from qmsbounds.cli import InputError, main, make_config, parse_range
from qmsbounds.semigroups import REPORT_COLUMNS


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_range_forms():
    assert parse_range("5:11:2") == [5, 7, 9, 11]
    assert parse_range("3:5") == [3, 4, 5]
    assert parse_range("2,4,8") == [2, 4, 8]
    assert parse_range(None) is None
    for bad in ("9:5", "a:b", "1:5:0", ""):
        with pytest.raises(InputError):
            parse_range(bad)


def test_config_validation():
    with pytest.raises(InputError):
        make_config(["analyze", "--model", "depolarizing", "--epsilon", "1.5"])
    cfg = make_config(["analyze", "--model", '{"type": "depolarizing", "d": 2}'])
    assert cfg.model == {"type": "depolarizing", "d": 2}
    assert cfg.seed == 0


def test_analyze_depolarizing(capsys):
    code, out, _ = run(["analyze", "--model", '{"type": "depolarizing", "d": 2}'], capsys)
    assert code == 0
    payload = json.loads(out)
    row = dict(zip(payload["columns"], payload["rows"][0]))
    assert abs(row["t_cb"] - np.log(30)) < 1e-6
    assert payload["config"]["epsilon"] == 0.1
    assert payload["config"]["model"]["d"] == 2


def test_analyze_cyclic_csv(capsys):
    code, out, _ = run(["analyze", "--model", '{"type": "cyclic_graph", "d": 5}',
                        "--format", "csv"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# qmsbounds report format v1; config=")
    rows = list(csv.reader(io.StringIO("\n".join(lines[2:]))))
    assert tuple(rows[0]) == REPORT_COLUMNS
    assert abs(float(rows[1][2]) - 1.3819660) < 1e-7


def test_analyze_model_file(tmp_path, capsys):
    path = tmp_path / "model.json"
    path.write_text(json.dumps({"type": "su2_transference", "j": 0.5}))
    out_path = tmp_path / "report.json"
    code, out, _ = run(["analyze", "--model", str(path), "--out", str(out_path)], capsys)
    assert code == 0
    assert out == ""
    assert json.loads(out_path.read_text())["rows"][0][2] == pytest.approx(4.0)


@pytest.mark.parametrize("argv", [
    ["analyze", "--model", "{bad json"],
    ["analyze", "--model", '{"type": "teleporter"}'],
    ["analyze", "--model", "/no/such/file.json"],
    ["analyze"],
    ["sweep", "--model", "cyclic_graph", "--d-range", "9:5"],
    ["sweep", "--model", "su2_transference"],
    ["frobnicate"],
])
def test_input_errors_exit_3(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 3
    assert err


def test_modular_mismatch_exits_3(capsys):
    spec = {"type": "custom_gns", "weights": [0.0, 0.0],
            "jumps": [{"dim": 2, "re": [0, 1, 0, 0]}, {"dim": 2, "re": [0, 0, 1, 0]}],
            "reference": {"dim": 2, "re": [0.7, 0, 0, 0.3]}}
    code, _, err = run(["analyze", "--model", json.dumps(spec)], capsys)
    assert code == 3
    assert "ModularMismatch" in err


def test_verify_passes_and_is_deterministic(capsys):
    code, first, _ = run(["verify", "--seed", "3"], capsys)
    assert code == 0
    summary = json.loads(first)
    assert summary["summary"]["all_passed"]
    assert all(r[1] for r in summary["rows"])
    _, second, _ = run(["verify", "--seed", "3"], capsys)
    assert first == second


def test_verify_negative_control(capsys):
    code, out, _ = run(["verify", "--inject", "non-cp", "--format", "csv"], capsys)
    assert code == 2
    rows = {r[0]: r for r in csv.reader(io.StringIO(out)) if not r[0].startswith("#")}
    assert rows["channel_invariants"][1] == "False"
    assert rows["entropy_contraction"][1] == "True"


def test_sweep_cyclic_slope(capsys):
    code, out, _ = run(["sweep", "--model", "cyclic_graph", "--d-range", "5:41:2"], capsys)
    assert code == 0
    payload = json.loads(out)
    fit = payload["summary"]["fit_t_cb"]
    assert abs(fit["slope"] - 2.0) <= 0.1
    assert fit["stderr"] > 0
    assert len(payload["rows"]) == 19


def test_sweep_bernstein(capsys):
    code, out, _ = run(["sweep", "--model", "bernstein", "--d-range", "2,4,8",
                        "--trials", "50"], capsys)
    assert code == 0
    fit = json.loads(out)["summary"]["fit"]
    assert fit["max_ratio"] <= 10


def test_sweep_single_point_has_no_slope(capsys):
    code, out, _ = run(["sweep", "--model", "depolarizing", "--d-range", "2"], capsys)
    assert code == 0
    assert json.loads(out)["summary"]["fit_t_cb"]["slope"] is None


def test_thread_cap_does_not_change_output(capsys, monkeypatch):
    argv = ["sweep", "--model", "nc_birth_death", "--n-range", "3:6", "--format", "csv"]
    monkeypatch.setenv("QMS_THREADS", "1")
    _, serial, _ = run(argv, capsys)
    monkeypatch.setenv("QMS_THREADS", "4")
    _, parallel, _ = run(argv, capsys)
    assert serial == parallel


def test_bad_thread_cap(capsys, monkeypatch):
    monkeypatch.setenv("QMS_THREADS", "many")
    code, _, _ = run(["verify"], capsys)
    assert code == 3


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "qmsbounds", "--version"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert "qmsbounds" in res.stdout
