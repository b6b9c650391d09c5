import json
import math

import pytest

from wumetric import cli
from wumetric.verify import Row

EX0 = {"kind": "max", "parts": [
    {"kind": "euclidean", "scale": 1.0, "dim": 2},
    {"kind": "max_abs", "covectors": [[[2, 0], [0, 0]]]},
], "queries": [[[0, 0], [1, 0]]]}


def _write(tmp_path, obj, name="in.json"):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_wu_ball_value(tmp_path, capsys):
    obj = {"kind": "euclidean", "scale": 1.0, "dim": 2, "queries": [[[0, 0], [1, 0]]]}
    code, out, _ = _run(capsys, "wu", _write(tmp_path, obj))
    res = json.loads(out)
    assert code == 0 and res["m"] == 2 and res["certified"]
    assert res["values"][0]["Wh"] == pytest.approx(math.sqrt(2), abs=1e-5)
    assert res["values"][0]["Wh_unnormalized"] == pytest.approx(1.0, abs=1e-5)


def test_wu_truncated_ball(tmp_path, capsys):
    code, out, _ = _run(capsys, "wu", _write(tmp_path, EX0))
    assert code == 0
    assert json.loads(out)["values"][0]["Wh"] == pytest.approx(2 / math.sqrt(3), abs=1e-3)


def test_mvee_points(tmp_path, capsys):
    obj = {"points": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]}
    code, out, _ = _run(capsys, "mvee", _write(tmp_path, obj))
    res = json.loads(out)
    assert code == 0 and res["certified"]
    assert res["form"][0][0][0] == pytest.approx(1.0, abs=1e-5)


def test_mvee_non_spanning_points(tmp_path, capsys):
    obj = {"points": [[[1, 0], [1, 0]], [[2, 0], [2, 0]]]}
    code, out, err = _run(capsys, "mvee", _write(tmp_path, obj))
    assert code == 2 and out == ""
    assert "do not span" in err


def test_busemann_norm_query(tmp_path, capsys):
    obj = {"kind": "euclidean", "scale": 2.0, "dim": 1, "directions": 200, "queries": [[[3, 4]]]}
    code, out, _ = _run(capsys, "busemann", _write(tmp_path, obj))
    res = json.loads(out)
    assert code == 0
    assert res["values"][0]["busemann"] == pytest.approx(10.0, rel=2e-2)


def test_scan_csv_is_deterministic(tmp_path, capsys):
    obj = {"kind": "field", "descriptor": "ex1", "epsilon": 0.5, "X": [0, 1]}
    path = _write(tmp_path, obj)
    code, first, _ = _run(capsys, "scan", path, "--format", "csv")
    _, second, _ = _run(capsys, "scan", path, "--format", "csv")
    assert code == 0 and first == second
    lines = first.splitlines()
    assert lines[0] == "k,z,re_value"
    assert len(lines) == 42
    assert lines[-1].startswith("# limsup=") and "usc=true" in lines[-1]


def test_scan_json_summary(tmp_path, capsys):
    obj = {"kind": "field", "descriptor": "ex3", "c": 0.3, "R": 8, "X": [0, 1]}
    code, out, _ = _run(capsys, "scan", _write(tmp_path, obj))
    res = json.loads(out)
    assert code == 0 and res["lsc"] and not res["usc"]


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.json"
    code, out, _ = _run(capsys, "wu", _write(tmp_path, EX0), "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["m"] == 2


@pytest.mark.parametrize("payload", [
    "{not json",
    "[1, 2]",
    {"kind": "sphere"},
    {"kind": "euclidean", "scale": 1.0},
    {"kind": "max_abs", "covectors": [[[1, 0]], [[1, 0], [2, 0]]]},
    {"kind": "hermitian", "matrix": [[[1, 0], [0, 1]], [[0, 0], [1, 0]]]},
])
def test_unparseable_input_exits_2(tmp_path, capsys, payload):
    code, _, err = _run(capsys, "wu", _write(tmp_path, payload))
    assert code == 2 and err.startswith("error:")


def test_missing_file_exits_2(tmp_path, capsys):
    code, _, _ = _run(capsys, "wu", str(tmp_path / "absent.json"))
    assert code == 2


def test_scan_without_tangent_exits_2(tmp_path, capsys):
    code, _, _ = _run(capsys, "scan", _write(tmp_path, {"kind": "field", "descriptor": "ex1", "epsilon": 0.5}))
    assert code == 2


def test_unsupported_point_exits_2(tmp_path, capsys):
    obj = {"kind": "field", "descriptor": "polydisc", "n": 2, "X": [1, 0],
           "sequence": [[1 / k, 0] for k in range(1, 21)]}
    code, _, _ = _run(capsys, "scan", _write(tmp_path, obj))
    assert code == 2


def test_budget_exhaustion_exits_3(tmp_path, capsys):
    obj = {"kind": "max_abs", "covectors": [[[1, 0], [0, 0], [0, 0]], [[0, 0], [1, 0], [0, 0]],
                                            [[0, 0], [0, 0], [1, 0]], [[1, 0], [1, 0], [1, 0]]]}
    code, _, _ = _run(capsys, "wu", _write(tmp_path, obj), "--budget", "1")
    assert code == 3


def test_env_default_tolerance(tmp_path, capsys, monkeypatch):
    path = _write(tmp_path, EX0)
    monkeypatch.setenv("WU_DEFAULT_TOL", "2")
    assert _run(capsys, "wu", path)[0] == 2
    monkeypatch.setenv("WU_DEFAULT_TOL", "abc")
    assert _run(capsys, "wu", path)[0] == 2
    monkeypatch.setenv("WU_DEFAULT_TOL", "1e-5")
    assert _run(capsys, "wu", path)[0] == 0


def test_job_config_validation():
    with pytest.raises(cli.SchemaError):
        cli.JobConfig("wu")
    with pytest.raises(cli.SchemaError):
        cli.JobConfig("wu", "x.json", format="xml")
    assert cli.JobConfig("verify-paper").budget == 50


def _fake_rows(passed):
    def fake(tol, seed=0, only=None):
        return [Row(1, "fixed point", 1.0, "1", 1e-5, True), Row(2, "pair", 0.5, "0.5", 1e-3, passed)]
    return fake


@pytest.mark.parametrize("passed,expected", [(True, 0), (False, 1)])
def test_verify_paper_exit_and_table(capsys, monkeypatch, passed, expected):
    monkeypatch.setattr(cli, "run_all", _fake_rows(passed))
    code, out, err = _run(capsys, "verify-paper", "--format", "csv")
    assert code == expected
    assert out.splitlines()[0].startswith("criterion,name,measured")
    assert len(err.strip().splitlines()) == 2
    assert ("[FAIL]" in err) == (not passed)
