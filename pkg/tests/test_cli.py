import json
from pathlib import Path

import pytest

from twospinor import cli

FIX = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_verify_core(capsys):
    code, doc, _ = run(capsys, "verify", "--suite", "core", "--seed", "3", "--no-timestamp")
    assert code == 0 and doc["passed"] and doc["seed"] == 3
    assert [s["suite"] for s in doc["suites"]] == ["core"]
    assert "generated" not in doc


def test_verify_timestamp_present(capsys):
    _, doc, _ = run(capsys, "verify", "--suite", "core")
    assert "generated" in doc


def test_verify_tolerance_override_fails(capsys):
    code, doc, _ = run(capsys, "verify", "--suite", "core", "--tol", "clifford_relation=0", "--no-timestamp")
    assert code == 1 and not doc["passed"]
    code, doc, _ = run(capsys, "verify", "--suite", "dirac", "--tol", "-1", "--no-timestamp")
    assert code == 1


@pytest.mark.parametrize("bad", ["x", "a=b", "=1"])
def test_verify_bad_tolerance(capsys, bad):
    code, _, err = run(capsys, "verify", "--suite", "core", "--tol", bad)
    assert code == 2 and err


def test_verify_unknown_suite():
    with pytest.raises(SystemExit) as e:
        cli.main(["verify", "--suite", "nope"])
    assert e.value.code == 2


def test_verify_deterministic(capsys):
    _, a, _ = run(capsys, "verify", "--suite", "vertex", "--no-timestamp", "--seed", "5")
    _, b, _ = run(capsys, "verify", "--suite", "vertex", "--no-timestamp", "--seed", "5")
    assert a == b


def test_vertex_two_electrons(capsys):
    code, doc, _ = run(capsys, "vertex", str(FIX / "vertex_ee.json"), "--no-timestamp")
    assert code == 0
    assert doc["k_minus_vanishes"] is True and doc["k_plus_vanishes"] is False
    assert doc["path_difference"] < 1e-12


def test_vertex_zero_field(capsys):
    code, doc, _ = run(capsys, "vertex", str(FIX / "vertex_zero_A.json"), "--no-timestamp")
    assert code == 0
    assert doc["amplitude_matrix"] == {"re": 0.0, "im": 0.0} or abs(doc["amplitude_matrix"]["re"]) == 0


def test_vertex_bad_shape(capsys):
    code, doc, err = run(capsys, "vertex", str(FIX / "vertex_bad_shape.json"))
    assert code == 2 and doc is None and "shape" in err


def test_vertex_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "vertex", str(tmp_path / "none.json"))
    assert code == 2


def test_out_file(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, doc, _ = run(capsys, "vertex", str(FIX / "vertex_ee.json"), "--out", str(target))
    assert code == 0 and doc is None
    assert json.loads(target.read_text())["command"] == "vertex"


def test_scatter_demo_and_csv(capsys, tmp_path):
    csv = tmp_path / "s.csv"
    code, doc, _ = run(capsys, "scatter", "pair_resonance", "--csv", str(csv), "--no-timestamp")
    assert code == 0 and doc["command"] == "scatter"
    assert doc["truncation"]["dropped_mass"] < 1e-6
    assert csv.read_text().startswith("T,first_abs")


def test_scatter_zero_coupling(capsys):
    code, doc, _ = run(capsys, "scatter", "zero_coupling", "--no-timestamp")
    assert code == 0 and doc["amplitude"]["first"]["abs"] == 0


def test_scatter_errors(capsys, tmp_path):
    assert run(capsys, "scatter", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "scatter", "no_such_demo")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"in": [["electron", [0, 0, 0], 7]], "out": []}))
    assert run(capsys, "scatter", str(bad))[0] == 2


def test_decompose(capsys):
    code, doc, _ = run(capsys, "decompose", "--n-R", "2", "--n-L", "3", "--mu", "1.5", "--no-timestamp")
    assert code == 0
    assert doc["isometry_residual"] < 1e-12
    assert doc["lie_recompose_residual"] < 1e-12 and doc["matter_recompose_residual"] < 1e-12
    bd = doc["block_dimensions"]
    assert sum(bd.values()) >= 9


def test_decompose_input_errors(capsys, tmp_path):
    f = tmp_path / "d.json"
    f.write_text(json.dumps({"n_R": 3, "n_L": 2}))
    assert run(capsys, "decompose", str(f))[0] == 2
    f.write_text(json.dumps({"n_R": 1, "n_L": 2, "xi": {"re": [[1, 0], [0, 0]]}}))
    assert run(capsys, "decompose", str(f))[0] == 2


def test_no_command():
    with pytest.raises(SystemExit) as e:
        cli.main([])
    assert e.value.code == 2
