import json
import subprocess
import sys

import pytest

from geodesy import catalog as cat
from geodesy import document as doc
from geodesy.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out) if out else None, err


def test_info(capsys):
    code, rep, _ = run_json(capsys, "info", "catalog:M12")
    assert code == 0
    assert rep["dim"] == 4 and rep["solvable"] and not rep["unimodular"]
    assert rep["unimodular_kernel"]["dim"] == 3


def test_info_text_form(capsys):
    code, out, _ = run(capsys, "info", "catalog:H3")
    assert code == 0
    assert any(line.startswith("nilpotent") and line.endswith("yes") for line in out.splitlines())


def test_check_witness_passes(capsys):
    code, rep, _ = run_json(capsys, "check", "catalog:g35")
    assert code == 0 and rep["passed"] and rep["exact"]


def test_check_standard_basis_fails(capsys):
    code, rep, _ = run_json(capsys, "check", "catalog:A_3", "--basis", "standard")
    assert code == 2 and not rep["passed"]


def test_check_with_params(capsys):
    code, rep, _ = run_json(capsys, "check", "catalog:g25", "p=-1/2")
    assert code == 0 and rep["passed"] and not rep["orthonormal"]
    code, rep, _ = run_json(capsys, "check", "catalog:g25", "p=-1/2", "--orthonormal")
    assert code == 2 and "vectors are not orthonormal" in rep["violations"]


def test_construct_exit_codes(capsys):
    assert run(capsys, "construct", "catalog:g33")[0] == 0
    assert run(capsys, "construct", "catalog:A_3")[0] == 3
    assert run(capsys, "construct", "catalog:M13", "a=1")[0] == 3
    assert run(capsys, "construct", "catalog:sl2")[0] == 4


def test_construct_explicit_theorem_failure_is_undetermined(capsys):
    code, rep, _ = run_json(capsys, "construct", "catalog:sl2", "--theorem", "nilabelian")
    assert code == 4 and rep["outcome"] == "undetermined"


def test_construct_writes_document(capsys, tmp_path):
    out = tmp_path / "m4.json"
    assert run(capsys, "construct", "catalog:M4", "--out", str(out))[0] == 0
    d = doc.load(str(out))
    assert d.mode == "float" and d.metric is not None
    code, rep, _ = run_json(capsys, "check", str(out))
    assert code == 0 and rep["passed"]


def test_document_input_and_stdin(capsys, tmp_path, monkeypatch):
    g = cat.instantiate("g23")
    metric, basis = cat.witness("g23")
    text = doc.render(doc.AlgebraDocument(g, metric, basis))
    path = tmp_path / "g23.json"
    path.write_text(text)
    assert run(capsys, "check", str(path))[0] == 0
    import io
    monkeypatch.setattr(sys, "stdin", io.StringIO(text))
    assert run(capsys, "check", "-")[0] == 0


def test_sample_on_an(capsys):
    code, rep, _ = run_json(capsys, "sample", "catalog:A_4", "--trials", "50")
    assert code == 0 and rep["span_rank"] == 1


def test_parse_error_location(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{\n  "name": "x",\n  "dim": 1,\n  "labels": ["X"],\n  "brackets": [],\n  "oops": 1\n}\n')
    code, _, err = run(capsys, "info", str(bad))
    assert code == 1
    assert f"{bad}:6:3:" in err


@pytest.mark.parametrize("argv", [
    ["info", "catalog:nope"],
    ["info", "catalog:M3", "a=-2"],
    ["info", "catalog:M3", "a"],
    ["info", "/no/such/file.json"],
    ["check", "catalog:M4"],
    ["bogus"],
    ["verify-paper", "--filter", "no-such-check"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 1


def test_invalid_algebra_rejected(capsys, tmp_path):
    bad = tmp_path / "nonlie.json"
    bad.write_text(json.dumps({
        "name": "bad", "dim": 3, "labels": ["a", "b", "c"],
        "brackets": [
            {"i": 1, "j": 2, "terms": [{"k": 3, "v": "1"}]},
            {"i": 1, "j": 3, "terms": [{"k": 1, "v": "1"}]},
            {"i": 2, "j": 3, "terms": [{"k": 1, "v": "1"}]},
        ],
    }))
    code, _, err = run(capsys, "check", str(bad), "--basis", "standard")
    assert code == 1 and "violation" in err
    assert run(capsys, "info", str(bad))[0] == 2


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("GEODESY_SEED", "11")
    code, rep, _ = run_json(capsys, "sample", "catalog:M9", "--trials", "20")
    assert code == 0 and rep["seed"] == 11
    monkeypatch.setenv("GEODESY_SEED", "eleven")
    assert run(capsys, "sample", "catalog:M9")[0] == 1


def test_verify_paper_filter(capsys):
    code, rep, _ = run_json(capsys, "verify-paper", "--filter", "heisenberg/*", "--seed", "1")
    assert code == 0
    assert rep["total"] == 5 and rep["failed"] == 0
    assert all(c["name"].startswith("heisenberg/") for c in rep["checks"])


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "geodesy", "info", "catalog:e2", "--format", "json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["name"] == "e2"
