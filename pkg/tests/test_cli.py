"""Command-line surface: exit codes, report schemas, determinism."""

import json

import numpy as np
import pytest

from pseudoboson.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_spectrum_reports_closed_form_grid(capsys):
    code, out, _ = run(capsys, "spectrum")
    assert code == 0
    payload = json.loads(out)
    assert payload["schema"] == "1"
    assert payload["command"] == "spectrum"
    by_mn = {(e["m"], e["n"]): e["energy"] for e in payload["entries"]}
    assert by_mn[(2, 3)] == 7.0
    assert by_mn[(0, 0)] == 1.25
    assert payload["all_passed"] is True


def test_spectrum_csv_format(capsys):
    code, out, _ = run(capsys, "spectrum", "--format", "csv", "--m-max", "1",
                       "--n-max", "1")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "m,n,energy"
    assert lines[1] == "0,0,1.25"
    assert len(lines) == 5


def test_commutators_passes_at_defaults(capsys):
    code, out, _ = run(capsys, "commutators", "--trunc", "6")
    assert code == 0
    payload = json.loads(out)
    assert payload["all_passed"] is True
    assert "[c,c_ddag]" in payload["deviations"]


def test_commutators_deterministic_output(capsys):
    _, first, _ = run(capsys, "commutators", "--trunc", "6")
    _, second, _ = run(capsys, "commutators", "--trunc", "6")
    assert first == second


def test_emm_report_structure(capsys):
    code, out, _ = run(capsys, "emm")
    assert code == 0
    payload = json.loads(out)
    values = sorted(v["re"] for v in payload["closed_values"])
    assert values == [-1.75, -0.75, 0.75, 1.75]
    assert payload["secular_degenerate"] is False


def test_sectors_respects_depth_contract(capsys):
    code, _, err = run(capsys, "sectors", "--depth", "50")
    assert code == 2
    assert "multiple of 4" in err


def test_sectors_small_run(capsys):
    code, out, _ = run(capsys, "sectors", "--depth", "32", "--k-range", "0", "1",
                       "--step-tol", "1e-6")
    assert code == 0
    payload = json.loads(out)
    assert [s["k"] for s in payload["sectors"]] == [0, 1]
    assert payload["sectors"][0]["depths"] == [8, 16, 32]


def test_stability_both_regimes(capsys):
    code, out, _ = run(capsys, "stability", "--depths", "20", "40")
    assert code == 0
    payload = json.loads(out)
    assert payload["bounded"] is True
    assert payload["pairs"][-1]["lowest"] == pytest.approx(0.8, abs=1e-6)

    code, out, _ = run(capsys, "stability", "--lam", "1.2",
                       "--depths", "40", "80")
    assert code == 0
    payload = json.loads(out)
    assert payload["bounded"] is False
    assert payload["final_drop"] > 1.0


def test_stability_needs_two_depths(capsys):
    code, _, err = run(capsys, "stability", "--depths", "30")
    assert code == 2
    assert "two" in err


def test_theorem1_json_input(tmp_path, capsys):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"n": 2, "re": [[1.0, 1.0], [0.0, 2.0]],
                                "im": [[0.0, 0.0], [0.0, 0.0]]}))
    code, out, _ = run(capsys, "theorem1", "--input", str(path))
    assert code == 0
    payload = json.loads(out)
    assert payload["similarity_error"] <= 1e-12
    assert payload["unitarity_defect"] > 1.0
    s = np.array([[c["re"] + 1j * c["im"] for c in row]
                  for row in payload["transform"]])
    assert np.abs(s - np.array([[1.0, -1.0], [-1.0, 2.0]])).max() < 1e-10


def test_theorem1_csv_input_matches_json(tmp_path, capsys):
    jpath = tmp_path / "m.json"
    jpath.write_text(json.dumps({"n": 2, "re": [[1.0, 1.0], [0.0, 2.0]]}))
    cpath = tmp_path / "m.csv"
    cpath.write_text("1.0,0.0,1.0,0.0\n0.0,0.0,2.0,0.0\n")
    _, from_json, _ = run(capsys, "theorem1", "--input", str(jpath))
    _, from_csv, _ = run(capsys, "theorem1", "--input", str(cpath))
    assert from_json == from_csv


def test_theorem1_precondition_failure_is_exit_one(tmp_path, capsys):
    # rotation by 90 degrees: eigenvalues +-i, spectrum not real
    path = tmp_path / "rot.json"
    path.write_text(json.dumps({"n": 2, "re": [[0.0, -1.0], [1.0, 0.0]]}))
    code, _, err = run(capsys, "theorem1", "--input", str(path))
    assert code == 1
    assert "first failing check: precondition" in err


def test_theorem1_malformed_input_is_exit_two(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("1.0,2.0,3.0\n")
    code, _, err = run(capsys, "theorem1", "--input", str(path))
    assert code == 2
    assert "expected" in err
    code, _, _ = run(capsys, "theorem1", "--input", str(tmp_path / "missing.json"))
    assert code == 2


def test_tolerance_failure_names_first_check(capsys):
    code, out, err = run(capsys, "commutators", "--trunc", "6",
                         "--tol", "1e-20", "--action-tol", "1e-20")
    assert code == 1
    assert err.startswith("first failing check: ")
    payload = json.loads(out)
    assert payload["all_passed"] is False


def test_bad_parameters_are_exit_two(capsys):
    assert run(capsys, "spectrum", "--gamma", "-1")[0] == 2
    assert run(capsys, "spectrum", "--no-such-flag")[0] == 2
    assert run(capsys, "no-such-command")[0] == 2


def test_out_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "spectrum", "--out", str(target))
    assert code == 0
    assert out == ""
    payload = json.loads(target.read_text())
    assert payload["schema"] == "1"


def test_biorth_shallow_truncation_is_exit_two(capsys):
    code, _, err = run(capsys, "biorth", "--trunc", "12")
    assert code == 2
    assert "shallow" in err


def test_verify_all_reduced(capsys):
    code, out, _ = run(capsys, "verify-all", "--trunc", "34", "--depth", "48")
    assert code == 0
    payload = json.loads(out)
    names = [s["name"] for s in payload["suites"]]
    assert "emm_eigenvalue_multiset" in names
    assert "instability_witness" in names
    assert all(s["passed"] for s in payload["suites"])
