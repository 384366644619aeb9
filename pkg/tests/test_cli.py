"""End-to-end CLI tests: exit codes, golden JSON reports, schema validation."""

import json
import os
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

import branchfol
from branchfol.cli import main

PKG = Path(branchfol.__file__).parent
CORPUS = PKG / "corpus"
SCHEMA = json.loads((PKG / "schema" / "report-v1.json").read_text())
GOLDEN = Path(__file__).parent / "golden"
UPDATE = os.environ.get("BRANCHFOL_UPDATE_GOLDEN") == "1"


def c(name):
    return str(CORPUS / name)


def run(args, tmp_path):
    out = tmp_path / "report.json"
    code = main(list(args) + ["--json", str(out)])
    report = json.loads(out.read_text()) if out.exists() else None
    if report is not None:
        jsonschema.validate(report, SCHEMA)
    return code, report


def _stable(obj):
    if isinstance(obj, float):
        return round(obj, 6) + 0.0
    if isinstance(obj, dict):
        return {k: _stable(v) for k, v in obj.items() if k != "timing"}
    if isinstance(obj, list):
        return [_stable(v) for v in obj]
    return obj


GOLDEN_CASES = {
    "check_foliation_worked": ["check-foliation", c("worked_foliation.txt")],
    "pullback_worked": ["pullback", c("worked_map.txt"), c("worked_foliation.txt")],
    "pullback_hyperbolic_kupka": ["pullback", c("worked_map.txt"), c("hyperbolic_foliation.txt"), "--at", "1:1:1:1"],
    "singularities_worked": ["singularities", c("worked_foliation.txt")],
    "singularities_pencil": ["singularities", c("pencil.txt")],
    "genericity_worked": ["genericity", c("worked_map.txt"), "--points", "0:0:0:1", "--points", "1:1:0:1",
                          "--certify"],
    "local_cert_qh": ["local-cert", "--form", c("local_qh.txt"), "--gamma", "2", "--d", "2"],
    "local_cert_kupka": ["local-cert", "--form", c("local_kupka.txt"), "--kupka"],
}


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden_reports(name, tmp_path):
    code, report = run(GOLDEN_CASES[name], tmp_path)
    assert code == 0
    path = GOLDEN / f"{name}.json"
    got = _stable(report)
    if UPDATE:
        path.write_text(json.dumps(got, indent=2, sort_keys=True) + "\n")
    assert got == json.loads(path.read_text())


def test_worked_pair_report_fields(tmp_path):
    code, rep = run(GOLDEN_CASES["pullback_worked"], tmp_path)
    r = rep["results"]
    assert (r["expected_degree"], r["actual_degree"], r["saturant_degree"]) == (5, 5, 1)
    assert r["euler_ok"] and r["integrable_ok"] and r["certificates"] == []


def test_singularity_count_in_report(tmp_path):
    code, rep = run(GOLDEN_CASES["singularities_worked"], tmp_path)
    assert rep["results"]["total_multiplicity"] == 7
    code, rep = run(GOLDEN_CASES["singularities_pencil"], tmp_path)
    assert len(rep["results"]["singularities"]) == 1


@pytest.mark.parametrize("args,expected", [
    (["check-foliation", c("euler_violation.txt")], 1),
    (["check-foliation", c("not_integrable.txt")], 1),
    (["check-foliation", c("mixed_degrees.txt")], 2),
    (["check-foliation", c("empty.txt")], 2),
    (["check-foliation", c("bad_syntax.txt")], 2),
    (["check-foliation", c("does_not_exist.txt")], 2),
    (["pullback", c("common_factor_map.txt"), c("worked_foliation.txt")], 2),
    (["pullback", c("bad_degree_map.txt"), c("worked_foliation.txt")], 2),
    (["pullback", c("bad_exponents_map.txt"), c("worked_foliation.txt")], 2),
    (["pullback", c("worked_map.txt"), c("worked_foliation.txt"), "--at", "1:2:3:4"], 1),
    (["pullback", c("worked_map.txt"), c("worked_foliation.txt"), "--at", "1:1:1:1"], 1),
    (["genericity", c("nongeneric_map.txt"), "--points", "0:0:0:1", "--certify"], 1),
    (["genericity", c("worked_map.txt"), "--certify", "--max-pairs", "0"], 1),
    (["genericity", c("worked_map.txt"), "--points", "1:0:0:0"], 1),
    (["local-cert", "--form", c("local_gk_candidate.txt"), "--gamma", "2", "--d", "2"], 1),
    (["local-cert", "--form", c("local_exact.txt"), "--kupka"], 1),
    (["local-cert", "--form", c("local_qh.txt")], 2),
    (["singularities"], 2),
    (["no-such-command"], 2),
])
def test_exit_codes(args, expected, tmp_path):
    code, report = run(args, tmp_path)
    assert code == expected


def test_euler_violation_names_failing_check(tmp_path):
    code, rep = run(["check-foliation", c("euler_violation.txt")], tmp_path)
    status = {ch["name"]: ch["status"] for ch in rep["checks"]}
    assert status["euler"] == "fail"
    assert rep["status"] == "fail"


def test_gk_candidate_names_failing_check(tmp_path):
    code, rep = run(["local-cert", "--form", c("local_gk_candidate.txt"), "--gamma", "2", "--d", "2"], tmp_path)
    assert "DZ_null" in rep["results"]["certificate"]["failed"]


def test_every_check_appears_once(tmp_path):
    for args in GOLDEN_CASES.values():
        _, rep = run(args, tmp_path)
        names = [ch["name"] for ch in rep["checks"]]
        assert len(names) == len(set(names))
        assert set(rep["timing"]) == set(names)


def test_gen_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert main(["gen", "plane-foliation", "--d", "2", "--seed", "1", "--out", str(out)]) == 0
    assert (a / "foliation.txt").read_bytes() == (b / "foliation.txt").read_bytes()
    p = tmp_path / "pair"
    assert main(["gen", "pair", "--nu", "2", "--gamma", "2", "--d", "2", "--seed", "7", "--out", str(p)]) == 0
    manifest = json.loads((p / "manifest.json").read_text())
    assert manifest["files"] == ["foliation.txt", "map.txt"] and manifest["seed"] == 7
    # the generated pair feeds straight back into the pipeline
    code, rep = run(["pullback", str(p / "map.txt"), str(p / "foliation.txt")], tmp_path)
    assert code == 0 and rep["results"]["actual_degree"] == 5


def test_gen_rejects_indivisible_degree(tmp_path):
    assert main(["gen", "branched-map", "--nu", "3", "--gamma", "2", "--out", str(tmp_path)]) == 2


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "branchfol.cli", "check-foliation", c("worked_foliation.txt")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "PASS" in proc.stdout and "degree" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "branchfol.cli", "check-foliation", c("empty.txt")],
                          capture_output=True, text=True)
    assert proc.returncode == 2 and "ParseError" in proc.stderr and "line 1" in proc.stderr
