import json
import subprocess
import sys
from pathlib import Path

import pytest

from cyclochern.cli import main
from cyclochern.manifest import (MANIFEST_SCHEMA, ManifestError, RunFlags, SchemaMismatch,
                                 diff_reports, load_manifest, run_manifest, run_manifest_data)

MANIFESTS = Path(__file__).resolve().parent.parent / "manifests"


def _no_floats(x):
    if isinstance(x, float):
        return False
    if isinstance(x, dict):
        return all(_no_floats(v) for v in x.values())
    if isinstance(x, list):
        return all(_no_floats(v) for v in x)
    return True


def test_sphere_bott_bundle():
    rep = run_manifest(MANIFESTS / "sphere_bott.json")
    assert rep["summary"]["ok"]
    by_id = {t["id"]: t for t in rep["tasks"]}
    v = by_id["pair-cw"]["results"]["value"]
    assert v["im"] == "0" and v["re"] in ("1", "-1")
    assert by_id["compare"]["status"] == "pass"
    assert _no_floats(rep)


def test_circle_winding_bundle():
    rep = run_manifest(MANIFESTS / "circle_winding.json")
    assert rep["summary"]["ok"]
    got = [t["results"]["cw"]["re"] for t in rep["tasks"]]
    assert got == [str(k) for k in range(-3, 4)]


def test_empty_task_list(tmp_path):
    m = tmp_path / "empty.json"
    m.write_text(json.dumps({"schema": MANIFEST_SCHEMA, "tasks": []}))
    assert main(["run", str(m), "--quiet"]) == 0
    rep = run_manifest(m)
    assert rep["tasks"] == [] and rep["summary"]["ok"]


def test_determinism_and_diff(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run_manifest(MANIFESTS / "sphere_bott.json", RunFlags(output=str(a)))
    run_manifest(MANIFESTS / "sphere_bott.json", RunFlags(output=str(b)))
    ra, rb = json.loads(a.read_text()), json.loads(b.read_text())
    assert diff_reports(ra, rb) == []
    assert main(["diff", str(a), str(b)]) == 0


def test_diff_single_rational_and_schema():
    a = {"schema": "s1", "x": {"value": {"re": "1/2", "im": "0"}}, "timing": {"ms": "3"}}
    b = {"schema": "s1", "x": {"value": {"re": "1/3", "im": "0"}}, "timing": {"ms": "9"}}
    d = diff_reports(a, b)
    assert d == [{"path": "/x/value/re", "a": "1/2", "b": "1/3"}]
    assert diff_reports(a, a) == []
    with pytest.raises(SchemaMismatch):
        diff_reports(a, {"schema": "s2"})


def test_exit_status_follows_assertions(tmp_path):
    m = tmp_path / "m.json"
    m.write_text(json.dumps({
        "schema": MANIFEST_SCHEMA,
        "algebras": {"A": {"kind": "structure-constants", "preset": "direct-power", "n": 2}},
        "tasks": [{"id": "good", "kind": "homology", "algebra": "A", "hh_degree": 2,
                   "hp_truncation": 3, "expect": {"hh": [2, 0, 0], "hp": [2, 0]}},
                  {"id": "bad", "kind": "homology", "algebra": "A", "hh_degree": 2,
                   "hp_truncation": 3, "expect": {"hp": [3, 0]}},
                  {"id": "after", "kind": "check-identities", "algebra": "A", "max_degree": 3}]}))
    assert main(["run", str(m), "--quiet"]) == 1
    rep = run_manifest(m)
    assert [t["status"] for t in rep["tasks"]] == ["pass", "fail", "pass"]


def test_sign_flag_changes_outcome(tmp_path):
    out = tmp_path / "r.json"
    code = main(["run", str(MANIFESTS / "sphere_bott.json"), "--quiet",
                 "--sign-convention", "alternating", "--output", str(out)])
    assert code == 1
    rep = json.loads(out.read_text())
    assert rep["settings"]["sign_convention"] == "alternating"


def test_cap_overflow_is_reported(tmp_path):
    m = tmp_path / "m.json"
    m.write_text(json.dumps({
        "schema": MANIFEST_SCHEMA,
        "algebras": {"A": {"kind": "structure-constants", "preset": "truncated-polynomial", "n": 2}},
        "tasks": [{"id": "t", "kind": "check-identities", "algebra": "A", "max_degree": 6}]}))
    rep = run_manifest_data(load_manifest(m), RunFlags(cap=4))
    assert rep["tasks"][0]["status"] == "error" and "CapOverflow" in rep["tasks"][0]["error"]


def test_parse_error_has_position(tmp_path):
    m = tmp_path / "broken.json"
    m.write_text('{"schema": "x",\n  "tasks": [,]}')
    with pytest.raises(ManifestError, match=r":2:"):
        load_manifest(m)
    assert main(["run", str(m)]) == 2


def test_floats_rejected(tmp_path):
    m = tmp_path / "f.json"
    m.write_text('{"schema": "%s", "cap": 0.5}' % MANIFEST_SCHEMA)
    with pytest.raises(ManifestError):
        load_manifest(m)


def test_undefined_reference_is_validation_error():
    data = {"schema": MANIFEST_SCHEMA,
            "algebras": {"M": {"kind": "matrix-over", "base": "nope", "n": 2}}}
    with pytest.raises(ManifestError, match="undefined"):
        run_manifest_data(data)


def test_schema_checked():
    with pytest.raises(SchemaMismatch):
        run_manifest_data({"schema": "other/9", "tasks": []})


def test_all_algebra_kinds_and_tasks(tmp_path):
    data = {
        "schema": MANIFEST_SCHEMA, "cap": 6,
        "algebras": {
            "T": {"kind": "structure-constants", "labels": ["1", "x"],
                  "table": [[["1", "0"], ["0", "1"]], [["0", "1"], ["0", "0"]]]},
            "G": {"kind": "group-algebra", "group": {"cyclic": 2}},
            "F": {"kind": "function-algebra", "points": 4},
            "M": {"kind": "matrix-over", "base": "G", "n": 2},
            "I": {"kind": "invariant-subalgebra", "points": 4,
                  "permutations": [[0, 1, 2, 3], [1, 0, 3, 2]]},
            "D": {"kind": "direct-sum", "summands": ["T", "I"]},
            "P": {"kind": "presented", "generators": ["x"], "rules": ["x^3 -> 0"]},
        },
        "elements": {
            "g": {"algebra": "T", "matrix": [[["1", "1"]]]},
            "e": {"algebra": "T", "matrix": [[{"1": "1"}, {"x": "1"}], ["0", "0"]]},
        },
        "tasks": [
            {"id": "ids", "kind": "check-identities", "algebra": "D", "max_degree": 4},
            {"id": "hom", "kind": "homology", "algebra": "I", "expect": {"hp": [2, 0]}},
            {"id": "che", "kind": "chern-even", "element": "e", "N": 2},
            {"id": "cho", "kind": "chern-odd", "element": "g", "N": 2},
            {"id": "vc", "kind": "verify-cycle", "element": "g", "parity": "odd", "N": 2},
            {"id": "w", "kind": "wassermann", "points": 4,
             "permutations": [[0, 1, 2, 3], [1, 0, 3, 2]]},
            {"id": "mor", "kind": "morita", "algebra": "G", "sizes": [2], "hp_truncation": 3},
            {"id": "levi", "kind": "levi-model",
             "blocks": [{"points": 2, "permutations": [[0, 1], [1, 0]], "size": 2},
                        {"points": 1, "permutations": [[0]], "size": 1}]},
        ]}
    rep = run_manifest_data(data)
    assert [t["status"] for t in rep["tasks"]] == ["pass"] * 8, rep["tasks"]
    assert _no_floats(rep)
    odd = rep["tasks"][3]["results"]["chain"]
    assert odd[0]["degree"] == 1 and odd[0]["twopi_power"] == 0


def test_console_module_entry(tmp_path):
    r = subprocess.run([sys.executable, "-m", "cyclochern", "run",
                        str(MANIFESTS / "circle_winding.json"), "--quiet"],
                       capture_output=True, text=True)
    assert r.returncode == 0
