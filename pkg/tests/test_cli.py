from __future__ import annotations

import io
import json

import pytest

from geocycles.cli import run


def _run(argv):
    out = io.StringIO()
    code = run(argv, out=out)
    return code, out.getvalue()


@pytest.fixture
def k4_file(tmp_path):
    doc = {
        "vertices": ["a", "b", "c", "d"],
        "edges": [
            {"id": i, "u": i[0], "v": i[1], "len": "1"} for i in ("ab", "bc", "cd", "da", "ac", "bd")
        ],
        "cycle": ["ab", "bc", "cd", "da"],
    }
    p = tmp_path / "k4.json"
    p.write_text(json.dumps(doc))
    return str(p)


@pytest.fixture
def ring_file(tmp_path):
    doc = {"edges": [{"id": f"e{k}", "u": f"v{k}", "v": f"v{(k + 1) % 5}", "len": "2/3"} for k in range(5)]}
    p = tmp_path / "ring.json"
    p.write_text(json.dumps(doc))
    return str(p)


def test_decompose_k4_square(k4_file):
    code, out = _run(["decompose", k4_file, "--format", "json"])
    assert code == 0
    rep = json.loads(out)
    assert [len(p["edges"]) for p in rep["parts"]] == [3, 3]
    assert rep["bound"] == "4/1"


def test_geodetic_check_exit_codes(k4_file, ring_file):
    code, out = _run(["geodetic-check", ring_file, "--cycle", "e0,e1,e2,e3,e4"])
    assert code == 0 and "true" in out
    code, out = _run(["geodetic-check", k4_file, "--format", "json"])
    assert code == 4 and json.loads(out)["geodetic"] is False


def test_diagnose_unit_ladder():
    code, out = _run(["diagnose", "ladder", "--depth", "6", "--format", "json"])
    assert code == 0 and json.loads(out)["verdict"] == "REFUTED"


def test_input_errors(tmp_path):
    assert _run(["distances", str(tmp_path / "missing.json")])[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"edges": [{"id": "a", "u": "p", "v": "q", "len": 1.5}]}')
    assert _run(["distances", str(bad)])[0] == 2
    assert _run(["diagnose", "nonsense"])[0] == 2
    assert _run(["distances", str(bad), "--jobs", "0"])[0] == 2


def test_certification_error_exit_code(k4_file):
    code, _ = _run(["decompose", k4_file, "--eps", "1/2"])
    assert code == 3


def test_budget_error_exit_code():
    code, _ = _run(["truncate", "ladder:dyadic_harmonic", "--index", "2", "--tol", "0", "--horizon", "1"])
    assert code in (0, 3)


def test_reports_are_byte_identical(k4_file):
    for argv in (
        ["census", k4_file, "--format", "json"],
        ["experiment", "peripheral", "--seed", "5", "--budget", "20", "--format", "json"],
        ["pipeline", "ladder:nst", "--depth", "3", "--format", "json"],
    ):
        assert _run(argv) == _run(argv)


def test_truncate_dot_and_json():
    code, out = _run(["truncate", "ladder:nst", "--index", "3", "--format", "dot"])
    assert code == 0 and "dashed" in out
    code, out = _run(["truncate", '{"family": "ladder", "lengths": "nst"}', "--index", "3", "--format", "json"])
    doc = json.loads(out)
    assert any(e.get("outer") for e in doc["edges"])


def test_pipeline_report():
    code, out = _run(["pipeline", "subdivided_ladder:nst", "--depth", "3", "--host-depth", "6", "--format", "json"])
    assert code == 0
    rep = json.loads(out)
    assert [s["residual_on_tilde"] for s in rep["stages"]] == [0, 0, 0, 0]
    assert rep["thinness"]["ok"] and rep["non_geodetic"] == []


def test_experiments_and_distances(ring_file):
    code, out = _run(["experiment", "divergence", "--depth", "3", "--format", "json"])
    assert json.loads(out)["lower"] == "13/12"
    code, out = _run(["experiment", "span", "--format", "json"])
    assert all(v["rank"] == v["cyclomatic"] for v in json.loads(out).values())
    code, out = _run(["distances", ring_file, "--format", "json"])
    assert json.loads(out)["distances"]["v0"]["v2"] == "4/3"
    assert _run(["distances", ring_file, "--format", "dot"])[0] == 2
    code, out = _run(["experiment", "subdivided-ladder", "--depth", "4", "--format", "json"])
    rep = json.loads(out)
    assert rep["rung_distances"]["6"] == "11/1" and rep["diagnostic"] == "REFUTED"
