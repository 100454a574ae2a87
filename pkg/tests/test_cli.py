import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from qreduce.cli import dumps, load_schema, main

GOLDEN = Path(__file__).parent / "golden"

DOCUMENTED = {
    "verify_zalg_n1_seed7.json": ["verify", "--suite", "zalg", "--n", "1", "--seed", "7"],
    "norms_n1_a0_4_0_rmax1.json": ["norms", "--n", "1", "--alpha", "0", "--extremal", "4,0", "--rmax", "1"],
    "patterns_n2_a2_3_1_0_depth5.json": ["patterns", "--n", "2", "--alpha", "2", "--extremal", "3,1,0",
                                         "--depth", "5"],
}


def run(capsys, argv):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("name", sorted(DOCUMENTED))
def test_golden_byte_for_byte(capsys, name):
    code, out, _ = run(capsys, DOCUMENTED[name] + ["--format", "json", "--omit-timing"])
    assert code == 0
    assert out == (GOLDEN / name).read_text()


@pytest.mark.parametrize("name", sorted(DOCUMENTED))
def test_golden_with_timing_removed(capsys, name):
    _, out, _ = run(capsys, DOCUMENTED[name] + ["--format", "json"])
    doc = json.loads(out)
    assert doc.pop("timing")["seconds"] >= 0
    assert dumps(doc) == (GOLDEN / name).read_text()


def test_documented_contents():
    pats = json.loads((GOLDEN / "patterns_n2_a2_3_1_0_depth5.json").read_text())
    assert pats["summary"]["count"] == 27 and len(pats["results"]) == 27
    zalg = json.loads((GOLDEN / "verify_zalg_n1_seed7.json").read_text())
    assert zalg["summary"]["passed"] is True
    norms = json.loads((GOLDEN / "norms_n1_a0_4_0_rmax1.json").read_text())
    assert [e["value"] for e in norms["results"]] == ["(1)/(1)", "(q^-3 + q^-1 + q + q^3)/(1)"]


@pytest.mark.parametrize("argv", [
    ["verify", "--suite", "algebra", "--n", "2"],
    ["verify", "--suite", "projector", "--n", "1", "--seed", "3"],
    ["verify", "--suite", "shapovalov", "--n", "1"],
    ["norms", "--n", "2", "--alpha", "1", "--extremal", "5,2,-1", "--rmax", "2", "--q-eval", "1/2",
     "--q-eval", "3/2", "--classical"],
    ["branching", "--n", "2", "--alpha", "0", "--extremal", "3,1,0", "--bounds=-3:4,-3:4"],
])
def test_schema_and_formats(capsys, argv):
    code, out, _ = run(capsys, argv + ["--format", "json"])
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, load_schema())
    assert doc["engine_version"] and doc["params"]["n"] == int(argv[argv.index("--n") + 1])
    code, out, _ = run(capsys, argv + ["--format", "csv"])
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == len(doc["results"])
    code, out, _ = run(capsys, argv)
    assert code == 0 and "summary:" in out


def test_schema_rejects_bad_document():
    doc = json.loads((GOLDEN / "verify_zalg_n1_seed7.json").read_text())
    del doc["summary"]["passed"]
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(doc, load_schema())


def test_determinism_across_workers(capsys, monkeypatch):
    argv = ["verify", "--suite", "zalg", "--n", "1", "--seed", "3", "--format", "json", "--omit-timing"]
    _, serial, _ = run(capsys, argv)
    monkeypatch.setenv("QREDUCE_THREADS", "2")
    _, parallel, _ = run(capsys, argv)
    assert serial == parallel


@pytest.mark.parametrize("argv", [
    ["norms", "--n", "2", "--alpha", "3", "--extremal", "3,1,0", "--rmax", "1"],
    ["norms", "--n", "2", "--alpha", "1", "--extremal", "1,3,0", "--rmax", "1"],
    ["norms", "--n", "2", "--alpha", "1", "--extremal", "3,1,0", "--rmax", "1", "--q-eval", "1"],
    ["branching", "--n", "2", "--alpha", "1", "--extremal", "3,1,0", "--bounds", "3:1,0:0"],
    ["patterns", "--n", "2", "--alpha", "1", "--extremal", "3,1,0", "--depth", "-1"],
    ["verify", "--suite", "nope", "--n", "1"],
    ["verify", "--suite", "zalg", "--n", "5"],
    ["norms", "--n", "1"],
])
def test_invalid_input_exits_2(capsys, argv):
    code, out, err = run(capsys, argv)
    assert code == 2
    assert "error" in err and out == ""


def test_bad_thread_setting(capsys, monkeypatch):
    monkeypatch.setenv("QREDUCE_THREADS", "zero")
    code, _, err = run(capsys, ["patterns", "--n", "1", "--alpha", "0", "--extremal", "2,0", "--depth", "1"])
    assert code == 2 and "QREDUCE_THREADS" in err


def test_failed_verification_exits_1(capsys, monkeypatch):
    from qreduce import zalg

    original = zalg.ZCoefficientTable.gamma
    monkeypatch.setattr(zalg.ZCoefficientTable, "gamma", lambda self, i: -original(self, i))
    code, out, _ = run(capsys, ["verify", "--suite", "zalg", "--n", "1", "--format", "json"])
    assert code == 1
    assert json.loads(out)["summary"]["passed"] is False


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qreduce", "branching", "--n", "1", "--alpha", "1",
                           "--extremal", "4,0", "--bounds", "4:6", "--format", "json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert [e["row"] for e in json.loads(proc.stdout)["results"]] == [[6], [5], [4]]
