import json
import os
import subprocess
import sys

import pytest

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
FIXDIR = os.path.join(ROOT, "tests", "fixtures")


def run_cli(args):
    return subprocess.run([sys.executable, "-m", "exborel.cli"] + args,
                          capture_output=True, text=True, cwd=ROOT)


def test_check_passes_on_e2(tmp_path):
    out = tmp_path / "r.json"
    r = run_cli(["check", os.path.join(FIXDIR, "e2.alg"), "-o", str(out)])
    assert r.returncode == 0
    rep = json.loads(out.read_text())
    assert rep["verdicts"]["check"] is True
    assert rep["schema_version"] == "1"


def test_check_reversed_fails_with_witness(tmp_path):
    out = tmp_path / "r.json"
    r = run_cli(["check", os.path.join(FIXDIR, "e2_reversed.alg"),
                 "-o", str(out)])
    assert r.returncode == 3
    rep = json.loads(out.read_text())
    assert rep["verdicts"]["check"] is False
    failures = rep["system"]["failures"]
    assert {"axiom": "ext1", "i": "1", "j": "2", "n": 1} in failures
    assert any("Ext^1(Delta_1, Delta_2)" in d for d in rep["diagnostics"])


def test_parse_error_exit_2(tmp_path):
    bad = tmp_path / "bad.alg"
    bad.write_text("[quiver]\nvertices: 1 2\narrow: a 1 9\n")
    out = tmp_path / "r.json"
    r = run_cli(["check", str(bad), "-o", str(out)])
    assert r.returncode == 2
    rep = json.loads(out.read_text())
    assert rep["error"]["kind"] == "parse"


def test_relation_error_carries_line(tmp_path):
    bad = tmp_path / "bad.alg"
    bad.write_text("[quiver]\nvertices: 1 2\narrow: a 1 2\n"
                   "[relations]\na + e1\n")
    out = tmp_path / "r.json"
    r = run_cli(["check", str(bad), "-o", str(out)])
    assert r.returncode == 2
    rep = json.loads(out.read_text())
    assert rep["error"]["line"] == 5


def test_ditalgebra_roundtrip(tmp_path):
    out = tmp_path / "r.json"
    r = run_cli(["ditalgebra", os.path.join(FIXDIR, "e2.alg"),
                 "-o", str(out)])
    assert r.returncode == 0
    rep = json.loads(out.read_text())
    from exborel.ditmod import DitPresentation
    pres = DitPresentation.from_json_dict(rep["presentation"])
    assert pres.to_json_dict() == rep["presentation"]
    assert rep["abar_dim"] == 5
    assert rep["ideal_generator_lengths"] == [[2]]


def test_determinism_byte_identical(tmp_path):
    outs = []
    for k in range(2):
        out = tmp_path / f"r{k}.json"
        r = run_cli(["verify-all", os.path.join(FIXDIR, "e3.alg"),
                     "--seed", "11", "-o", str(out)])
        assert r.returncode == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_unknown_field_rejected():
    r = run_cli(["check", os.path.join(FIXDIR, "e2.alg"),
                 "--field", "r64"])
    assert r.returncode == 2


def test_prime_field_run(tmp_path):
    out = tmp_path / "r.json"
    r = run_cli(["verify-all", os.path.join(FIXDIR, "e2.alg"),
                 "--field", "fp:1000003", "-o", str(out)])
    assert r.returncode == 0
    rep = json.loads(out.read_text())
    assert rep["field"] == "Fp:1000003"
