from __future__ import annotations

import io
import json
import subprocess
import sys

import pytest

from conftest import FIG8, LST, S2XS1, TREFOIL
from cuspcert import cli


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_decode_then_validate(capsys, monkeypatch):
    code, table, _ = run(capsys, "isosig", "decode", FIG8)
    assert code == 0 and table.count("\n") == 2
    code, out, _ = run(capsys, "validate", stdin=table, monkeypatch=monkeypatch)
    assert code == 0 and out.strip() == "valid"
    code, out, _ = run(capsys, "isosig", "encode", stdin=table, monkeypatch=monkeypatch)
    assert out.strip() == FIG8


def test_validate_reports_broken_tables(capsys, tmp_path):
    p = tmp_path / "bad.tri"
    p.write_text("0(1023) bdry bdry bdry\n")
    code, out, _ = run(capsys, "validate", str(p))
    assert code == 1 and out.startswith("invalid")


def test_skeleton_and_homology(capsys):
    code, out, _ = run(capsys, "skeleton", FIG8, "--format", "json")
    info = json.loads(out)
    assert code == 0 and info["vertices"] == 1 and info["edges"] == 2
    code, out, _ = run(capsys, "homology", S2XS1, "--format", "json")
    assert json.loads(out) == {"rank": 1, "torsion": []}


def test_enumerate(capsys):
    code, out, _ = run(capsys, "enumerate", "--vertex", S2XS1, "--format", "json")
    rows = json.loads(out)
    assert code == 0 and any(r["type"] == ["S2"] for r in rows)
    code, out, _ = run(capsys, "enumerate", "--fundamental", LST)
    assert code == 0 and "D2" in out


def test_certify_and_verify_files(capsys, tmp_path):
    cert = tmp_path / "trefoil.json"
    code, _, _ = run(capsys, "certify", "nonhyp", TREFOIL, "--out", str(cert))
    assert code == 0
    d = json.loads(cert.read_text())
    assert d["kind"] == "SeifertAnnulus" and cert.read_text().endswith("\n")
    code, out, _ = run(capsys, "verify", str(cert))
    assert code == 0 and out.startswith("Accept")
    code, _, _ = run(capsys, "verify", str(cert), "--triangulation", FIG8)
    assert code == 1
    d["surface"][0] += 1
    cert.write_text(json.dumps(d))
    code, out, _ = run(capsys, "verify", str(cert))
    assert code == 1 and out.startswith("Reject")
    cert.write_text("{not json")
    assert run(capsys, "verify", str(cert))[0] == 1


def test_certify_hyp(capsys):
    code, out, _ = run(capsys, "certify", "hyp", FIG8)
    assert code == 0 and json.loads(out)["angles"] == [["1/3"] * 3] * 2
    code, out, _ = run(capsys, "certify", "hyp", "cPcbbbadu")
    res = json.loads(out)
    assert code == 1 and res["kind"] == "NoneFound" and res["dual"]
    code, out, err = run(capsys, "certify", "hyp", "eLPkbcdddhgrvv", "--budget", "2")
    assert code == 0 and "found after" in err


def test_zeroeff(capsys):
    code, out, _ = run(capsys, "zeroeff", S2XS1)
    assert code == 0 and json.loads(out)["chain"] == [[S2XS1, [1, 1, 0, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 1]], ["a", None]]


def test_usage_errors(capsys):
    assert cli.main(["frobnicate"]) == 2
    assert cli.main(["homology", "not a signature!"]) == 2
    assert cli.main(["certify", "nonhyp", S2XS1]) == 2  # closed input is outside the pipeline
    assert cli.main(["enumerate", "--vertex", LST, "--cap-weight", "0"]) == 2
    assert cli.main(["skeleton", LST, "--bogus"]) == 2
    capsys.readouterr()


def test_cap_exceeded(capsys):
    assert cli.main(["enumerate", "--fundamental", "dHHaacbx", "--cap-hilbert", "3"]) == 3
    capsys.readouterr()


@pytest.mark.parametrize("argv", [["certify", "nonhyp", LST], ["enumerate", "--fundamental", TREFOIL]])
def test_output_is_byte_identical_across_processes(argv, tmp_path):
    outs = [subprocess.run([sys.executable, "-m", "cuspcert.cli", *argv], capture_output=True, check=True).stdout
            for _ in range(2)]
    assert outs[0] == outs[1] and outs[0]
    if argv[0] == "certify":
        p = tmp_path / "c.json"
        p.write_bytes(outs[0])
        res = subprocess.run([sys.executable, "-m", "cuspcert.cli", "verify", str(p)], capture_output=True)
        assert res.returncode == 0
