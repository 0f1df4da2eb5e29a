import io
import json

import pytest

from pinchcert.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_verify_minimal_and_emit(tmp_path):
    code, out, _ = call("verify-minimal", "--theta", "0.866", "--theta1", "0.83", "--k", "22",
                        "--emit-certs", str(tmp_path))
    assert code == 0
    assert "Q1-(Z-W)" in out and "g2-limit" in out and "smalln-n3" in out
    cert = tmp_path / "minimal-theorem.cert"
    assert call("cert-check", str(cert))[0] == 0
    data = json.loads(cert.read_text())
    data["certificates"][0]["evidence"]["enclosure"] = ["1/1", "2/1"]
    bad = tmp_path / "tampered.cert"
    bad.write_text(json.dumps(data))
    assert call("cert-check", str(bad))[0] == 1


def test_falsified_and_usage_codes():
    assert call("verify-minimal", "--theta", "0.866", "--theta1", "0.83", "--k", "1")[0] == 1
    assert call("verify-shrinker", "--theta", "0.836", "--theta1", "0.81", "--delta", "1/2")[0] == 1
    assert call("verify-shrinker", "--theta", "0.836", "--theta1", "0.81", "--delta", "1/21")[0] == 0
    assert call("verify-minimal", "--theta", "0.866", "--theta1", "0.83", "--k", "14")[0] == 2
    assert call("frobnicate")[0] == 3
    assert call("verify-minimal", "--theta", "0.866")[0] == 3
    assert call("verify-minimal", "--theta", "abc", "--theta1", "0.83", "--k", "22")[0] == 3
    assert call("verify-minimal", "--theta", "1.5", "--theta1", "0.83", "--k", "22")[0] == 3
    assert call("eval", "--expr", "g1", "--at", "2")[0] == 3
    assert call("poly", "--op", "sturm-count", "--poly", "q1", "--bogus")[0] == 3


def test_poly_commands():
    code, out, _ = call("poly", "--op", "resultant", "--poly", "q1")
    assert code == 0 and "-32.12" in out
    assert "5" in call("poly", "--op", "sturm-count", "--poly", "q1", "--range", "-6:3")[1]
    code, out, _ = call("poly", "--op", "sturm-count", "--poly", "q2", "--range", "3:inf")
    assert code == 0 and out.strip().endswith("0")
    code, out, _ = call("poly", "--op", "isolate", "--poly", "q2")
    assert code == 0 and len([l for l in out.splitlines() if l.strip()]) >= 3
    assert call("poly", "--op", "discriminant", "--poly", "r")[0] == 0


def test_poly_from_file(tmp_path):
    f = tmp_path / "p.json"
    f.write_text(json.dumps(["-2/1", "0/1", "1/1"]))
    code, out, _ = call("poly", "--op", "sturm-count", "--poly", str(f))
    assert code == 0 and out.strip().endswith("2")
    assert call("poly", "--op", "sturm-count", "--poly", str(tmp_path / "missing.json"))[0] == 3


def test_eval():
    code, out, _ = call("eval", "--expr", "g2-limit", "--precision", "1e-6")
    assert code == 0
    lo, hi = [float(t) for t in out.split("[", 1)[1].split("]", 1)[0].split(",")]
    assert -0.05 < lo <= hi < -0.04
    assert call("eval", "--expr", "g1", "--at", "6")[0] == 0
    assert call("eval", "--expr", "c4", "--theta", "0.836")[0] == 0
    assert call("eval", "--expr", "coeff-shrinker", "--theta", "0.836", "--theta1", "0.81",
                "--delta", "1/21")[0] == 0
    assert call("eval", "--expr", "coeff-minimal", "--theta", "0.866", "--theta1", "0.83",
                "--k", "22", "--n", "7")[0] == 0


def test_optimize_shrinker(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("theta_grid = 0.836\ntheta1_grid = 0.81\n")
    code, out, _ = call("optimize-shrinker", "--config", str(cfg), "--out", str(tmp_path / "o"))
    assert code == 0 and "best delta" in out
    assert (tmp_path / "o" / "frontier.tsv").read_text().startswith("theta\ttheta1\tdelta")
    assert call("cert-check", str(tmp_path / "o" / "best.cert"))[0] == 0
    bad = tmp_path / "bad.cfg"
    bad.write_text("theta_grid 0.8\n")
    assert call("optimize-shrinker", "--config", str(bad))[0] == 3


def test_reports_are_deterministic():
    a = call("verify-shrinker", "--theta", "0.836", "--theta1", "0.81", "--delta", "1/21")
    b = call("verify-shrinker", "--theta", "0.836", "--theta1", "0.81", "--delta", "1/21")
    assert a == b
