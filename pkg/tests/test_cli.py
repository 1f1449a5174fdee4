"""End-to-end CLI behaviour: exit codes, artifacts, idempotence."""

import hashlib
import json
import subprocess
import sys

import numpy as np
import pytest

import vfbm


def _run(*args, cwd):
    return subprocess.run(
        [sys.executable, "-m", "vfbm.cli", *args], cwd=cwd, capture_output=True, text=True
    )


@pytest.fixture()
def mixing_file(tmp_path):
    path = tmp_path / "mix.json"
    path.write_text(
        json.dumps(
            {"hurst": [0.3, 0.6], "a_plus": [[1.0, 0.5], [0.0, 1.0]], "a_minus": [[0.0, 0.0], [0.0, 0.0]]}
        )
    )
    return path


def test_coeffs_then_validate(tmp_path, mixing_file):
    out = tmp_path / "model.json"
    res = _run("coeffs", "--mixing", str(mixing_file), "--out", str(out), cwd=tmp_path)
    assert res.returncode == 0, res.stderr
    model = json.loads(out.read_text())
    assert model["hurst"] == [0.3, 0.6]

    res = _run("validate", "--model", str(out), cwd=tmp_path)
    assert res.returncode == 0
    assert json.loads(res.stdout)["passed"] is True


def test_validate_fails_on_bad_model(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(
        json.dumps(
            {
                "hurst": [0.3, 0.6],
                "coefficients": {"sigma": [1.0, 1.0], "pairs": [{"i": 1, "j": 2, "c_ij": 1.5, "c_ji": 1.0}]},
            }
        )
    )
    res = _run("validate", "--model", str(bad), cwd=tmp_path)
    assert res.returncode == 1
    assert json.loads(res.stdout)["positive_definite"] is False


def test_cov_subcommand(tmp_path, mixing_file):
    model = tmp_path / "model.json"
    assert _run("coeffs", "--mixing", str(mixing_file), "--out", str(model), cwd=tmp_path).returncode == 0
    out = tmp_path / "cov.csv"
    res = _run("cov", "--model", str(model), "--grid", "0,1,2", "--out", str(out), cwd=tmp_path)
    assert res.returncode == 0, res.stderr
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "t_k,i,t_l,j,value"
    assert len(lines) == 1 + 36  # (3 times x 2 components)^2
    out2 = tmp_path / "cov2.csv"
    _run("cov", "--model", str(model), "--grid", "0,1,2", "--out", str(out2), cwd=tmp_path)
    assert out.read_bytes() == out2.read_bytes()  # byte-identical rerun


def test_simulate_idempotent_and_inputs_untouched(tmp_path, mixing_file):
    model = tmp_path / "model.json"
    _run("coeffs", "--mixing", str(mixing_file), "--out", str(model), cwd=tmp_path)
    before = hashlib.sha256(model.read_bytes()).hexdigest()
    out1, out2 = tmp_path / "p1.csv", tmp_path / "p2.csv"
    a = _run("simulate", "--model", str(model), "--grid", "0.5,1", "--n", "16", "--seed", "9", "--out", str(out1), cwd=tmp_path)
    b = _run("simulate", "--model", str(model), "--grid", "0.5,1", "--n", "16", "--seed", "9", "--out", str(out2), cwd=tmp_path)
    assert a.returncode == 0 and b.returncode == 0
    assert out1.read_bytes() == out2.read_bytes()  # byte-identical rerun
    assert hashlib.sha256(model.read_bytes()).hexdigest() == before
    header, first = out1.read_text().splitlines()[:2]
    assert header == "rep,time,component,value"
    assert first.startswith("0,0.5,1,")


def test_factorize_infeasible_exit_code(tmp_path):
    ct = tmp_path / "ct.json"
    ct.write_text(json.dumps({"hurst": [0.3, 0.6], "c_tilde": [[1.0, 0.9], [0.2, 1.0]]}))
    res = _run("factorize", "--c-tilde", str(ct), cwd=tmp_path)
    assert res.returncode == 1
    err = json.loads(res.stderr.strip())
    assert err["error"] == "Infeasible"


def test_factorize_roundtrip_via_cli(tmp_path):
    hv = vfbm.validate_hurst([0.3, 0.6])
    m0 = vfbm.MixingMatrices(
        a_plus=np.array([[1.2, 0.0], [0.4, 0.9]]), a_minus=np.zeros((2, 2)), hurst=hv
    )
    ct = tmp_path / "ct.json"
    ct.write_text(json.dumps({"hurst": [0.3, 0.6], "c_tilde": vfbm.tilde_c(m0).c_tilde.tolist()}))
    out = tmp_path / "mix.json"
    res = _run("factorize", "--c-tilde", str(ct), "--out", str(out), cwd=tmp_path)
    assert res.returncode == 0, res.stderr
    rec = json.loads(out.read_text())
    assert np.allclose(rec["a_plus"], m0.a_plus, atol=1e-10)


def test_usage_error_exit_code(tmp_path):
    res = _run("validate", "--model", str(tmp_path / "missing.json"), cwd=tmp_path)
    assert res.returncode == 2
    assert json.loads(res.stderr.strip())["error"] == "FileNotFoundError"


def test_verify_subcommand(tmp_path):
    out = tmp_path / "report.json"
    res = _run("verify", "--suite", "quadrature", "--seed", "1", "--out", str(out), cwd=tmp_path)
    assert res.returncode == 0, res.stderr
    report = json.loads(out.read_text())
    assert report["passed"] is True
    assert all({"check", "statistic", "tolerance", "pass"} <= set(r) for r in report["results"])
