"""End-to-end CLI runs: exit codes, artifacts, and byte determinism."""

import json
import math
import subprocess
import sys

import pytest

from entweave.optics import DifElements, IDEAL, identity_setup, setup_to_json
from dataclasses import replace


def run_cli(tmp_path, *args):
    return subprocess.run(
        [sys.executable, "-m", "entweave.cli", "--out", str(tmp_path), *args],
        capture_output=True, text=True)


def test_discrete_report_and_manifest(tmp_path):
    r = run_cli(tmp_path, "discrete", "--eta", "0.3", "--unitary", "x",
                "--sequence", "QPQP")
    assert r.returncode == 0, r.stderr
    assert "sequence QPQP" in r.stdout
    report = json.loads((tmp_path / "discrete_report.json").read_text())
    assert report["P"]["eb_order"] == 2
    assert report["Q"]["eb_order"] == 2
    assert not report["sequence"]["is_eb"]
    assert math.isclose(report["sequence"]["choi_concurrence"], 0.09,
                        abs_tol=1e-9)
    manifest = json.loads((tmp_path / "discrete_manifest.json").read_text())
    assert manifest["command"] == "discrete"
    assert manifest["outputs"] == ["discrete_report.json"]
    assert manifest["parameters"]["sequence"] == "QPQP"


def test_discrete_blocked_sequence_breaks(tmp_path):
    r = run_cli(tmp_path, "discrete", "--sequence", "QQPP")
    assert r.returncode == 0
    report = json.loads((tmp_path / "discrete_report.json").read_text())
    assert report["sequence"]["is_eb"]


def test_order_of_prints_bare_number(tmp_path):
    r = run_cli(tmp_path, "discrete", "--pd", "0.4", "--unitary", "zx-diag",
                "--order-of", "P")
    assert r.returncode == 0
    assert r.stdout.strip() == "2"


def test_unitary_json_matrix(tmp_path):
    mat = json.dumps([[0.0, 1.0], [1.0, 0.0]])
    r = run_cli(tmp_path, "discrete", "--unitary", mat, "--order-of", "P")
    assert r.returncode == 0
    assert r.stdout.strip() == "2"


def test_validation_exit_codes(tmp_path):
    assert run_cli(tmp_path, "discrete", "--eta", "1.4").returncode == 2
    assert run_cli(tmp_path, "discrete", "--sequence", "QXP").returncode == 2
    assert run_cli(tmp_path, "discrete", "--unitary", "[[1,0]]").returncode == 2
    r = run_cli(tmp_path, "discrete", "--unitary", "[[1,0],[0,2]]")
    assert r.returncode == 2  # not unitary
    assert run_cli(tmp_path, "nonsense").returncode == 2  # argparse error


def test_numerical_failure_exit_code(tmp_path):
    dark = DifElements(IDEAL.bs, IDEAL.pbs, coupling=(0.0, 0.0))
    s = replace(identity_setup(), elements=(dark, dark, dark))
    doc = tmp_path / "dark.json"
    doc.write_text(setup_to_json(s))
    r = run_cli(tmp_path, "experiment", "--setup-json", str(doc),
                "--steps", "3")
    assert r.returncode == 3
    assert "numerical failure" in r.stderr


def test_continuous_outputs(tmp_path):
    r = run_cli(tmp_path, "continuous", "--family", "pd", "--n", "2",
                "--x-max", "1.0", "--steps", "11")
    assert r.returncode == 0, r.stderr
    assert "single: eb_length 0.8955859375" in r.stdout
    for name in ("continuous_pd_single.csv", "continuous_pd_n2.csv",
                 "continuous_pd_limit.csv"):
        lines = (tmp_path / name).read_text().splitlines()
        assert lines[0] == "x,concurrence,pre_clamp,label"
        assert len(lines) == 12
    manifest = json.loads((tmp_path / "continuous_manifest.json").read_text())
    assert manifest["parameters"]["family"] == "pd"
    assert len(manifest["outputs"]) == 3


def test_continuous_undriven_skips_switched(tmp_path):
    r = run_cli(tmp_path, "continuous", "--family", "ad", "--omega", "0",
                "--n", "2", "--x-max", "1.0", "--steps", "5")
    assert r.returncode == 0
    assert "unbounded" in r.stdout
    assert not (tmp_path / "continuous_ad_n2.csv").exists()
    manifest = json.loads((tmp_path / "continuous_manifest.json").read_text())
    assert any("skipped" in note for note in manifest["notes"])


def test_continuous_growing_sign_truncates(tmp_path):
    r = run_cli(tmp_path, "continuous", "--family", "pd", "--dephasing-sign",
                "growing", "--n", "2", "--x-max", "1.0", "--steps", "11")
    assert r.returncode == 0
    manifest = json.loads((tmp_path / "continuous_manifest.json").read_text())
    assert any("truncated" in note for note in manifest["notes"])
    lines = (tmp_path / "continuous_pd_single.csv").read_text().splitlines()
    assert len(lines) < 12


def test_continuous_byte_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir(), b.mkdir()
    args = ("continuous", "--family", "ad", "--n", "2", "--x-max", "1.0",
            "--steps", "9")
    for d in (a, b):
        assert run_cli(d, *args).returncode == 0
    for name in ("continuous_ad_single.csv", "continuous_ad_n2.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_experiment_sweep_csv(tmp_path):
    r = run_cli(tmp_path, "experiment", "--map", "m1", "--steps", "9")
    assert r.returncode == 0, r.stderr
    lines = (tmp_path / "experiment_m1_ideal_theta.csv").read_text().splitlines()
    assert lines[0] == "angle,concurrence,success_prob,preset,map_label"
    assert len(lines) == 10
    assert "zero-concurrence points" in r.stdout
    manifest = json.loads(
        (tmp_path / "experiment_m1_ideal_theta_manifest.json").read_text())
    assert manifest["parameters"]["vary"] == "theta"
    assert manifest["parameters"]["steps"] == 9


def test_experiment_m2_defaults_to_phi(tmp_path):
    r = run_cli(tmp_path, "experiment", "--map", "m2", "--steps", "5")
    assert r.returncode == 0
    assert (tmp_path / "experiment_m2_ideal_phi.csv").exists()


def test_experiment_degrees_equivalent(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir(), b.mkdir()
    r1 = run_cli(a, "experiment", "--map", "m1", "--steps", "5")
    r2 = run_cli(b, "experiment", "--map", "m1", "--steps", "5", "--degrees",
                 "--range", "-90", "90", "--theta", "45", "--phi", "45",
                 "--source-phase", "180")
    assert r1.returncode == r2.returncode == 0
    assert ((a / "experiment_m1_ideal_theta.csv").read_bytes()
            == (b / "experiment_m1_ideal_theta.csv").read_bytes())


def test_experiment_seeded_mc_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir(), b.mkdir()
    args = ("experiment", "--map", "identity", "--steps", "3",
            "--omega-samples", "25", "--seed", "11")
    for d in (a, b):
        assert run_cli(d, *args).returncode == 0
    name = "experiment_identity_ideal_theta.csv"
    assert (a / name).read_bytes() == (b / name).read_bytes()
