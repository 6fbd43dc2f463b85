import json
import os
import subprocess

import pytest

CLI = os.environ.get("SWIPT_RE_CLI", "swipt-re")


def run(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True)


@pytest.fixture
def channel(tmp_path):
    out = run("gen-channel", "--m", "3", "--n", "2", "--var", "1", "--seed", "7")
    assert out.returncode == 0
    path = tmp_path / "ch.json"
    path.write_text(out.stdout)
    return path


def test_gen_channel_is_seeded():
    a = run("gen-channel", "--m", "2", "--n", "2", "--var", "1", "--seed", "3").stdout
    b = run("gen-channel", "--m", "2", "--n", "2", "--var", "1", "--seed", "3").stdout
    assert a == b
    assert len(json.loads(a)["h"]) == 2


def test_solve_ok(channel):
    out = run("solve-p3", "--channel", str(channel), "--power", "2", "--qbar", "7.5")
    assert out.returncode == 0
    sol = json.loads(out.stdout)
    assert sol["converged"] and sol["harvested"] >= 7.5 - 1e-6


def test_non_convergence_exit(channel):
    out = run("solve-p3", "--channel", str(channel), "--power", "2", "--qbar", "7.5",
              "--max-iterations", "3")
    assert out.returncode == 3


def test_infeasible_exit(channel):
    assert run("solve-p3", "--channel", str(channel), "--power", "2", "--qbar", "9").returncode == 4


def test_config_errors(tmp_path, channel):
    assert run("solve-p3", "--channel", str(tmp_path / "missing.json"), "--power", "1",
               "--qbar", "0").returncode == 2
    assert run("solve-p3", "--channel", str(channel)).returncode == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"channel_source": "explicit", "h": [[[1, 0]]], "power": -1}')
    out = run("run", str(bad), "--out", str(tmp_path / "o"))
    assert out.returncode == 2
    assert "'power'" in out.stderr or "colocated" in out.stderr


def test_run_writes_csv(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "channel_source": "explicit", "h": [[[1, 0]]], "colocated": True,
        "power": 100, "schemes": ["ts2"], "n_points": 11}))
    assert run("run", str(cfg), "--out", str(tmp_path / "o")).returncode == 0
    assert (tmp_path / "o" / "ts2.csv").exists()
    assert (tmp_path / "o" / "manifest.json").exists()
