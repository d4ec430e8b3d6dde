# Copyright 2026 The hamxform Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import os
import subprocess

import pytest

CLI = os.environ.get("HAMXFORM_CLI", "hamxform")


def run(*args, cwd=None):
    return subprocess.run([CLI, *args], capture_output=True, text=True, cwd=cwd)


def test_version():
    out = run("version")
    assert out.returncode == 0
    assert out.stdout.startswith("hamxform ")


def test_list_kinds_and_parameters():
    out = run("list")
    assert out.returncode == 0
    for kind in ("nmr", "grover", "ising", "verify-transform", "rescale"):
        assert kind in out.stdout
    out = run("list", "nmr")
    assert out.returncode == 0
    assert "min_fidelity" in out.stdout


def test_usage_errors_exit_one():
    assert run().returncode == 1
    assert run("frobnicate").returncode == 1
    assert run("list", "nope").returncode == 1


def test_invalid_config_reports_field(tmp_path):
    out = run("run", "--experiment", "grover", "--set", "n_steps=-5", "--out", str(tmp_path))
    assert out.returncode == 1
    assert "n_steps" in out.stderr


def test_malformed_config_reports_position(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text('{"experiment": "nmr",\n "g": }\n')
    out = run("run", "--config", str(cfg), "--out", str(tmp_path / "o"))
    assert out.returncode == 1
    assert "line 2" in out.stderr


def test_run_writes_record_and_curves(tmp_path):
    out = run("run", "--experiment", "nmr", "--out", str(tmp_path))
    assert out.returncode == 0, out.stdout + out.stderr
    lines = out.stdout.strip().splitlines()
    assert all(line.startswith(("PASS ", "FAIL ")) for line in lines[:-1])
    record = json.loads((tmp_path / "result.json").read_text())
    assert record["pass"] is True
    assert record["experiment"] == "nmr"
    assert record["metrics"]["min_fidelity"] >= 0.999
    for name in record["curves"]:
        header = (tmp_path / name).read_text().splitlines()[0]
        assert header == "t,value"


def test_failed_verdict_exits_two(tmp_path):
    out = run("run", "--experiment", "verify-transform", "--set", "pair=mismatched", "--out", str(tmp_path))
    assert out.returncode == 2
    assert "FAIL" in out.stdout


def test_set_overrides_match_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"experiment": "rescale", "n_steps": 2000, "stride": 20}))
    a = run("run", "--config", str(cfg), "--out", str(tmp_path / "a"))
    b = run("run", "--experiment", "rescale", "--set", "n_steps=2000", "--set", "stride=20", "--out", str(tmp_path / "b"))
    assert a.returncode == 0 and b.returncode == 0
    ra = json.loads((tmp_path / "a" / "result.json").read_text())
    rb = json.loads((tmp_path / "b" / "result.json").read_text())
    assert ra["config"] == rb["config"]
    assert ra["metrics"] == rb["metrics"]


@pytest.mark.parametrize("jobs", ["1", "3"])
def test_results_are_deterministic(tmp_path, jobs):
    args = ("--experiment", "grover", "--set", "n_qubits=2", "--set", "marked=1", "--set", "t_end=5",
            "--set", "n_steps=2000", "--set", "sweep_doublings=2", "--set", "sweep_dt=0.01")
    a = run("run", *args, "--jobs", jobs, "--out", str(tmp_path / "a"))
    b = run("run", *args, "--jobs", "2", "--out", str(tmp_path / "b"))
    assert a.returncode == b.returncode
    ra = json.loads((tmp_path / "a" / "result.json").read_text())
    rb = json.loads((tmp_path / "b" / "result.json").read_text())
    assert ra["metrics"] == rb["metrics"]
    assert ra["curves"] == rb["curves"]
    for name in ra["curves"]:
        assert (tmp_path / "a" / name).read_text() == (tmp_path / "b" / name).read_text()


def test_export_trace(tmp_path):
    out = run("run", "--experiment", "verify-transform", "--set", "pair=self", "--set", "n_steps=50",
              "--set", "export_trace=true", "--out", str(tmp_path))
    assert out.returncode == 0
    assert (tmp_path / "trace.txt").stat().st_size > 0
