"""End-to-end command line behavior: exit codes, artifacts, determinism."""

from __future__ import annotations

import csv
import os

import pytest

from mtphase import main, read_manifest, sha256_file
from mtphase.output import MANIFEST_NAME

CANONICAL = """\
[model]
k1 = 1.0
k3 = 1.0
k5 = 1.0
k7 = 2.0
C1 = 1.0
E = 1.0
d1 = 0.12
d2 = 0.12
d3 = 0.12

[domain]
ell = 3.141592653589793

[analysis]
M_max = 30
ray = d1:1,d2:1,d3:1
bracket = 0.05,1.0

[simulate]
N = 32
dt = auto
T = 2.0
ic = random:0.0001
seed = 5
record_every = 10

[sweep]
axis1 = d1:1,d2:1,d3:1
range1 = 0.08,0.4
axis2 = k7
range2 = 1.5,2.5
resolution = 4,3

[output]
directory = out
formats = csv
"""


@pytest.fixture()
def config_path(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text(CANONICAL)
    return str(path)


def test_missing_config_file_is_config_error(tmp_path, capsys):
    rc = main(["steady-state", "--config", str(tmp_path / "absent.ini")])
    assert rc == 2
    assert "configuration error" in capsys.readouterr().err


def test_unknown_key_is_config_error(tmp_path, capsys):
    path = tmp_path / "bad.ini"
    path.write_text(CANONICAL + "\n[model2]\nk1 = 1\n")
    rc = main(["steady-state", "--config", str(path)])
    assert rc == 2
    assert "model2" in capsys.readouterr().err


def test_numerical_failure_exit_code(tmp_path, capsys):
    path = tmp_path / "stable.ini"
    path.write_text(CANONICAL.replace("bracket = 0.05,1.0", "bracket = 0.3,0.9"))
    rc = main(["threshold", "--config", str(path), "--out", str(tmp_path / "o")])
    assert rc == 3
    assert "numerical failure" in capsys.readouterr().err


def test_internal_error_exit_code(config_path, tmp_path, monkeypatch, capsys):
    from mtphase import artifacts

    def boom(config, out_dir):
        raise RuntimeError("unexpected")

    monkeypatch.delenv("MTPHASE_DEBUG", raising=False)
    monkeypatch.setattr(artifacts, "run_steady_state", boom)
    rc = main(["steady-state", "--config", config_path, "--out", str(tmp_path / "o")])
    assert rc == 4
    assert "internal error" in capsys.readouterr().err


def test_steady_state_writes_artifact_and_manifest(config_path, tmp_path, capsys):
    out = str(tmp_path / "o")
    rc = main(["steady-state", "--config", config_path, "--out", out])
    assert rc == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert all(line.startswith("wrote ") for line in lines)
    csv_path = os.path.join(out, "steady-state.csv")
    assert os.path.exists(csv_path)
    entries = read_manifest(os.path.join(out, MANIFEST_NAME))
    assert entries["sha256:steady-state.csv"] == sha256_file(csv_path)


def test_threshold_artifact_schema(config_path, tmp_path):
    out = str(tmp_path / "o")
    assert main(["threshold", "--config", config_path, "--out", out]) == 0
    with open(os.path.join(out, "threshold.csv"), newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 1
    row = rows[0]
    assert float(row["ray_coord"]) == pytest.approx(0.1700864866, abs=1e-8)
    assert row["cond2_ok"] == "true"
    assert abs(float(row["sigma11_re"])) <= 1e-8
    assert set(row) == {
        "ray_coord", "k1", "k3", "k5", "k7", "C1", "E", "d1", "d2", "d3",
        "ell", "detE1", "sigma11_re", "sigma11_im", "cond2_ok",
    }


def test_simulate_seed_determinism(config_path, tmp_path):
    out1, out2, out3 = (str(tmp_path / n) for n in ("a", "b", "c"))
    assert main(["simulate", "--config", config_path, "--out", out1, "--seed", "9"]) == 0
    assert main(["simulate", "--config", config_path, "--out", out2, "--seed", "9"]) == 0
    assert main(["simulate", "--config", config_path, "--out", out3, "--seed", "10"]) == 0
    read = lambda d: open(os.path.join(d, "simulate.csv"), "rb").read()
    assert read(out1) == read(out2)
    assert read(out1) != read(out3)


def test_phase_diagram_worker_independence(config_path, tmp_path):
    out1, out2 = str(tmp_path / "w1"), str(tmp_path / "w2")
    assert main(["phase-diagram", "--config", config_path, "--out", out1,
                 "--workers", "1"]) == 0
    assert main(["phase-diagram", "--config", config_path, "--out", out2,
                 "--workers", "3"]) == 0
    for name in ("phase-diagram.csv", "critical-curve.csv"):
        a = open(os.path.join(out1, name), "rb").read()
        b = open(os.path.join(out2, name), "rb").read()
        assert a == b


def test_verify_subset_and_csv(tmp_path):
    out = str(tmp_path / "v")
    rc = main(["verify", "--only", "1,4,6", "--out", out])
    assert rc == 0
    with open(os.path.join(out, "verify.csv"), newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [int(r["criterion"]) for r in rows] == [1, 4, 6]
    assert all(r["passed"] == "true" for r in rows)


def test_verify_rejects_bad_only(tmp_path, capsys):
    assert main(["verify", "--only", "0,99", "--out", str(tmp_path / "v")]) == 2
    assert main(["verify", "--only", "abc", "--out", str(tmp_path / "v")]) == 2


def test_verify_requires_ray_and_sweep(tmp_path, capsys):
    path = tmp_path / "noray.ini"
    body = CANONICAL.split("[analysis]")[0]  # model + domain only
    path.write_text(body)
    rc = main(["verify", "--config", str(path), "--only", "1",
               "--out", str(tmp_path / "v")])
    assert rc == 2
