import json
import subprocess
import sys

import numpy as np
import pytest

from lfwavelets.cli import main, run
from lfwavelets.first_stage import haar_bank, perturbed
from conftest import make_lattice


def cli(*args, env=None):
    return subprocess.run([sys.executable, "-m", "lfwavelets.cli", *args], capture_output=True,
                          text=True, env=env)


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def test_field_info_default(capsys):
    assert main(["field-info"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["meta"]["lattice"]["q"] == 2
    assert out["meta"]["lattice"]["delta"] == "[(-1,[1])]"
    assert out["meta"]["lattice"]["degenerate"] is True
    assert out["checks"][0]["pass"] is True
    assert out["schema_version"] == "1.0"


def test_field_info_degeneracy_warning(tmp_path, capsys):
    cfg = write(tmp_path / "c.json", {"params": {"p": 2, "c": 1, "N": 3, "r": 1, "nu_policy": "ScalarModP"}})
    assert main(["field-info", "--config", cfg]) == 0
    out = json.loads(capsys.readouterr().out)
    assert any("DEGENERATE" in w for w in out["warnings"])


def test_config_error_exit_2(tmp_path):
    cfg = write(tmp_path / "c.json", {"params": {"p": 3, "c": 1, "N": 3, "nu_policy": "ScalarModP"}})
    assert run(["field-info", "--config", cfg])[0] == 2


def test_verify_exit_codes(tmp_path, lat2):
    assert run(["verify", "--bank", "builtin:haar"])[0] == 0
    bad = write(tmp_path / "b.json", perturbed(haar_bank(lat2), 1, (0, 0), 0.1).to_json())
    code, rep = run(["verify", "--bank", bad])
    assert code == 1 and "unitarity" in rep.failing()
    (tmp_path / "m.json").write_text("{not json")
    assert run(["verify", "--bank", str(tmp_path / "m.json")])[0] == 2
    assert run(["verify", "--bank", str(tmp_path / "missing.json")])[0] == 2


def test_verify_stage_depth(tmp_path):
    code, rep = run(["verify", "--bank", "builtin:haar", "--stage", "3"])
    assert code == 0
    names = [c.check for c in rep.checks]
    assert "stage3_gram" in names and "split3_energy" in names


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as e:
        main(["verify"])
    assert e.value.code == 2


def test_transform_round_trip(tmp_path, rng):
    z = [{"eps": 0, "n": n, "re": float(rng.normal()), "im": float(rng.normal())} for n in range(8)]
    sig = write(tmp_path / "z.json", z)
    dec, rec = tmp_path / "dec.json", tmp_path / "rec.json"
    code, rep = run(["transform", "--bank", "builtin:haar", "--signal", sig, "--stage", "3", "--out", str(dec)])
    assert code == 0
    energy = sum(r["energy"] for r in rep.meta["energy_table"])
    assert energy == pytest.approx(sum(t["re"] ** 2 + t["im"] ** 2 for t in z), abs=1e-10)
    code, _ = run(["transform", "--bank", "builtin:haar", "--signal", str(dec), "--stage", "3",
                   "--inverse", "--out", str(rec)])
    assert code == 0
    back = {(t["eps"], t["n"]): complex(t["re"], t["im"]) for t in json.loads(rec.read_text())}
    err = max(abs(back.get((0, t["n"]), 0) - complex(t["re"], t["im"])) for t in z)
    assert err < 1e-10


def test_transform_zero_signal(tmp_path):
    sig = write(tmp_path / "z.json", [])
    code, rep = run(["transform", "--bank", "builtin:haar", "--signal", sig, "--stage", "2"])
    assert code == 0
    assert all(r["energy"] == 0 for r in rep.meta["energy_table"])


def test_transform_window_overflow(tmp_path):
    sig = write(tmp_path / "z.json", [{"eps": 0, "n": 100, "re": 1.0}])
    assert run(["transform", "--bank", "builtin:haar", "--signal", sig, "--window", "3"])[0] == 1


def test_transform_gate_and_force(tmp_path, lat2):
    bad = write(tmp_path / "b.json", haar_bank(lat2).scaled(2).to_json())
    sig = write(tmp_path / "z.json", [{"eps": 0, "n": 1, "re": 1.0}])
    assert run(["transform", "--bank", bad, "--signal", sig])[0] == 1
    assert run(["transform", "--bank", bad, "--signal", sig, "--force"])[0] == 0


def test_bridge_command():
    code, rep = run(["bridge", "--bank", "builtin:haar", "--stage", "8", "--resolution", "3"])
    assert code == 0
    cells = rep.meta["tables"]["cascade"]["m0_product"]["cells"]
    vals = np.array([c["re"] for c in cells])
    assert len(vals) == 32 and np.allclose(vals[:16], 1) and np.allclose(vals[16:], 0)


def test_nu_flag_switches_policy(tmp_path, capsys):
    cfg = write(tmp_path / "c.json", {"params": {"p": 2, "c": 1, "N": 3, "r": 1}})
    code, rep = run(["basis-check", "--config", cfg, "--nu", "coset"])
    assert rep.params["nu_policy"] == "CosetRep"
    assert rep.meta["lattice"]["degenerate"] is False


def test_console_entry_point_and_threads(tmp_path):
    import os
    a = cli("verify", "--bank", "builtin:haar", env={**os.environ, "LW_THREADS": "1"})
    b = cli("verify", "--bank", "builtin:haar", env={**os.environ, "LW_THREADS": "4"})
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout
    assert "verify: PASS" in a.stderr
