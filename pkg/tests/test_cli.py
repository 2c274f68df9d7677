import subprocess
import sys

import numpy as np
import pytest
import yaml

from eastwest import cli, experiments
from eastwest.experiments import ConfigError, number, validate_config
from eastwest.io import read_csv
from eastwest.presets import PRESETS, get_preset, list_presets


def _write(tmp_path, cfg, name="cfg.yaml"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(cfg))
    return str(path)


SMALL = {
    "model": {"type": "px_g", "L": 8, "g": 2.0},
    "state": {"type": "wavepacket", "m0": 5, "R": 2, "k": "-pi/2"},
    "run": {"kind": "evolve", "t_max": 1.0, "dt": 0.25},
}


def test_list_presets(capsys):
    names = [n for n, _ in list_presets()]
    assert names == sorted(names)
    assert "fig1c" in names and "fig4b_bloch" in names
    assert cli.main(["list-presets"]) == 0
    assert "fig1c" in capsys.readouterr().out


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_every_preset_validates(name):
    validate_config(get_preset(name))
    assert cli.main(["validate", "--preset", name]) == 0


def test_unknown_preset_and_bad_configs(tmp_path):
    assert cli.main(["validate", "--preset", "nope"]) == 2
    assert cli.main(["validate", "--config", str(tmp_path / "missing.yaml")]) == 2
    bad = dict(SMALL, extra=1)
    assert cli.main(["validate", "--config", _write(tmp_path, bad)]) == 2
    bad = {**SMALL, "model": {"type": "px_g", "L": 8, "g": 2.0, "colour": 1}}
    assert cli.main(["validate", "--config", _write(tmp_path, bad)]) == 2
    (tmp_path / "junk.yaml").write_text("- just\n- a list\n")
    assert cli.main(["validate", "--config", str(tmp_path / "junk.yaml")]) == 2
    assert cli.main(["validate"]) == 2
    # semantically invalid: packet wider than the ring
    wide = {**SMALL, "state": {"type": "wavepacket", "m0": 5, "R": 9, "k": 0}}
    assert cli.main(["run", "--config", _write(tmp_path, wide), "--out", str(tmp_path / "o")]) == 2


def test_number_parser():
    assert number("pi/2") == pytest.approx(np.pi / 2)
    assert number("2*pi/L", 8) == pytest.approx(np.pi / 4)
    assert number(-1.5) == -1.5
    with pytest.raises(ConfigError):
        number("__import__('os')")
    with pytest.raises(ConfigError):
        number("L", None)


def test_run_deterministic(tmp_path):
    cfg = _write(tmp_path, SMALL)
    for out in ("a", "b"):
        assert cli.main(["run", "--config", cfg, "--out", str(tmp_path / out), "--threads", "1"]) == 0
    a = (tmp_path / "a" / "trajectory.csv").read_text()
    b = (tmp_path / "b" / "trajectory.csv").read_text()
    assert a == b
    assert (tmp_path / "a" / "trajectory.csv.json").exists()
    t = read_csv(tmp_path / "a" / "trajectory.csv")
    assert t["t"].size == 5 and np.all(t["p"] >= 0)
    assert a.startswith("# site 1 = most significant bit")


def test_run_product_seed(tmp_path):
    cfg = {**SMALL, "state": {"type": "product"}}
    path = _write(tmp_path, cfg)
    for out in ("a", "b"):
        assert cli.main(["run", "--config", path, "--out", str(tmp_path / out), "--seed", "5"]) == 0
    assert (tmp_path / "a" / "trajectory.csv").read_text() == (tmp_path / "b" / "trajectory.csv").read_text()


def test_resource_guard_exit(tmp_path):
    cfg = {**SMALL, "run": {**SMALL["run"], "memory_gb": 1e-6}}
    assert cli.main(["run", "--config", _write(tmp_path, cfg), "--out", str(tmp_path / "o")]) == 4


def test_numerical_failure_exit(tmp_path):
    cfg = {
        "model": {"type": "px_g", "L": 8, "g": 1e9},
        "state": {"type": "momentum", "n": 1},
        "run": {"kind": "evolve", "t_max": 10.0, "dt": 5.0, "krylov_dim": 2, "entropy": False},
    }
    assert cli.main(["run", "--config", _write(tmp_path, cfg), "--out", str(tmp_path / "o")]) == 3


def test_small_spectral_runs(tmp_path):
    spec = {
        "model": {"type": "px_g", "L": 8, "g": 0.0},
        "run": {"kind": "spectrum", "sectors": [{"k": 0, "i": 1}], "eigen_entropy": True},
    }
    files = experiments.run_experiment(spec, tmp_path / "s")
    names = {f.name for f in files}
    assert "levels.csv" in names and "mean_r.csv" in names
    table = {
        "model": {"type": "px_g", "L": 8, "g": 0.0},
        "run": {"kind": "r_table", "L_values": [8, 10], "g_values": [0.0]},
    }
    files = experiments.run_experiment(table, tmp_path / "r")
    rows = read_csv(files[0])
    assert set(rows["L"]) == {8.0, 10.0}
    tb = {"model": {"type": "ssh", "L": 8, "t1": 0.6, "t2": 1.4}, "run": {"kind": "tb_spectrum"}}
    rows = read_csv(experiments.run_experiment(tb, tmp_path / "t")[0])
    assert rows["E"].size == 15 and np.all(rows["variance"] >= 0)
    leak = {
        "model": {"type": "px_g", "L": 8, "g": 0.0},
        "run": {"kind": "leakage", "tau": [0.5, 1.0], "g_values": [0.0, 4.0], "n_values": [1, 3]},
    }
    rows = read_csv(experiments.run_experiment(leak, tmp_path / "l")[0])
    assert rows["tau"].size == 8
    assert set(rows) == {"tau", "p_predicted", "p_numeric", "g", "label"}
    assert np.all((rows["p_numeric"] >= 0) & (rows["p_numeric"] <= 1))


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "eastwest", "list-presets"], capture_output=True, text=True)
    assert res.returncode == 0 and "fig2b" in res.stdout
