import json

import numpy as np
import pytest
import yaml

from triadic import __version__
from triadic.cli import main
from triadic.config import build, validate_raw
from triadic.errors import ConfigError
from triadic.integrator import integrate
from triadic.io import CSV_COLUMNS, dumps, read_norms_csv, read_trajectory, write_trajectory
from triadic.pipeline import REPORT_FILES
from triadic.presets import PRESETS, get_preset


def short(name, t1=2.0, samples=21):
    raw = get_preset(name)
    raw["integration"].update(t1=t1, sample_count=samples)
    return raw


def write_yaml(path, raw):
    path.write_text(yaml.safe_dump(raw))
    return path


@pytest.fixture(scope="module")
def kc_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("kc")
    assert main(["preset", "kuramoto-closure", "--out", str(out)]) == 0
    return out


def test_preset_outputs(kc_run):
    for name in REPORT_FILES + ("trajectory.bin", "config.json"):
        assert (kc_run / name).exists()
    snaps = json.loads((kc_run / "snapshots.json").read_text())
    assert len(snaps["snapshots"]) == 6
    assert snaps["metadata"]["package_version"] == __version__ and snaps["metadata"]["dt"] == 0.01
    ret = json.loads((kc_run / "retention.json").read_text())
    assert ret["first_entry_time"] is not None and ret["first_exit_after_entry"] is None
    assert kc_run.joinpath("norms.csv").read_text().splitlines()[0] == ",".join(CSV_COLUMNS)


def test_analyze_reproduces_preset(kc_run, tmp_path):
    assert main(["analyze", str(kc_run / "trajectory.bin"), "--out", str(tmp_path)]) == 0
    for name in REPORT_FILES:
        assert (tmp_path / name).read_bytes() == (kc_run / name).read_bytes()


def test_simulate_matches_preset(kc_run, tmp_path):
    cfg = write_yaml(tmp_path / "kc.yaml", get_preset("kuramoto-closure"))
    assert main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "sim")]) == 0
    for name in REPORT_FILES + ("trajectory.bin",):
        assert (tmp_path / "sim" / name).read_bytes() == (kc_run / name).read_bytes()


def test_check_with_huge_delta(kc_run, tmp_path):
    assert main(["check", str(kc_run / "trajectory.bin"), "--delta", "1000", "--out", str(tmp_path)]) == 0
    ret = json.loads((tmp_path / "retention.json").read_text())
    assert set(ret["violation_counts"]) == {0} and ret["first_entry_time"] == 0


def test_check_prints_to_stdout(kc_run, capsys):
    assert main(["check", str(kc_run / "trajectory.bin"), "--flavor", "semisimplicial"]) == 0
    assert json.loads(capsys.readouterr().out)["flavor"] == "semisimplicial"


def test_looser_threshold_stays_symmetric(tmp_path):
    assert main(["preset", "sym-case", "--out", str(tmp_path / "run")]) == 0
    assert main(["analyze", str(tmp_path / "run" / "trajectory.bin"), "--out", str(tmp_path / "a"),
                 "--epsilon-rel", "0.5"]) == 0
    verdict = json.loads((tmp_path / "a" / "regime.json").read_text())
    assert verdict["regime"] == "Symmetric" and verdict["epsilon_rel"] == 0.5


def test_trajectory_roundtrip_is_bit_exact(tmp_path):
    rc = build(short("consensus-persistent"))
    traj = integrate(rc.spec, rc.initial, rc.plan)
    write_trajectory(tmp_path / "t.bin", traj, rc.raw)
    header, times, states = read_trajectory(tmp_path / "t.bin")
    assert states.tobytes() == traj.states.tobytes()
    assert times.tobytes() == traj.times.tobytes()
    assert header["config"] == json.loads(json.dumps(rc.raw))


def test_csv_roundtrip(kc_run):
    rc = build(get_preset("kuramoto-closure"))
    cols = read_norms_csv(kc_run / "norms.csv")
    _, times, _ = read_trajectory(kc_run / "trajectory.bin")
    assert cols["t"].tobytes() == times.tobytes()
    assert len(cols["a1_sym"]) == rc.plan.sample_count


def test_seed_override(tmp_path):
    cfg = write_yaml(tmp_path / "c.yaml", short("sym-case"))
    runs = {}
    for tag, seed in (("a", "1"), ("b", "1"), ("c", "2")):
        assert main(["simulate", "--config", str(cfg), "--out", str(tmp_path / tag), "--seed", seed]) == 0
        runs[tag] = (tmp_path / tag / "trajectory.bin").read_bytes()
    assert runs["a"] == runs["b"] != runs["c"]


def test_sweep(tmp_path):
    paths = [write_yaml(tmp_path / f"{p}.yaml", short(p)) for p in ("sym-case", "antisym-case")]
    argv = ["sweep", "--out", str(tmp_path / "sw"), "--workers", "2"]
    for p in paths:
        argv += ["--config", str(p)]
    assert main(argv) == 0
    dirs = sorted(d.name for d in (tmp_path / "sw").iterdir())
    assert dirs == ["000_sym-case", "001_antisym-case"]
    assert main(["simulate", "--config", str(paths[0]), "--out", str(tmp_path / "single")]) == 0
    assert (tmp_path / "sw" / dirs[0] / "norms.csv").read_bytes() == (tmp_path / "single" / "norms.csv").read_bytes()


# ---------------------------------------------------------------- errors and exit codes


def test_unknown_key_rejected_with_path(tmp_path, capsys):
    raw = short("sym-case")
    raw["integration"]["stepsize"] = 0.1
    assert main(["simulate", "--config", str(write_yaml(tmp_path / "c.yaml", raw))]) == 2
    assert "integration" in capsys.readouterr().err


def test_bad_parameter_exit_code(tmp_path, capsys):
    raw = short("kuramoto-closure")
    raw["model"]["params"]["zeta"] = 0.9
    assert main(["simulate", "--config", str(write_yaml(tmp_path / "c.yaml", raw))]) == 2
    assert "model.params.zeta" in capsys.readouterr().err


def test_schema_paths():
    raw = short("sym-case")
    raw["closure"]["flavor"] = "sideways"
    with pytest.raises(ConfigError) as err:
        validate_raw(raw)
    assert err.value.path == ("closure", "flavor")
    raw = short("sym-case")
    raw["initial"]["edge_overrides"] = [{"index": [0, 9], "value": 1.0}]
    with pytest.raises(ConfigError) as err:
        build(raw)
    assert err.value.path[:2] == ("initial", "edge_overrides")


def test_numerical_failure_exit_code(tmp_path, capsys):
    raw = short("sym-case")
    raw["model"]["params"] = {"delta1": 1e200, "delta2": 0.1}
    raw["initial"]["edges"] = {"dist": "uniform", "low": 1e150, "high": 2e150}
    assert main(["simulate", "--config", str(write_yaml(tmp_path / "c.yaml", raw)),
                 "--out", str(tmp_path / "o")]) == 3
    assert "t=" in capsys.readouterr().err


def test_io_failure_exit_code(tmp_path):
    assert main(["analyze", str(tmp_path / "missing.bin"), "--out", str(tmp_path / "o")]) == 4
    (tmp_path / "junk.bin").write_bytes(b"not a trajectory")
    assert main(["check", str(tmp_path / "junk.bin")]) == 4
    blocker = tmp_path / "file"
    blocker.write_text("x")
    cfg = write_yaml(tmp_path / "c.yaml", short("sym-case"))
    assert main(["simulate", "--config", str(cfg), "--out", str(blocker / "sub")]) == 4


def test_presets_validate():
    for name in PRESETS:
        validate_raw(get_preset(name))
    with pytest.raises(KeyError):
        get_preset("nope")


def test_float_format_is_17_digits():
    assert dumps({"x": 0.1, "y": [1.0, 2], "z": None}) == '{\n  "x": 0.10000000000000001,\n  "y": [1, 2],\n  "z": null\n}'
    with pytest.raises(ValueError):
        dumps(float("nan"))
    assert float(dumps(np.float64(np.pi))) == np.pi
