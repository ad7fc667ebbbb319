"""Simulation and report generation shared by the CLI subcommands."""
from __future__ import annotations

from pathlib import Path

from . import __version__, io
from .analysis import (
    Flavor,
    check_closure,
    classify_regime,
    norm_series,
    order_parameter,
    project_for_flavor,
    scan_retention,
    violation_counts,
)
from .complex import extract, validate
from .config import RunConfig, build, with_overrides
from .integrator import Trajectory, integrate
from .models import ClosureParams, ConsensusParams, beta_lower_bound, hitting_rate

SNAPSHOT_COUNT = 6
TRAJECTORY_FILE = "trajectory.bin"
REPORT_FILES = ("norms.csv", "regime.json", "retention.json", "snapshots.json")


def simulate(rc: RunConfig) -> Trajectory:
    return integrate(rc.spec, rc.initial, rc.plan)


def _metadata(rc: RunConfig, traj: Trajectory) -> dict:
    return {
        "package_version": __version__,
        "format_version": io.FORMAT_VERSION,
        "run": rc.name,
        "model": rc.spec.kind.value,
        "n": rc.spec.n,
        "seed": rc.seed,
        "dt": traj.dt,
        "integrator": "classical RK4, fixed step",
        "t0": float(traj.times[0]),
        "t1": float(traj.times[-1]),
        "sample_count": len(traj),
        "delta": rc.delta,
        "flavor": rc.flavor,
        "symmetrize": rc.symmetrize,
        "epsilon_rel": rc.epsilon_rel,
        "window_fraction": rc.window_fraction,
    }


def snapshot_indices(count: int, k: int = SNAPSHOT_COUNT) -> list:
    if count <= k:
        return list(range(count))
    return [round(q * (count - 1) / (k - 1)) for q in range(k)]


def retention_payload(rc: RunConfig, traj: Trajectory, verdict=None) -> dict:
    record = scan_retention(traj, rc.delta, rc.flavor, rc.symmetrize)
    out = record.to_dict()
    params = rc.spec.params
    if isinstance(params, (ClosureParams, ConsensusParams)):
        out["beta_lower_bound"] = beta_lower_bound(params.alpha, params.delta, params.zeta)
        out["hitting_rate"] = hitting_rate(params)
    if verdict is not None:
        # closure is reported next to the regime verdict, not gated on it
        out["regime"] = verdict.regime.value
    return out


def write_reports(rc: RunConfig, traj: Trajectory, out_dir) -> dict:
    """Write norms.csv, regime.json, retention.json and snapshots.json."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    meta = _metadata(rc, traj)
    series = norm_series(traj)
    verdict = classify_regime(series, rc.epsilon_rel, rc.window_fraction)
    order = [order_parameter(traj.x(s)) for s in range(len(traj))]
    counts_u = violation_counts(traj, rc.delta, Flavor.UNORIENTED, rc.symmetrize)
    counts_f = violation_counts(traj, rc.delta, rc.flavor, rc.symmetrize)
    io.write_norms_csv(out / "norms.csv", series, order, counts_u, counts_f)
    io.write_json(out / "regime.json", {"metadata": meta, **verdict.to_dict()})
    io.write_json(out / "retention.json", {"metadata": meta, **retention_payload(rc, traj, verdict)})

    flavor = Flavor(rc.flavor)
    snaps = []
    for s in snapshot_indices(len(traj)):
        a1, a2 = traj.a1(s), traj.a2(s)
        if rc.symmetrize:
            a1, a2 = project_for_flavor(a1, a2, flavor)
        ds = extract(a1, a2, rc.delta, flavor)
        r, psi = order[s]
        snaps.append({
            "index": s,
            "t": float(traj.times[s]),
            "r": r,
            "psi": psi,
            "complex": ds.to_dict(),
            "semisimplicial": validate(ds).is_semisimplicial,
            "closure": check_closure(a1, a2, rc.delta, flavor).to_dict(),
        })
    io.write_json(out / "snapshots.json", {
        "metadata": meta,
        "regime": verdict.regime.value,
        "snapshots": snaps,
    })
    return {"verdict": verdict, "series": series}


def run(rc: RunConfig, out_dir) -> dict:
    """Integrate a config, store the trajectory and all reports in ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    traj = simulate(rc)
    io.write_trajectory(out / TRAJECTORY_FILE, traj, rc.raw)
    io.write_json(out / "config.json", io.canonical(rc.raw))
    result = write_reports(rc, traj, out)
    result["trajectory"] = traj
    return result


def load_run(path, overrides: dict | None = None):
    """Rebuild the RunConfig stored in a trajectory file and load its samples."""
    header, times, states = io.read_trajectory(path)
    raw = header.get("config")
    if raw is None:
        raise ValueError(f"{path} carries no run configuration")
    rc = build(with_overrides(raw, **(overrides or {})))
    if rc.spec.n != header["n"]:
        raise ValueError(f"{path}: header n does not match its configuration")
    return rc, Trajectory(rc.spec, times, states, header["dt"])
