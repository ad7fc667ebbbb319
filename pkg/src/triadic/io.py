"""On-disk formats: binary trajectories, norm CSV and JSON reports.

Floats in text outputs are written with 17 significant digits so every value
round-trips exactly.
"""
from __future__ import annotations

import json
import math
import struct
from pathlib import Path

import numpy as np

from . import __version__
from .integrator import Trajectory
from .models import ModelSpec

MAGIC = b"TRIADTRJ"
FORMAT_VERSION = 1


def fmt_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    return format(x, ".17g")


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON text with fixed 17-digit floats; dict order is preserved."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)) and not isinstance(obj, bool):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in seq) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical(obj):
    """Copy of a JSON-like value with every mapping's keys sorted."""
    if isinstance(obj, dict):
        return {str(k): canonical(obj[k]) for k in sorted(obj, key=str)}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    return obj


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj) + "\n")


# --------------------------------------------------------------------------
# trajectory container: MAGIC, u32 header length, JSON header, float64 LE data


def write_trajectory(path, traj: Trajectory, config: dict | None = None) -> None:
    header = {
        "format_version": FORMAT_VERSION,
        "package_version": __version__,
        "layout": ["x", "a1", "a2"],
        "n": traj.n,
        "dt": traj.dt,
        "sample_count": len(traj),
        "times": [float(t) for t in traj.times],
        "config": canonical(config),
    }
    raw = dumps(header, indent=0).encode()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(raw)))
        fh.write(raw)
        fh.write(np.ascontiguousarray(traj.states, dtype="<f8").tobytes())


def read_trajectory(path):
    """Return ``(header, times, states)`` exactly as written."""
    data = Path(path).read_bytes()
    if data[:8] != MAGIC:
        raise ValueError(f"{path} is not a trajectory file")
    (hlen,) = struct.unpack("<I", data[8:12])
    header = json.loads(data[12:12 + hlen].decode())
    if header.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported trajectory format version {header.get('format_version')}")
    n = header["n"]
    width = n + n * n + n * n * n
    states = np.frombuffer(data[12 + hlen:], dtype="<f8").astype(np.float64)
    if states.size != width * header["sample_count"]:
        raise ValueError(f"{path}: payload size does not match header")
    times = np.array(header["times"], dtype=np.float64)
    return header, times, states.reshape(header["sample_count"], width)


def load_trajectory(path, spec: ModelSpec) -> Trajectory:
    header, times, states = read_trajectory(path)
    return Trajectory(spec, times, states, header["dt"])


# --------------------------------------------------------------------------
# norm series CSV

CSV_COLUMNS = ("t", "a1_sym", "a1_alt", "a2_sym", "a2_alt", "a2_mix", "r", "psi",
               "violations_unoriented", "violations_flavored")


def write_norms_csv(path, series, order, counts_unoriented, counts_flavored) -> None:
    lines = [",".join(CSV_COLUMNS)]
    for s in range(len(series)):
        row = [fmt_float(getattr(series, c)[s]) if c != "t" else fmt_float(series.times[s])
               for c in CSV_COLUMNS[:6]]
        row += [fmt_float(order[s][0]), fmt_float(order[s][1])]
        row += [str(int(counts_unoriented[s])), str(int(counts_flavored[s]))]
        lines.append(",".join(row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_norms_csv(path) -> dict:
    lines = Path(path).read_text().splitlines()
    cols = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return {c: np.array([float(r[q]) for r in rows]) for q, c in enumerate(cols)}
