"""YAML run configuration with a strict schema."""
from __future__ import annotations

import copy
import math
from dataclasses import dataclass
from pathlib import Path

import jsonschema
import yaml

from .errors import ConfigError
from .initial import apply_overrides, sample_initial
from .integrator import IntegrationPlan
from .models import ModelKind, ModelSpec, SystemState, make_spec
from .tolerances import DEFAULT_TOLERANCES

SCHEMA_VERSION = 1

_number = {"type": "number"}
_index_pair = {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 2, "maxItems": 2}
_index_triple = {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 3, "maxItems": 3}

_dist = {
    "type": "object",
    "additionalProperties": False,
    "required": ["dist"],
    "properties": {
        "dist": {"enum": ["uniform", "normal", "linspace", "fixed"]},
        "low": _number,
        "high": _number,
        "mean": _number,
        "std": {"type": "number", "exclusiveMinimum": 0},
        "values": {"type": "array"},
    },
}


def _override(index):
    return {
        "type": "array",
        "items": {
            "type": "object",
            "additionalProperties": False,
            "required": ["index", "value"],
            "properties": {"index": index, "value": _number},
        },
    }


SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["schema_version", "model", "n", "initial", "integration"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "n": {"type": "integer", "minimum": 3},
        "seed": {"type": "integer", "minimum": 0, "maximum": 2 ** 64 - 1},
        "model": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind", "params"],
            "properties": {
                "kind": {"enum": [k.value for k in ModelKind]},
                "params": {"type": "object", "additionalProperties": _number},
                "freeze_degenerate": {"type": "boolean"},
                "scan_all_slices": {"type": "boolean"},
            },
        },
        "initial": {
            "type": "object",
            "additionalProperties": False,
            "required": ["omega", "nodes", "edges", "triads"],
            "properties": {
                "omega": _dist,
                "nodes": _dist,
                "edges": _dist,
                "triads": _dist,
                "edge_overrides": _override(_index_pair),
                "triad_overrides": _override(_index_triple),
                "symmetric_overrides": {"type": "boolean"},
            },
        },
        "integration": {
            "type": "object",
            "additionalProperties": False,
            "required": ["t0", "t1", "sample_count"],
            "properties": {
                "t0": _number,
                "t1": _number,
                "dt": {"type": "number", "exclusiveMinimum": 0},
                "sample_count": {"type": "integer", "minimum": 2},
            },
        },
        "regime": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "epsilon_rel": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
                "window_fraction": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
            },
        },
        "closure": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "delta": {"type": "number", "exclusiveMinimum": 0},
                "flavor": {"enum": ["unoriented", "oriented", "semisimplicial"]},
                "symmetrize": {"type": "boolean"},
            },
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"dir": {"type": "string"}},
        },
    },
}

_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration plus the resolved objects it describes."""

    raw: dict
    spec: ModelSpec
    initial: SystemState
    plan: IntegrationPlan
    seed: int
    epsilon_rel: float
    window_fraction: float
    delta: float
    flavor: str
    symmetrize: bool
    out_dir: str | None

    @property
    def name(self) -> str:
        return self.raw.get("name", "run")


def validate_raw(data) -> None:
    errors = sorted(_VALIDATOR.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ConfigError(err.message, tuple(err.absolute_path))


def build(data: dict) -> RunConfig:
    """Validate a config mapping and construct spec, initial state and plan."""
    data = copy.deepcopy(data)
    validate_raw(data)
    n = data["n"]
    seed = data.get("seed", 0)
    model = data["model"]
    init = data["initial"]
    try:
        omega, state = sample_initial(n, seed, init["omega"], init["nodes"], init["edges"], init["triads"])
    except ValueError as exc:
        raise ConfigError(str(exc), ("initial",)) from None
    edges = [(tuple(o["index"]), o["value"]) for o in init.get("edge_overrides", [])]
    triads = [(tuple(o["index"]), o["value"]) for o in init.get("triad_overrides", [])]
    for path, items in (("edge_overrides", edges), ("triad_overrides", triads)):
        for pos, (idx, _) in enumerate(items):
            if max(idx) >= n:
                raise ConfigError(f"index {list(idx)} out of range for n={n}", ("initial", path, pos))
    state = apply_overrides(state, edges, triads, init.get("symmetric_overrides", True))
    try:
        spec = make_spec(
            model["kind"], model["params"], omega, rng_seed=seed,
            freeze_degenerate=model.get("freeze_degenerate", False),
            scan_all_slices=model.get("scan_all_slices", False),
        )
    except ConfigError as exc:
        raise ConfigError(exc.bare_message, ("model",) + exc.path) from None
    integ = data["integration"]
    try:
        plan = IntegrationPlan(integ["t0"], integ["t1"], integ.get("dt", DEFAULT_TOLERANCES.dt),
                               integ["sample_count"])
    except ValueError as exc:
        raise ConfigError(str(exc), ("integration",)) from None
    regime = data.get("regime", {})
    closure = data.get("closure", {})
    delta = closure.get("delta", spec.delta if spec.delta is not None else 0.5)
    if not math.isfinite(delta):
        raise ConfigError("delta must be finite", ("closure", "delta"))
    return RunConfig(
        raw=data,
        spec=spec,
        initial=state,
        plan=plan,
        seed=seed,
        epsilon_rel=regime.get("epsilon_rel", DEFAULT_TOLERANCES.epsilon_rel),
        window_fraction=regime.get("window_fraction", DEFAULT_TOLERANCES.window_fraction),
        delta=float(delta),
        flavor=closure.get("flavor", "unoriented"),
        symmetrize=closure.get("symmetrize", True),
        out_dir=data.get("output", {}).get("dir"),
    )


def load(path) -> dict:
    """Read a YAML config file into a plain mapping (not yet validated)."""
    text = Path(path).read_text()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"not valid YAML: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("top level must be a mapping")
    return data


def with_overrides(data: dict, seed=None, delta=None, flavor=None, epsilon_rel=None,
                   window=None, dt=None) -> dict:
    """Apply command-line overrides to a raw config mapping."""
    data = copy.deepcopy(data)
    if seed is not None:
        data["seed"] = seed
    if dt is not None:
        data.setdefault("integration", {})["dt"] = dt
    if delta is not None:
        data.setdefault("closure", {})["delta"] = delta
    if flavor is not None:
        data.setdefault("closure", {})["flavor"] = flavor
    if epsilon_rel is not None:
        data.setdefault("regime", {})["epsilon_rel"] = epsilon_rel
    if window is not None:
        data.setdefault("regime", {})["window_fraction"] = window
    return data
