"""Built-in experiment configurations (raw config mappings)."""
from __future__ import annotations

import copy
import math

from .config import SCHEMA_VERSION

_TWO_PI = 2 * math.pi

_PHASE_RUN = {
    "schema_version": SCHEMA_VERSION,
    "n": 5,
    "seed": 0,
    "integration": {"t0": 0.0, "t1": 50.0, "dt": 0.01, "sample_count": 500},
    "regime": {"epsilon_rel": 0.05, "window_fraction": 0.2},
}

_CLOSURE_PARAMS = {"alpha": 0.5, "beta": 25.0, "gamma": 0.8, "delta": 0.5, "zeta": 0.05}

# weak edge (0,1) under a strong triad (0,1,2); the other two edges start strong
_TRIAD_SEED = {
    "edge_overrides": [
        {"index": [0, 1], "value": 0.1},
        {"index": [0, 2], "value": 0.6},
        {"index": [1, 2], "value": 0.7},
    ],
    "triad_overrides": [{"index": [0, 1, 2], "value": 0.8}],
    "symmetric_overrides": True,
}

PRESETS = {
    "sym-case": {
        **_PHASE_RUN,
        "name": "sym-case",
        "model": {"kind": "SymmetricCosine", "params": {"delta1": 0.1, "delta2": 0.1}},
        "initial": {
            "omega": {"dist": "normal", "mean": 0.0, "std": 1.0},
            "nodes": {"dist": "uniform", "low": 0.0, "high": _TWO_PI},
            "edges": {"dist": "uniform", "low": -1.0, "high": 1.0},
            "triads": {"dist": "uniform", "low": -1.0, "high": 1.0},
        },
        "closure": {"delta": 0.5, "flavor": "unoriented", "symmetrize": True},
    },
    "antisym-case": {
        **_PHASE_RUN,
        "name": "antisym-case",
        "model": {"kind": "AntisymmetricSine", "params": {"delta1": 0.1, "delta2": 0.1}},
        "initial": {
            "omega": {"dist": "linspace", "low": -1.0, "high": 1.0},
            "nodes": {"dist": "uniform", "low": 0.0, "high": 1.0},
            "edges": {"dist": "uniform", "low": -1.0, "high": 1.0},
            "triads": {"dist": "uniform", "low": -1.0, "high": 1.0},
        },
        "closure": {"delta": 0.5, "flavor": "oriented", "symmetrize": True},
    },
    "kuramoto-closure": {
        "schema_version": SCHEMA_VERSION,
        "name": "kuramoto-closure",
        "n": 4,
        "seed": 0,
        "model": {"kind": "SmoothedKuramotoClosure", "params": dict(_CLOSURE_PARAMS)},
        "initial": {
            "omega": {"dist": "normal", "mean": 0.0, "std": 0.5},
            "nodes": {"dist": "uniform", "low": 0.0, "high": _TWO_PI},
            "edges": {"dist": "uniform", "low": -0.25, "high": 0.25},
            "triads": {"dist": "uniform", "low": -0.25, "high": 0.25},
            **_TRIAD_SEED,
        },
        "integration": {"t0": 0.0, "t1": 25.0, "dt": 0.01, "sample_count": 250},
        "regime": {"epsilon_rel": 0.05, "window_fraction": 0.2},
        "closure": {"delta": 0.5, "flavor": "unoriented", "symmetrize": True},
    },
    "consensus-persistent": {
        "schema_version": SCHEMA_VERSION,
        "name": "consensus-persistent",
        "n": 4,
        "seed": 0,
        "model": {
            "kind": "ConsensusVariance",
            "params": {**_CLOSURE_PARAMS, "kappa1": 1.0, "kappa2": 1.2, "lambda1": 2.0, "lambda2": 5.0},
        },
        "initial": {
            "omega": {"dist": "fixed", "values": [0.0, 0.0, 0.0, 0.0]},
            "nodes": {"dist": "fixed", "values": [0.10, 0.15, 0.20, 2.00]},
            "edges": {"dist": "uniform", "low": -0.25, "high": 0.25},
            "triads": {"dist": "uniform", "low": -0.25, "high": 0.25},
            **_TRIAD_SEED,
        },
        "integration": {"t0": 0.0, "t1": 25.0, "dt": 0.01, "sample_count": 250},
        "regime": {"epsilon_rel": 0.05, "window_fraction": 0.2},
        "closure": {"delta": 0.5, "flavor": "unoriented", "symmetrize": True},
    },
}


def get_preset(name: str) -> dict:
    try:
        return copy.deepcopy(PRESETS[name])
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
