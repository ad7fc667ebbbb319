"""Seeded initial conditions.

Every sampler draws from a ``numpy.random.Generator`` built on PCG64 in a
fixed order: frequencies, node values, edge weights, triad weights.
"""
from __future__ import annotations

import math

import numpy as np

from .models import SystemState

DISTRIBUTIONS = ("uniform", "normal", "linspace", "fixed")


def make_rng(seed: int) -> np.random.Generator:
    seed = int(seed)
    if not 0 <= seed < 2 ** 64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def draw(rng: np.random.Generator, spec: dict, shape) -> np.ndarray:
    """Draw an array from a small distribution description.

    ``{"dist": "uniform", "low": a, "high": b}``, ``{"dist": "normal",
    "mean": m, "std": s}``, ``{"dist": "linspace", "low": a, "high": b}``
    (1-D only) or ``{"dist": "fixed", "values": [...]}``.
    """
    dist = spec["dist"]
    if dist == "uniform":
        return rng.uniform(spec.get("low", 0.0), spec.get("high", 1.0), shape)
    if dist == "normal":
        return rng.normal(spec.get("mean", 0.0), spec.get("std", 1.0), shape)
    if dist == "linspace":
        if len(shape) != 1:
            raise ValueError("linspace only makes sense for node vectors")
        return np.linspace(spec.get("low", -1.0), spec.get("high", 1.0), shape[0])
    if dist == "fixed":
        values = np.asarray(spec["values"], dtype=np.float64)
        if values.shape != tuple(shape):
            raise ValueError(f"fixed values have shape {values.shape}, need {tuple(shape)}")
        return values.copy()
    raise ValueError(f"unknown distribution {dist!r}")


def sample_initial(n: int, seed: int, omega: dict, nodes: dict, edges: dict, triads: dict):
    """Return ``(omega, state)`` drawn in the canonical order."""
    rng = make_rng(seed)
    om = draw(rng, omega, (n,))
    x = draw(rng, nodes, (n,))
    a1 = draw(rng, edges, (n, n))
    a2 = draw(rng, triads, (n, n, n))
    return om, SystemState(0.0, x, a1, a2)


def apply_overrides(state: SystemState, edges=(), triads=(), symmetric=True) -> SystemState:
    """Pin chosen weights. With ``symmetric`` every index ordering gets the value."""
    a1 = np.array(state.a1)
    a2 = np.array(state.a2)
    for (i, j), w in edges:
        a1[i, j] = w
        if symmetric:
            a1[j, i] = w
    for (i, j, k), w in triads:
        if symmetric:
            for p in {(i, j, k), (i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)}:
                a2[p] = w
        else:
            a2[i, j, k] = w
    return state.replace(a1=a1, a2=a2)


TWO_PI = 2 * math.pi
