"""Smooth surrogates for max, min, Heaviside and sign with scale ``zeta``."""
from __future__ import annotations

import math
from typing import Sequence


def _check_zeta(zeta: float) -> None:
    if not zeta > 0:
        raise ValueError(f"smoothing scale must be positive, got {zeta}")


def smooth_max(values: Sequence[float], zeta: float) -> float:
    """Log-sum-exp maximum, shifted by the hard max for overflow safety.

    Lies in ``[max(values), max(values) + zeta*log(len(values))]``.
    """
    _check_zeta(zeta)
    values = [float(v) for v in values]
    if not values:
        raise ValueError("smooth_max of an empty sequence")
    m = max(values)
    return m + zeta * math.log(math.fsum(math.exp((v - m) / zeta) for v in values))


def smooth_min(a: float, b: float, zeta: float) -> float:
    _check_zeta(zeta)
    lo = min(a, b)
    return lo - zeta * math.log1p(math.exp(-abs(a - b) / zeta))


def smooth_heaviside(z: float, zeta: float) -> float:
    _check_zeta(zeta)
    return 0.5 * (1.0 + math.tanh(z / zeta))


def smooth_sign(z: float, zeta: float) -> float:
    _check_zeta(zeta)
    return math.tanh(z / zeta)


def smooth_sign_sym(x: float, y: float, zeta: float) -> float:
    """Sign of the pair average, smoothed: ``tanh((x + y) / (2 zeta))``."""
    _check_zeta(zeta)
    return math.tanh((x + y) / (2.0 * zeta))
