"""Built-in adaptive triadic models and their right-hand sides."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, fields
from enum import Enum
from typing import NamedTuple, Sequence

import numpy as np

from . import backend
from .errors import ConfigError, NonFiniteError, ShapeMismatchError
from .smoothing import (
    smooth_heaviside,
    smooth_max,
    smooth_min,
    smooth_sign,
    smooth_sign_sym,
)
from .tensor import as_rank2, as_rank3

__all__ = [
    "ClosureParams",
    "ConsensusParams",
    "Derivative",
    "LinearDecayParams",
    "ModelKind",
    "ModelSpec",
    "SystemState",
    "beta_lower_bound",
    "closure_gate",
    "eval_rhs",
    "smooth_heaviside",
    "smooth_max",
    "smooth_min",
    "smooth_sign",
    "smooth_sign_sym",
]


class ModelKind(str, Enum):
    SYMMETRIC_COSINE = "SymmetricCosine"
    ANTISYMMETRIC_SINE = "AntisymmetricSine"
    SMOOTHED_KURAMOTO_CLOSURE = "SmoothedKuramotoClosure"
    CONSENSUS_VARIANCE = "ConsensusVariance"

    @property
    def code(self) -> int:
        return _KIND_CODES[self]


_KIND_CODES = {
    ModelKind.SYMMETRIC_COSINE: backend.SYMMETRIC_COSINE,
    ModelKind.ANTISYMMETRIC_SINE: backend.ANTISYMMETRIC_SINE,
    ModelKind.SMOOTHED_KURAMOTO_CLOSURE: backend.KURAMOTO_CLOSURE,
    ModelKind.CONSENSUS_VARIANCE: backend.CONSENSUS_VARIANCE,
}


def _require_positive(obj) -> None:
    for f in fields(obj):
        value = getattr(obj, f.name)
        if isinstance(value, bool):
            continue
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise ConfigError(f"must be a positive finite number, got {value!r}", (f.name,))


def _check_zeta(zeta: float) -> None:
    if zeta > 0.5:
        raise ConfigError(f"smoothing scale must satisfy zeta <= 0.5, got {zeta}", ("zeta",))
    if zeta > 0.1:
        warnings.warn(f"zeta = {zeta} is not small; smoothed gates will be blurry", stacklevel=3)


@dataclass(frozen=True)
class LinearDecayParams:
    """Relaxation rates for the SymmetricCosine / AntisymmetricSine models."""

    delta1: float
    delta2: float

    def __post_init__(self):
        _require_positive(self)

    def as_array(self) -> np.ndarray:
        return np.array([self.delta1, self.delta2], dtype=np.float64)


@dataclass(frozen=True)
class ClosureParams:
    alpha: float
    beta: float
    gamma: float
    delta: float
    zeta: float

    def __post_init__(self):
        _require_positive(self)
        _check_zeta(self.zeta)

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha, self.beta, self.gamma, self.delta, self.zeta])


@dataclass(frozen=True)
class ConsensusParams:
    alpha: float
    beta: float
    gamma: float
    delta: float
    zeta: float
    kappa1: float
    kappa2: float
    lambda1: float
    lambda2: float

    def __post_init__(self):
        _require_positive(self)
        _check_zeta(self.zeta)

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, f.name) for f in fields(self)], dtype=np.float64)


PARAM_TYPES = {
    ModelKind.SYMMETRIC_COSINE: LinearDecayParams,
    ModelKind.ANTISYMMETRIC_SINE: LinearDecayParams,
    ModelKind.SMOOTHED_KURAMOTO_CLOSURE: ClosureParams,
    ModelKind.CONSENSUS_VARIANCE: ConsensusParams,
}


@dataclass(frozen=True)
class ModelSpec:
    """One of the built-in models with its parameters.

    ``omega`` holds the intrinsic frequencies (phase models) and is ignored by
    ConsensusVariance.  ``freeze_degenerate`` zeroes adaptation on diagonal
    and repeated-index entries; ``scan_all_slices`` makes the closure gate
    look at every triad entry containing the edge's two nodes instead of only
    the slice with the third index free.
    """

    kind: ModelKind
    params: LinearDecayParams | ClosureParams | ConsensusParams
    omega: np.ndarray
    rng_seed: int = 0
    freeze_degenerate: bool = False
    scan_all_slices: bool = False
    _param_array: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        kind = ModelKind(self.kind)
        object.__setattr__(self, "kind", kind)
        expected = PARAM_TYPES[kind]
        if not isinstance(self.params, expected):
            raise ConfigError(
                f"{kind.value} needs {expected.__name__}, got {type(self.params).__name__}",
                ("params",),
            )
        omega = np.array(self.omega, dtype=np.float64).ravel()
        if not np.isfinite(omega).all():
            raise ConfigError("omega contains non-finite values", ("omega",))
        omega.setflags(write=False)
        object.__setattr__(self, "omega", omega)
        pa = self.params.as_array()
        pa.setflags(write=False)
        object.__setattr__(self, "_param_array", pa)

    @property
    def n(self) -> int:
        return self.omega.shape[0]

    @property
    def flags(self) -> int:
        return (backend.FLAG_FREEZE_DEGENERATE if self.freeze_degenerate else 0) | (
            backend.FLAG_SCAN_ALL_SLICES if self.scan_all_slices else 0
        )

    @property
    def param_array(self) -> np.ndarray:
        return self._param_array

    @property
    def delta(self) -> float | None:
        """Closure threshold built into the model, if it has one."""
        return getattr(self.params, "delta", None)


@dataclass(frozen=True)
class SystemState:
    t: float
    x: np.ndarray
    a1: np.ndarray
    a2: np.ndarray

    def __post_init__(self):
        x = np.array(self.x, dtype=np.float64).ravel()
        a1 = as_rank2(np.array(self.a1, dtype=np.float64))
        a2 = as_rank3(np.array(self.a2, dtype=np.float64))
        n = x.shape[0]
        if a1.shape[0] != n or a2.shape[0] != n:
            raise ShapeMismatchError(
                f"state sizes disagree: x {x.shape}, a1 {a1.shape}, a2 {a2.shape}",
                x.shape, a1.shape, a2.shape,
            )
        if not np.isfinite(x).all() or not math.isfinite(self.t):
            raise NonFiniteError("state has a non-finite node value or time", where=("x",))
        for arr in (x, a1, a2):
            arr.setflags(write=False)
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "a1", a1)
        object.__setattr__(self, "a2", a2)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    def replace(self, **changes) -> "SystemState":
        data = {"t": self.t, "x": self.x, "a1": self.a1, "a2": self.a2}
        data.update(changes)
        return SystemState(**data)


class Derivative(NamedTuple):
    dx: np.ndarray
    da1: np.ndarray
    da2: np.ndarray


def _locate(index: int, n: int) -> tuple:
    if index < n:
        return ("x", index)
    index -= n
    if index < n * n:
        return ("a1", *divmod(index, n))
    index -= n * n
    i, rest = divmod(index, n * n)
    return ("a2", i, *divmod(rest, n))


def eval_rhs_flat(spec: ModelSpec, y: np.ndarray, out: np.ndarray | None = None) -> np.ndarray:
    n = spec.n
    if out is None:
        out = np.empty_like(y)
    backend.rhs_into(spec.kind.code, y, spec.omega, spec.param_array, spec.flags, n, out)
    bad = ~np.isfinite(out)
    if bad.any():
        where = _locate(int(np.flatnonzero(bad)[0]), n)
        raise NonFiniteError(f"non-finite derivative at {where}", where=where)
    return out


def eval_rhs(spec: ModelSpec, state: SystemState) -> Derivative:
    """Time derivative of (x, a1, a2) under ``spec``."""
    n = spec.n
    if state.n != n:
        raise ShapeMismatchError(
            f"model has n={n} but state has n={state.n}", (n,), (state.n,)
        )
    y = np.concatenate([state.x, state.a1.ravel(), state.a2.ravel()])
    out = eval_rhs_flat(spec, y)
    return Derivative(
        out[:n].copy(),
        out[n:n + n * n].reshape(n, n).copy(),
        out[n + n * n:].reshape(n, n, n).copy(),
    )


def closure_gate(a1, a2, i: int, j: int, delta: float, zeta: float,
                 scan_all_slices: bool = False) -> float:
    """Smoothed indicator that edge (i, j) is weak while a parent triad is strong."""
    if i == j:
        raise ValueError("closure_gate needs two distinct nodes")
    a1 = np.asarray(a1, dtype=np.float64)
    a2 = np.asarray(a2, dtype=np.float64)
    if scan_all_slices:
        n = a1.shape[0]
        entries = {
            p for m in range(n)
            for p in ((i, j, m), (i, m, j), (j, i, m), (j, m, i), (m, i, j), (m, j, i))
        }
        triads = [abs(a2[p]) for p in sorted(entries)]
    else:
        triads = np.abs(a2[i, j, :]).tolist()
    weak = smooth_heaviside(delta - smooth_min(abs(a1[i, j]), abs(a1[j, i]), zeta), zeta)
    strong = smooth_heaviside(smooth_max(triads, zeta) - delta, zeta)
    return weak * strong


def beta_lower_bound(alpha: float, delta: float, zeta: float) -> float:
    """Reinforcement strength above which edges on the closure boundary grow."""
    if not (alpha > 0 and delta > 0 and zeta > 0):
        raise ValueError("alpha, delta and zeta must be positive")
    return 4.0 * alpha * (delta + 1.0) / (delta * math.tanh(delta / zeta))


def hitting_rate(params: ClosureParams | ConsensusParams) -> float:
    """Uniform growth speed of a violating edge under an active parent triad."""
    p = params
    return -p.alpha * (p.delta + 1.0) + p.beta * p.delta * math.tanh(p.delta / p.zeta) / 4.0


def make_spec(kind, params: dict, omega: Sequence[float], **options) -> ModelSpec:
    kind = ModelKind(kind)
    cls = PARAM_TYPES[kind]
    names = {f.name for f in fields(cls)}
    unknown = set(params) - names
    if unknown:
        raise ConfigError(f"unknown parameter(s) {sorted(unknown)}", ("params",))
    missing = names - set(params)
    if missing:
        raise ConfigError(f"missing parameter(s) {sorted(missing)}", ("params",))
    try:
        record = cls(**{k: float(v) for k, v in params.items()})
    except ConfigError as exc:
        raise ConfigError(exc.bare_message, ("params",) + exc.path) from None
    return ModelSpec(kind, record, omega, **options)
