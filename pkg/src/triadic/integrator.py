"""Fixed-step classical RK4 over the packed (x, a1, a2) state."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import NonFiniteError, ShapeMismatchError
from .models import ModelSpec, SystemState, _locate


@dataclass(frozen=True)
class IntegrationPlan:
    t0: float
    t1: float
    dt: float = 0.01
    sample_count: int = 2

    def __post_init__(self):
        if not (math.isfinite(self.t0) and math.isfinite(self.t1) and self.t1 > self.t0):
            raise ValueError(f"need t1 > t0, got t0={self.t0}, t1={self.t1}")
        if not (self.dt > 0 and self.dt <= self.t1 - self.t0):
            raise ValueError(f"need 0 < dt <= t1 - t0, got dt={self.dt}")
        if int(self.sample_count) != self.sample_count or self.sample_count < 2:
            raise ValueError(f"sample_count must be an integer >= 2, got {self.sample_count}")
        object.__setattr__(self, "sample_count", int(self.sample_count))

    def sample_times(self) -> np.ndarray:
        span = self.t1 - self.t0
        last = self.sample_count - 1
        return np.array([self.t0 + span * s / last for s in range(self.sample_count)])


def pack_state(state: SystemState) -> np.ndarray:
    return np.concatenate([state.x, state.a1.ravel(), state.a2.ravel()])


def unpack_state(vector, n: int, t: float = 0.0) -> SystemState:
    vector = np.asarray(vector, dtype=np.float64)
    expected = n + n * n + n * n * n
    if vector.ndim != 1 or vector.shape[0] != expected:
        raise ShapeMismatchError(
            f"packed state for n={n} needs length {expected}, got {vector.shape}",
            vector.shape, (expected,),
        )
    return SystemState(
        t,
        vector[:n],
        vector[n:n + n * n].reshape(n, n),
        vector[n + n * n:].reshape(n, n, n),
    )


class Trajectory:
    """Sampled solution: ``times[s]`` and packed ``states[s]``."""

    def __init__(self, spec: ModelSpec, times, states, dt: float | None = None):
        self.spec = spec
        self.n = spec.n
        self.times = np.asarray(times, dtype=np.float64)
        self.states = np.asarray(states, dtype=np.float64)
        self.dt = dt
        if self.states.ndim != 2 or self.states.shape[0] != self.times.shape[0]:
            raise ShapeMismatchError("times / states length mismatch", self.times.shape, self.states.shape)
        if self.times.size and np.any(np.diff(self.times) <= 0):
            raise ValueError("trajectory times must be strictly increasing")
        if not np.isfinite(self.states).all():
            raise NonFiniteError("trajectory contains non-finite samples")

    def __len__(self) -> int:
        return self.times.shape[0]

    def __getitem__(self, s: int) -> SystemState:
        return unpack_state(self.states[s], self.n, float(self.times[s]))

    def __iter__(self):
        return (self[s] for s in range(len(self)))

    @property
    def samples(self) -> list[SystemState]:
        return list(self)

    def a1(self, s: int) -> np.ndarray:
        n = self.n
        return self.states[s, n:n + n * n].reshape(n, n)

    def a2(self, s: int) -> np.ndarray:
        n = self.n
        return self.states[s, n + n * n:].reshape(n, n, n)

    def x(self, s: int) -> np.ndarray:
        return self.states[s, :self.n]


def integrate(spec: ModelSpec, initial: SystemState, plan: IntegrationPlan) -> Trajectory:
    """Integrate from ``plan.t0`` to ``plan.t1`` storing ``plan.sample_count`` states.

    Each sample interval is covered by whole steps of ``plan.dt`` followed by
    one shortened step when ``dt`` does not divide the interval.
    """
    n = spec.n
    if initial.n != n:
        raise ShapeMismatchError(f"model has n={n} but initial state has n={initial.n}", (n,), (initial.n,))
    times = plan.sample_times()
    y = pack_state(initial)
    states = np.empty((times.shape[0], y.shape[0]))
    states[0] = y
    kind, omega, params, flags = spec.kind.code, spec.omega, spec.param_array, spec.flags
    dt = plan.dt
    for s in range(1, times.shape[0]):
        interval = times[s] - times[s - 1]
        whole = int(interval / dt + 1e-9)
        rest = interval - whole * dt
        chunks = [(dt, whole)]
        if rest > 1e-9 * dt:
            chunks.append((rest, 1))
        t_start = times[s - 1]
        for h, count in chunks:
            done = backend.rk4_steps(kind, y, omega, params, flags, n, h, count)
            if done < count:
                t_fail = t_start + (done + 1) * h
                q = int(np.argmax(np.abs(y)))
                where = _locate(q, n)
                raise NonFiniteError(
                    f"integration blew up near t={t_fail:.6g}; largest entry {where} = {y[q]:.6g}",
                    where=where, time=t_fail, max_abs=float(abs(y[q])),
                )
            t_start += count * h
        states[s] = y
    return Trajectory(spec, times, states, dt=dt)
