"""Regime classification, closure detection and boundary audits."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from . import backend
from ._pykernels import _triples
from .integrator import Trajectory
from .models import ModelSpec, SystemState, eval_rhs
from .tensor import S3, S3_SIGNS, alt3, sym3
from .tolerances import DEFAULT_TOLERANCES


class Regime(str, Enum):
    SYMMETRIC = "Symmetric"
    ANTISYMMETRIC = "Antisymmetric"
    MIXED = "Mixed"


class Flavor(str, Enum):
    UNORIENTED = "unoriented"
    ORIENTED = "oriented"
    SEMISIMPLICIAL = "semisimplicial"

    @property
    def code(self) -> int:
        return {
            Flavor.UNORIENTED: backend.UNORIENTED,
            Flavor.ORIENTED: backend.ORIENTED,
            Flavor.SEMISIMPLICIAL: backend.SEMISIMPLICIAL,
        }[self]


COMPONENTS = ("a1_sym", "a1_alt", "a2_sym", "a2_alt", "a2_mix")


# --------------------------------------------------------------------------
# norm series and regimes


@dataclass
class NormSeries:
    times: np.ndarray
    a1_sym: np.ndarray
    a1_alt: np.ndarray
    a2_sym: np.ndarray
    a2_alt: np.ndarray
    a2_mix: np.ndarray

    @property
    def a1_total(self) -> np.ndarray:
        return np.sqrt(self.a1_sym ** 2 + self.a1_alt ** 2)

    @property
    def a2_total(self) -> np.ndarray:
        return np.sqrt(self.a2_sym ** 2 + self.a2_alt ** 2 + self.a2_mix ** 2)

    def __len__(self) -> int:
        return self.times.shape[0]


def _batch_split3(a2: np.ndarray):
    """Isotypic split of a stack of rank-3 tensors, shape (S, n, n, n)."""
    sym = np.zeros_like(a2)
    alt = np.zeros_like(a2)
    for p, sign in zip(S3, S3_SIGNS):
        t = a2.transpose(0, *(q + 1 for q in p))
        sym += t
        alt += sign * t
    sym /= 6.0
    alt /= 6.0
    return sym, alt, a2 - sym - alt


def norm_series(traj: Trajectory) -> NormSeries:
    if len(traj) == 0:
        raise ValueError("empty trajectory")
    n = traj.n
    a1 = traj.states[:, n:n + n * n].reshape(-1, n, n)
    a2 = traj.states[:, n + n * n:].reshape(-1, n, n, n)
    a1t = a1.transpose(0, 2, 1)
    sym, alt, mix = _batch_split3(a2)

    def norms(t):
        flat = t.reshape(t.shape[0], -1)
        return np.sqrt(np.einsum("sq,sq->s", flat, flat))

    return NormSeries(
        traj.times.copy(),
        norms(0.5 * (a1 + a1t)),
        norms(0.5 * (a1 - a1t)),
        norms(sym),
        norms(alt),
        norms(mix),
    )


@dataclass
class RegimeVerdict:
    regime: Regime
    tail_ratios: dict
    epsilon_rel: float
    window: tuple
    degenerate: bool = False

    def to_dict(self) -> dict:
        return {
            "regime": self.regime.value,
            "tail_ratios": dict(self.tail_ratios),
            "epsilon_rel": self.epsilon_rel,
            "window": list(self.window),
            "degenerate": self.degenerate,
            # finite-horizon stand-in for the t -> infinity definition
            "criterion": "trailing-window mean component norm / mean total norm < epsilon_rel",
        }


def classify_regime(series: NormSeries, epsilon_rel: float = DEFAULT_TOLERANCES.epsilon_rel,
                    window_fraction: float = DEFAULT_TOLERANCES.window_fraction) -> RegimeVerdict:
    if len(series) == 0:
        raise ValueError("empty norm series")
    if not 0 < epsilon_rel < 1:
        raise ValueError(f"epsilon_rel must lie in (0, 1), got {epsilon_rel}")
    if not 0 < window_fraction <= 1:
        raise ValueError(f"window_fraction must lie in (0, 1], got {window_fraction}")
    t = series.times
    span = t[-1] - t[0]
    if not span > 0:
        raise ValueError("norm series must span a positive time")
    start = t[-1] - window_fraction * span
    tail = t >= start - 1e-12 * span
    totals = {"a1": series.a1_total[tail].mean(), "a2": series.a2_total[tail].mean()}
    ratios = {}
    for name in COMPONENTS:
        total = totals[name[:2]]
        value = getattr(series, name)[tail].mean()
        ratios[name] = float(value / total) if total > 0 else 0.0
    symmetric = all(ratios[c] < epsilon_rel for c in ("a1_alt", "a2_alt", "a2_mix"))
    antisymmetric = all(ratios[c] < epsilon_rel for c in ("a1_sym", "a2_sym", "a2_mix"))
    degenerate = symmetric and antisymmetric
    if symmetric:
        regime = Regime.SYMMETRIC
    elif antisymmetric:
        regime = Regime.ANTISYMMETRIC
    else:
        regime = Regime.MIXED
    return RegimeVerdict(regime, ratios, epsilon_rel, (float(t[tail][0]), float(t[-1])), degenerate)


def log_slope(times, values, t_lo: float, t_hi: float) -> float:
    """Least-squares slope of log(values) against time over [t_lo, t_hi]."""
    times = np.asarray(times)
    keep = (times >= t_lo) & (times <= t_hi)
    slope, _ = np.polyfit(times[keep], np.log(np.asarray(values)[keep]), 1)
    return float(slope)


def order_parameter(phases) -> tuple[float, float]:
    """Kuramoto order parameter (r, psi) with psi in (-pi, pi]."""
    phases = np.asarray(phases, dtype=np.float64)
    if phases.size == 0:
        raise ValueError("order_parameter needs at least one phase")
    z = np.exp(1j * phases).mean()
    r = min(abs(z), 1.0)
    psi = cmath.phase(z)
    if psi <= -math.pi:
        psi = math.pi
    return float(r), float(psi)


# --------------------------------------------------------------------------
# closure detection


@dataclass(frozen=True)
class Violation:
    triple: tuple
    weak_edges: tuple
    condition: str


@dataclass
class ClosureReport:
    flavor: Flavor
    delta: float
    violations: list = field(default_factory=list)

    @property
    def in_region(self) -> bool:
        return not self.violations

    @property
    def triples(self) -> list:
        return [v.triple for v in self.violations]

    def to_dict(self) -> dict:
        return {
            "flavor": self.flavor.value,
            "delta": self.delta,
            "in_region": self.in_region,
            "violations": [
                {"triple": list(v.triple), "weak_edges": [list(e) for e in v.weak_edges],
                 "condition": v.condition}
                for v in self.violations
            ],
        }


def _check(a1, a2, delta, flavor: Flavor) -> ClosureReport:
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    a1 = np.asarray(a1, dtype=np.float64)
    a2 = np.asarray(a2, dtype=np.float64)
    n = a1.shape[0]
    i, j, k = _triples(n, flavor is Flavor.SEMISIMPLICIAL)
    tri = a2[i, j, k]
    if flavor is Flavor.ORIENTED:
        sigma = np.sign(tri)
        edges = np.stack([sigma * a1[i, j], sigma * a1[i, k], sigma * a1[j, k]], axis=1)
        condition = "oriented edge coordinate below delta"
    else:
        edges = np.abs(np.stack([a1[i, j], a1[i, k], a1[j, k]], axis=1))
        condition = "edge magnitude below delta"
    bad = (np.abs(tri) >= delta) & (edges.min(axis=1) < delta)
    report = ClosureReport(flavor, float(delta))
    for q in np.flatnonzero(bad):
        t = (int(i[q]), int(j[q]), int(k[q]))
        pairs = ((t[0], t[1]), (t[0], t[2]), (t[1], t[2]))
        weak = tuple(p for p, e in zip(pairs, edges[q]) if e < delta)
        report.violations.append(Violation(t, weak, condition))
    return report


def check_closure_unoriented(a1, a2, delta: float) -> ClosureReport:
    """Downward closure over unordered triples i<j<k (tensors assumed symmetric)."""
    return _check(a1, a2, delta, Flavor.UNORIENTED)


def check_closure_oriented(a1, a2, delta: float) -> ClosureReport:
    """Oriented closure: edge weights signed by the triad's sign must reach delta."""
    return _check(a1, a2, delta, Flavor.ORIENTED)


def check_closure_semisimplicial(a1, a2, delta: float) -> ClosureReport:
    """Closure over all ordered triples of distinct nodes, no symmetry assumed."""
    return _check(a1, a2, delta, Flavor.SEMISIMPLICIAL)


CHECKS = {
    Flavor.UNORIENTED: check_closure_unoriented,
    Flavor.ORIENTED: check_closure_oriented,
    Flavor.SEMISIMPLICIAL: check_closure_semisimplicial,
}


def project_for_flavor(a1, a2, flavor: Flavor):
    """Representative tensors for a flavor: symmetric part, alternating part, or as-is."""
    flavor = Flavor(flavor)
    a1 = np.asarray(a1, dtype=np.float64)
    a2 = np.asarray(a2, dtype=np.float64)
    if flavor is Flavor.UNORIENTED:
        return 0.5 * (a1 + a1.T), sym3(a2)
    if flavor is Flavor.ORIENTED:
        return 0.5 * (a1 - a1.T), alt3(a2)
    return a1, a2


def check_closure(a1, a2, delta: float, flavor, symmetrize: bool = False) -> ClosureReport:
    flavor = Flavor(flavor)
    if symmetrize:
        a1, a2 = project_for_flavor(a1, a2, flavor)
    return CHECKS[flavor](a1, a2, delta)


# --------------------------------------------------------------------------
# boundary faces and outward-pointing audits


def _local_coordinates(a1, a2, i, j, k, flavor: Flavor):
    tri = float(a2[i, j, k])
    raw = np.array([a1[i, j], a1[i, k], a1[j, k]], dtype=np.float64)
    if flavor is Flavor.ORIENTED:
        return tri, float(np.sign(tri)) * raw
    return tri, np.abs(raw)


def boundary_faces(a1, a2, i: int, j: int, k: int, delta: float, flavor,
                   tol_face: float | None = None) -> frozenset:
    """Faces X1..X4 of the (i, j, k) bad set's boundary that contain the point.

    Equalities are tested with absolute tolerance ``tol_face * delta``.
    """
    flavor = Flavor(flavor)
    tol = (DEFAULT_TOLERANCES.face if tol_face is None else tol_face) * delta
    tri, e = _local_coordinates(np.asarray(a1), np.asarray(a2), i, j, k, flavor)
    mag = abs(tri)
    faces = set()
    if abs(mag - delta) <= tol and e.min() <= delta + tol:
        faces.add("X1")
    if mag >= delta - tol:
        for m in range(3):
            others = [e[q] for q in range(3) if q != m]
            if abs(e[m] - delta) <= tol and min(others) >= delta - tol:
                faces.add(f"X{m + 2}")
    return frozenset(faces)


def _flavor_triples(n: int, flavor: Flavor):
    i, j, k = _triples(n, flavor is Flavor.SEMISIMPLICIAL)
    return list(zip(i.tolist(), j.tolist(), k.tolist()))


@dataclass(frozen=True)
class FaceCheck:
    triple: tuple
    faces: frozenset
    values: tuple  # (sgn*dA2, then the three edge sign-derivatives)
    passed: bool


@dataclass
class PointAudit:
    index: int
    checks: list

    @property
    def on_boundary(self) -> bool:
        return bool(self.checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


@dataclass
class BoundaryAudit:
    flavor: Flavor
    delta: float
    points: list

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.points if p.on_boundary)

    @property
    def audited(self) -> int:
        return sum(p.on_boundary for p in self.points)

    def failures(self, face: str | None = None) -> list:
        out = []
        for p in self.points:
            for c in p.checks:
                if c.passed:
                    continue
                if face is None or not _face_ok(face, c.values):
                    if face is None or face in c.faces:
                        out.append((p.index, c))
        return out


def _face_ok(face: str, values) -> bool:
    if face == "X1":
        return values[0] <= 0.0
    return values[int(face[1]) - 1] >= 0.0


def audit_outward_pointing(spec: ModelSpec, points: Iterable[SystemState], delta: float,
                           flavor, symmetrize: bool = False,
                           tol_face: float | None = None) -> BoundaryAudit:
    """Evaluate the sign-derivative inequalities on every active boundary face.

    Checking each active face on its own is enough at singular points too: a
    nonnegative combination of passing normals also passes.
    """
    flavor = Flavor(flavor)
    audits = []
    for idx, point in enumerate(points):
        if symmetrize:
            a1, a2 = project_for_flavor(point.a1, point.a2, flavor)
            point = point.replace(a1=a1, a2=a2)
        checks = []
        deriv = None
        for (i, j, k) in _flavor_triples(point.n, flavor):
            faces = boundary_faces(point.a1, point.a2, i, j, k, delta, flavor, tol_face)
            if not faces:
                continue
            if deriv is None:
                deriv = eval_rhs(spec, point)
            tri = point.a2[i, j, k]
            sigma = float(np.sign(tri))
            pairs = ((i, j), (i, k), (j, k))
            if flavor is Flavor.ORIENTED:
                edge_vals = [sigma * deriv.da1[p] for p in pairs]
            else:
                edge_vals = [float(np.sign(point.a1[p])) * deriv.da1[p] for p in pairs]
            values = (sigma * float(deriv.da2[i, j, k]), *(float(v) for v in edge_vals))
            ok = all(_face_ok(f, values) for f in faces)
            checks.append(FaceCheck((i, j, k), faces, values, ok))
        audits.append(PointAudit(idx, checks))
    return BoundaryAudit(flavor, float(delta), audits)


def sample_boundary_point(n: int, delta: float, face: str, rng: np.random.Generator,
                          flavor=Flavor.UNORIENTED, background: float = 0.25,
                          t: float = 0.0) -> SystemState:
    """Random state lying on face ``face`` of one random triple's bad-set boundary.

    Tensors are exactly symmetric (unoriented / semisimplicial) or exactly
    antisymmetric (oriented); entries not on the chosen triple are drawn from
    U(-background, background) with ``background < delta``.
    """
    flavor = Flavor(flavor)
    if not background < delta:
        raise ValueError("background weights must stay below delta")
    x = rng.uniform(0.0, 2 * math.pi, n)
    a1 = rng.uniform(-background, background, (n, n))
    a2 = rng.uniform(-background, background, (n, n, n))
    if flavor is Flavor.ORIENTED:
        a1, a2 = 0.5 * (a1 - a1.T), alt3(a2)
    else:
        a1, a2 = 0.5 * (a1 + a1.T), sym3(a2)
    i, j, k = sorted(rng.choice(n, size=3, replace=False).tolist())
    sign = rng.choice([-1.0, 1.0])
    if face == "X1":
        tri_mag = delta
        mags = rng.uniform(delta, 2 * delta, 3)
        weak = rng.integers(0, 3)
        mags[weak] = rng.uniform(0.0, delta)
    else:
        tri_mag = rng.uniform(delta, 2 * delta)
        mags = rng.uniform(delta, 2 * delta, 3)
        mags[int(face[1]) - 2] = delta
    # edge signs: oriented faces need edges aligned with the triad
    if flavor is Flavor.ORIENTED:
        edge_signs = np.full(3, sign)
        if face == "X1":
            edge_signs = rng.choice([-1.0, 1.0], 3)
    else:
        edge_signs = rng.choice([-1.0, 1.0], 3)
    for (a, b), m, s in zip(((i, j), (i, k), (j, k)), mags, edge_signs):
        a1[a, b] = s * m
        a1[b, a] = -s * m if flavor is Flavor.ORIENTED else s * m
    for p, ps in zip(S3, S3_SIGNS):
        idx = tuple((i, j, k)[q] for q in p)
        a2[idx] = sign * tri_mag * (ps if flavor is Flavor.ORIENTED else 1.0)
    return SystemState(t, x, a1, a2)


# --------------------------------------------------------------------------
# retention over a trajectory


@dataclass
class RetentionRecord:
    flavor: Flavor
    delta: float
    times: np.ndarray
    violation_counts: np.ndarray
    first_entry_time: float | None
    first_exit_after_entry: float | None

    def to_dict(self) -> dict:
        return {
            "flavor": self.flavor.value,
            "delta": self.delta,
            "first_entry_time": self.first_entry_time,
            "first_exit_after_entry": self.first_exit_after_entry,
            "retained": self.first_entry_time is not None and self.first_exit_after_entry is None,
            "samples": int(self.times.shape[0]),
            "violation_counts": [int(c) for c in self.violation_counts],
        }


def violation_counts(traj: Trajectory, delta: float, flavor, symmetrize: bool = True) -> np.ndarray:
    flavor = Flavor(flavor)
    counts = np.empty(len(traj), dtype=np.int64)
    for s in range(len(traj)):
        a1, a2 = traj.a1(s), traj.a2(s)
        if symmetrize:
            a1, a2 = project_for_flavor(a1, a2, flavor)
        counts[s] = backend.count_violations(
            np.ascontiguousarray(a1), np.ascontiguousarray(a2), float(delta), flavor.code
        )
    return counts


def scan_retention(traj: Trajectory, delta: float, flavor, symmetrize: bool = True) -> RetentionRecord:
    """Per-sample closure check with first entry / first exit bookkeeping.

    With ``symmetrize`` the unoriented (oriented) flavor is checked on the
    symmetric (alternating) projection of each sample.
    """
    if len(traj) == 0:
        raise ValueError("empty trajectory")
    flavor = Flavor(flavor)
    counts = violation_counts(traj, delta, flavor, symmetrize)
    entry = exit_ = None
    clean = np.flatnonzero(counts == 0)
    if clean.size:
        first = int(clean[0])
        entry = float(traj.times[first])
        later = np.flatnonzero(counts[first:] > 0)
        if later.size:
            exit_ = float(traj.times[first + int(later[0])])
    return RetentionRecord(flavor, float(delta), traj.times.copy(), counts, entry, exit_)
