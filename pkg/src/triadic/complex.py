"""Thresholded tensors as a 2-dimensional Δ-set (face maps only, no degeneracies)."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .analysis import Flavor
from .tensor import as_rank2, as_rank3


@dataclass(frozen=True)
class DeltaSet:
    """Levels X0, X1, X2 of the complex at threshold ``delta``.

    Vertices are 0-based node indices.  With the unoriented flavor only the
    increasing representative of each pair / triple is stored; otherwise every
    ordered tuple of distinct indices that clears the threshold is kept.
    Levels above 2 are empty.
    """

    x0: tuple
    x1: tuple
    x2: tuple
    delta: float
    flavor: Flavor = Flavor.SEMISIMPLICIAL
    weights1: dict = field(default_factory=dict, compare=False, repr=False)
    weights2: dict = field(default_factory=dict, compare=False, repr=False)

    def level(self, n: int) -> tuple:
        if n < 0:
            raise ValueError("levels are indexed from 0")
        return (self.x0, self.x1, self.x2)[n] if n <= 2 else ()

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "flavor": self.flavor.value,
            "x0": list(self.x0),
            "x1": [{"simplex": list(s), "weight": self.weights1[s]} for s in self.x1],
            "x2": [{"simplex": list(s), "weight": self.weights2[s]} for s in self.x2],
        }


def extract(a1, a2, delta: float, flavor=Flavor.SEMISIMPLICIAL) -> DeltaSet:
    """Threshold |A1| and |A2| at ``delta`` into lexicographically ordered levels."""
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    flavor = Flavor(flavor)
    a1 = as_rank2(np.asarray(a1, dtype=np.float64))
    a2 = as_rank3(np.asarray(a2, dtype=np.float64))
    n = a1.shape[0]
    rep = flavor is Flavor.UNORIENTED
    w1, w2 = {}, {}
    for i, j in zip(*np.nonzero(np.abs(a1) >= delta)):
        i, j = int(i), int(j)
        if i == j or (rep and i > j):
            continue
        w1[(i, j)] = float(a1[i, j])
    for i, j, k in zip(*np.nonzero(np.abs(a2) >= delta)):
        i, j, k = int(i), int(j), int(k)
        if i == j or j == k or i == k:
            continue
        if rep and not i < j < k:
            continue
        w2[(i, j, k)] = float(a2[i, j, k])
    return DeltaSet(tuple(range(n)), tuple(sorted(w1)), tuple(sorted(w2)), float(delta), flavor, w1, w2)


def face(simplex, i: int):
    """Face map d_i: drop position ``i``.  Faces of an edge are bare vertices."""
    simplex = tuple(simplex)
    dim = len(simplex) - 1
    if dim not in (1, 2):
        raise ValueError(f"face maps act on edges and triangles, got {simplex}")
    if not 0 <= i <= dim:
        raise IndexError(f"face index {i} out of range for a {dim}-simplex")
    out = simplex[:i] + simplex[i + 1:]
    return out[0] if dim == 1 else out


def faces(simplex) -> tuple:
    return tuple(face(simplex, i) for i in range(len(simplex)))


class ValidationReport(NamedTuple):
    is_semisimplicial: bool
    missing_faces: list  # (triangle, face index, missing edge)
    identity_failures: list  # (triangle, i, j)


def validate(ds: DeltaSet) -> ValidationReport:
    """Every face of every 2-simplex must lie in X1; face identities are rechecked."""
    x1 = set(ds.x1)
    missing = []
    broken = []
    for s in ds.x2:
        for i in range(3):
            e = face(s, i)
            if e not in x1:
                missing.append((s, i, e))
        for i, j in ((0, 1), (0, 2), (1, 2)):
            if face(face(s, j), i) != face(face(s, i), j - 1):
                broken.append((s, i, j))
    return ValidationReport(not missing, missing, broken)
