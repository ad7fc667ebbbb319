"""Dense rank-2 / rank-3 coupling tensors and their S2 / S3 isotypic splitting.

Tensors are plain ``numpy.ndarray`` objects of shape ``(n, n)`` and
``(n, n, n)`` with float64 entries.  All indices are 0-based.
"""
from __future__ import annotations

from itertools import permutations
from typing import NamedTuple

import numpy as np

from .errors import NonFiniteError, ShapeMismatchError

# The six permutations of three tensor axes with their signs.
S3 = tuple(permutations(range(3)))


def permutation_sign(perm) -> int:
    """Parity of a permutation given as a sequence of distinct sortable items."""
    perm = list(perm)
    sign = 1
    for a in range(len(perm)):
        for b in range(a + 1, len(perm)):
            if perm[a] > perm[b]:
                sign = -sign
    return sign


S3_SIGNS = tuple(permutation_sign(p) for p in S3)


class IsotypicSplit2(NamedTuple):
    sym: np.ndarray
    alt: np.ndarray


class IsotypicSplit3(NamedTuple):
    sym: np.ndarray
    alt: np.ndarray
    mix: np.ndarray


def _check_finite(a: np.ndarray, name: str) -> None:
    if not np.isfinite(a).all():
        where = tuple(int(i) for i in np.argwhere(~np.isfinite(a))[0])
        raise NonFiniteError(f"{name} has a non-finite entry at {where}", where=(name, *where))


def as_rank2(a, name: str = "a1") -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeMismatchError(f"{name}: expected an (n, n) array, got shape {a.shape}", a.shape)
    _check_finite(a, name)
    return a


def as_rank3(a, name: str = "a2") -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 3 or not (a.shape[0] == a.shape[1] == a.shape[2]):
        raise ShapeMismatchError(f"{name}: expected an (n, n, n) array, got shape {a.shape}", a.shape)
    _check_finite(a, name)
    return a


def frobenius_inner(a, b) -> float:
    """Sum over all index tuples of ``a * b``."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ShapeMismatchError(
            f"frobenius_inner: shape mismatch {a.shape} vs {b.shape}", a.shape, b.shape
        )
    return float(np.dot(a.ravel(), b.ravel()))


def frobenius_norm(a) -> float:
    a = np.asarray(a, dtype=np.float64)
    return float(np.sqrt(np.dot(a.ravel(), a.ravel())))


def split2(a) -> IsotypicSplit2:
    a = as_rank2(a)
    return IsotypicSplit2(0.5 * (a + a.T), 0.5 * (a - a.T))


def sym3(a: np.ndarray) -> np.ndarray:
    out = np.zeros_like(a)
    for p in S3:
        out += a.transpose(p)
    return out / 6.0


def alt3(a: np.ndarray) -> np.ndarray:
    out = np.zeros_like(a)
    for p, s in zip(S3, S3_SIGNS):
        if s > 0:
            out += a.transpose(p)
        else:
            out -= a.transpose(p)
    out /= 6.0
    # entries with a repeated index cancel analytically; drop rounding residue
    out[_degenerate_mask(a.shape[0])] = 0.0
    return out


def _degenerate_mask(n: int) -> np.ndarray:
    i, j, k = np.ogrid[:n, :n, :n]
    return (i == j) | (j == k) | (i == k)


def split3(a) -> IsotypicSplit3:
    """Symmetrizer, signed antisymmetrizer, and the mixed remainder.

    The mixed part is defined as the complement ``a - sym - alt`` so that the
    three pieces reconstruct ``a`` exactly up to rounding.
    """
    a = as_rank3(a)
    s = sym3(a)
    l = alt3(a)
    return IsotypicSplit3(s, l, a - s - l)


def levi_civita(i: int, j: int, k: int) -> int:
    """Generalised Levi-Civita symbol of an index triple (any integers)."""
    if i == j or j == k or i == k:
        return 0
    # number of inversions relative to the ascending reordering
    inversions = (i > j) + (i > k) + (j > k)
    return -1 if inversions % 2 else 1


def levi_civita_tensor(n: int) -> np.ndarray:
    eps = np.zeros((n, n, n))
    idx = np.arange(n)
    i, j, k = np.meshgrid(idx, idx, idx, indexing="ij")
    distinct = (i != j) & (j != k) & (i != k)
    inversions = (i > j).astype(int) + (i > k) + (j > k)
    eps[distinct] = np.where(inversions[distinct] % 2 == 1, -1.0, 1.0)
    return eps


def relabel2(a: np.ndarray, perm) -> np.ndarray:
    """Apply node relabeling ``i -> perm[i]`` to every index of a matrix."""
    perm = np.asarray(perm)
    out = np.empty_like(a)
    out[np.ix_(perm, perm)] = a
    return out


def relabel3(a: np.ndarray, perm) -> np.ndarray:
    perm = np.asarray(perm)
    out = np.empty_like(a)
    out[np.ix_(perm, perm, perm)] = a
    return out
