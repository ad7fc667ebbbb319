"""Pure numpy implementations of the hot kernels.

Mirrors ``_kernels.pyx`` entry point for entry point; used when the compiled
extension is unavailable or when ``TRIADIC_BACKEND=python``.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

SYMMETRIC_COSINE = 0
ANTISYMMETRIC_SINE = 1
KURAMOTO_CLOSURE = 2
CONSENSUS_VARIANCE = 3

FLAG_FREEZE_DEGENERATE = 1
FLAG_SCAN_ALL_SLICES = 2

UNORIENTED = 0
ORIENTED = 1
SEMISIMPLICIAL = 2

EXP_CLAMP = 700.0


@lru_cache(maxsize=None)
def _levi_civita(n):
    from .tensor import levi_civita_tensor

    eps = levi_civita_tensor(n)
    eps.setflags(write=False)
    return eps


@lru_cache(maxsize=None)
def _pair_masks(n):
    """mask[i, j, f] is True when flat rank-3 index f contains both i and j."""
    idx = np.arange(n)
    a, b, c = (g.ravel() for g in np.meshgrid(idx, idx, idx, indexing="ij"))
    has = (a[None, :] == idx[:, None]) | (b[None, :] == idx[:, None]) | (c[None, :] == idx[:, None])
    mask = has[:, None, :] & has[None, :, :]
    mask.setflags(write=False)
    return mask


@lru_cache(maxsize=None)
def _degenerate3(n):
    i, j, k = np.indices((n, n, n))
    m = (i == j) | (j == k) | (i == k)
    m.setflags(write=False)
    return m


@lru_cache(maxsize=None)
def _triples(n, ordered):
    i, j, k = np.indices((n, n, n))
    if ordered:
        keep = (i != j) & (j != k) & (i != k)
    else:
        keep = (i < j) & (j < k)
    out = (i[keep], j[keep], k[keep])
    for arr in out:
        arr.setflags(write=False)
    return out


def closure_gate_matrix(a1, a2, delta, zeta, scan_all=False):
    """Smoothed closure gate for every ordered pair (i, j), diagonal included."""
    n = a1.shape[0]
    ab = np.abs(a1)
    abt = ab.T
    smin = np.minimum(ab, abt) - zeta * np.log1p(np.exp(-np.abs(ab - abt) / zeta))
    h_edge = 0.5 * (1.0 + np.tanh((delta - smin) / zeta))
    tri = np.abs(a2)
    if scan_all:
        vals = np.where(_pair_masks(n), tri.ravel()[None, None, :], -np.inf)
        top = vals.max(axis=2)
        smax = top + zeta * np.log(np.exp((vals - top[:, :, None]) / zeta).sum(axis=2))
    else:
        top = tri.max(axis=2)
        smax = top + zeta * np.log(np.exp((tri - top[:, :, None]) / zeta).sum(axis=2))
    h_tri = 0.5 * (1.0 + np.tanh((smax - delta) / zeta))
    return h_edge * h_tri


def rhs_into(kind, y, omega, params, flags, n, out):
    x = y[:n]
    a1 = y[n:n + n * n].reshape(n, n)
    a2 = y[n + n * n:].reshape(n, n, n)
    dx = out[:n]
    da1 = out[n:n + n * n].reshape(n, n)
    da2 = out[n + n * n:].reshape(n, n, n)
    xi = x[:, None]
    xj = x[None, :]
    diff = xi - xj
    xi3 = x[:, None, None]
    xj3 = x[None, :, None]
    xk3 = x[None, None, :]

    if kind == SYMMETRIC_COSINE or kind == ANTISYMMETRIC_SINE:
        d1, d2 = params[0], params[1]
        dx[:] = (
            omega
            + (a1 * np.sin(diff)).sum(axis=1) / n
            + (a2 * np.sin(2.0 * xi3 - xj3 - xk3)).sum(axis=(1, 2)) / (n * n)
        )
        s = xi3 + xj3 + xk3
        if kind == SYMMETRIC_COSINE:
            da1[:] = -d1 * (a1 + np.cos(diff))
            da2[:] = -d2 * (a2 + np.cos(s))
        else:
            da1[:] = -d1 * (a1 + np.sin(diff))
            da2[:] = -d2 * (a2 + _levi_civita(n) * np.sin(s))
    elif kind == KURAMOTO_CLOSURE:
        alpha, beta, gamma, delta, zeta = params[:5]
        dx[:] = (
            omega
            + (a1 * np.sin(xj - xi)).sum(axis=1) / n
            + (a2 * np.sin(xj3 + xk3 - 2.0 * xi3)).sum(axis=(1, 2)) / (n * n)
        )
        gate = closure_gate_matrix(a1, a2, delta, zeta, bool(flags & FLAG_SCAN_ALL_SLICES))
        ssign = np.tanh((a1 + a1.T) / (2.0 * zeta))
        da1[:] = -alpha * (a1 - np.cos(diff)) + beta * delta * gate * ssign
        da2[:] = -gamma * (a2 - delta * np.cos(xi3 + xj3 + xk3))
    elif kind == CONSENSUS_VARIANCE:
        alpha, beta, gamma, delta, zeta, kappa1, kappa2, lambda1, lambda2 = params[:9]
        dx[:] = (a1 * (xj - xi)).sum(axis=1) / n + (
            a2 * (0.5 * (xj3 + xk3) - xi3)
        ).sum(axis=(1, 2)) / (n * n)
        gate = closure_gate_matrix(a1, a2, delta, zeta, bool(flags & FLAG_SCAN_ALL_SLICES))
        ssign = np.tanh((a1 + a1.T) / (2.0 * zeta))
        edge_target = kappa1 * np.exp(np.clip(-lambda1 * diff * diff, -EXP_CLAMP, EXP_CLAMP))
        da1[:] = -alpha * (a1 - edge_target) + beta * delta * gate * ssign
        var = ((xi3 - xj3) ** 2 + (xi3 - xk3) ** 2 + (xj3 - xk3) ** 2) / 3.0
        tri_target = kappa2 * np.exp(np.clip(-lambda2 * var, -EXP_CLAMP, EXP_CLAMP))
        da2[:] = -gamma * (a2 - tri_target)
    else:
        raise ValueError(f"unknown model kind code {kind}")

    if flags & FLAG_FREEZE_DEGENERATE:
        np.fill_diagonal(da1, 0.0)
        da2[_degenerate3(n)] = 0.0
    return out


def rk4_steps(kind, y, omega, params, flags, n, h, nsteps):
    """Advance ``y`` in place by ``nsteps`` classical RK4 steps of size ``h``.

    Returns the number of steps completed.  If a step would produce a
    non-finite value, ``y`` is left at the last finite state and the count
    of completed steps is returned early.
    """
    k1 = np.empty_like(y)
    k2 = np.empty_like(y)
    k3 = np.empty_like(y)
    k4 = np.empty_like(y)
    for step in range(nsteps):
        rhs_into(kind, y, omega, params, flags, n, k1)
        rhs_into(kind, y + 0.5 * h * k1, omega, params, flags, n, k2)
        rhs_into(kind, y + 0.5 * h * k2, omega, params, flags, n, k3)
        rhs_into(kind, y + h * k3, omega, params, flags, n, k4)
        nxt = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.isfinite(nxt).all():
            return step
        y[:] = nxt
    return nsteps


def count_violations(a1, a2, delta, flavor):
    n = a1.shape[0]
    i, j, k = _triples(n, flavor == SEMISIMPLICIAL)
    tri = a2[i, j, k]
    strong = np.abs(tri) >= delta
    if flavor == ORIENTED:
        sigma = np.sign(tri)
        weakest = np.minimum(np.minimum(sigma * a1[i, j], sigma * a1[i, k]), sigma * a1[j, k])
    else:
        weakest = np.minimum(np.minimum(np.abs(a1[i, j]), np.abs(a1[i, k])), np.abs(a1[j, k]))
    return int(np.count_nonzero(strong & (weakest < delta)))
