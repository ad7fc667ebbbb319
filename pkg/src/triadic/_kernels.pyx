# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: model right-hand sides, RK4 stepping, closure counts.

Entry points and argument conventions match ``_pykernels``.  State vectors
use the packed layout [x | a1 row-major | a2 row-major].
"""
import numpy as np

from libc.math cimport sin, cos, tanh, exp, log, log1p, fabs, isfinite, INFINITY
from libc.stdlib cimport malloc, free

DEF SYMMETRIC_COSINE = 0
DEF ANTISYMMETRIC_SINE = 1
DEF KURAMOTO_CLOSURE = 2
DEF CONSENSUS_VARIANCE = 3
DEF FLAG_FREEZE_DEGENERATE = 1
DEF FLAG_SCAN_ALL_SLICES = 2
DEF UNORIENTED = 0
DEF ORIENTED = 1
DEF SEMISIMPLICIAL = 2
DEF EXP_CLAMP = 700.0


cdef inline double _clamped_exp(double z) nogil:
    if z > EXP_CLAMP:
        z = EXP_CLAMP
    elif z < -EXP_CLAMP:
        z = -EXP_CLAMP
    return exp(z)


cdef inline int _levi(Py_ssize_t i, Py_ssize_t j, Py_ssize_t k) nogil:
    if i == j or j == k or i == k:
        return 0
    cdef int inv = (i > j) + (i > k) + (j > k)
    return -1 if inv % 2 else 1


cdef double _slice_smax(const double *a2, Py_ssize_t n, Py_ssize_t i, Py_ssize_t j,
                        double zeta, bint scan_all) nogil:
    """Log-sum-exp max of |a2| over the entries feeding the (i, j) gate."""
    cdef Py_ssize_t m, a, b, c, p, cnt
    cdef Py_ssize_t n2 = n * n
    cdef double top = -INFINITY
    cdef double acc = 0.0
    cdef double v
    cdef Py_ssize_t idx[6]
    if not scan_all:
        for m in range(n):
            v = fabs(a2[i * n2 + j * n + m])
            if v > top:
                top = v
        for m in range(n):
            acc += exp((fabs(a2[i * n2 + j * n + m]) - top) / zeta)
        return top + zeta * log(acc)
    if i == j:
        # every triple containing i
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if a == i or b == i or c == i:
                        v = fabs(a2[a * n2 + b * n + c])
                        if v > top:
                            top = v
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if a == i or b == i or c == i:
                        acc += exp((fabs(a2[a * n2 + b * n + c]) - top) / zeta)
        return top + zeta * log(acc)
    # i != j: distinct arrangements of (i, j, m)
    for p in range(2):
        for m in range(n):
            if m != i and m != j:
                idx[0] = i * n2 + j * n + m
                idx[1] = i * n2 + m * n + j
                idx[2] = j * n2 + i * n + m
                idx[3] = j * n2 + m * n + i
                idx[4] = m * n2 + i * n + j
                idx[5] = m * n2 + j * n + i
                cnt = 6
            elif m == i:
                idx[0] = i * n2 + i * n + j
                idx[1] = i * n2 + j * n + i
                idx[2] = j * n2 + i * n + i
                cnt = 3
            else:
                idx[0] = i * n2 + j * n + j
                idx[1] = j * n2 + i * n + j
                idx[2] = j * n2 + j * n + i
                cnt = 3
            for a in range(cnt):
                v = fabs(a2[idx[a]])
                if p == 0:
                    if v > top:
                        top = v
                else:
                    acc += exp((v - top) / zeta)
    return top + zeta * log(acc)


cdef inline double _gate(const double *a1, const double *a2, Py_ssize_t n, Py_ssize_t i,
                         Py_ssize_t j, double delta, double zeta, bint scan_all) nogil:
    cdef double u = fabs(a1[i * n + j])
    cdef double w = fabs(a1[j * n + i])
    cdef double lo = u if u < w else w
    cdef double smin = lo - zeta * log1p(exp(-fabs(u - w) / zeta))
    cdef double h_edge = 0.5 * (1.0 + tanh((delta - smin) / zeta))
    cdef double smax = _slice_smax(a2, n, i, j, zeta, scan_all)
    cdef double h_tri = 0.5 * (1.0 + tanh((smax - delta) / zeta))
    return h_edge * h_tri


cdef void _rhs(int kind, const double *y, const double *omega, const double *par, int flags,
               Py_ssize_t n, double *out) nogil:
    cdef Py_ssize_t i, j, k
    cdef Py_ssize_t n2 = n * n
    cdef const double *x = y
    cdef const double *a1 = y + n
    cdef const double *a2 = y + n + n2
    cdef double *dx = out
    cdef double *da1 = out + n
    cdef double *da2 = out + n + n2
    cdef double s1, s2, d, s, g, ss
    cdef double inv_n = 1.0 / n
    cdef double inv_n2 = 1.0 / (n * n)
    cdef bint scan_all = (flags & FLAG_SCAN_ALL_SLICES) != 0
    cdef double alpha, beta, gamma, delta, zeta, kappa1, kappa2, lambda1, lambda2

    if kind == SYMMETRIC_COSINE or kind == ANTISYMMETRIC_SINE:
        for i in range(n):
            s1 = 0.0
            for j in range(n):
                s1 += a1[i * n + j] * sin(x[i] - x[j])
            s2 = 0.0
            for j in range(n):
                for k in range(n):
                    s2 += a2[i * n2 + j * n + k] * sin(2.0 * x[i] - x[j] - x[k])
            dx[i] = omega[i] + s1 * inv_n + s2 * inv_n2
            for j in range(n):
                d = x[i] - x[j]
                if kind == SYMMETRIC_COSINE:
                    da1[i * n + j] = -par[0] * (a1[i * n + j] + cos(d))
                else:
                    da1[i * n + j] = -par[0] * (a1[i * n + j] + sin(d))
                for k in range(n):
                    s = x[i] + x[j] + x[k]
                    if kind == SYMMETRIC_COSINE:
                        da2[i * n2 + j * n + k] = -par[1] * (a2[i * n2 + j * n + k] + cos(s))
                    else:
                        da2[i * n2 + j * n + k] = -par[1] * (
                            a2[i * n2 + j * n + k] + _levi(i, j, k) * sin(s))
    elif kind == KURAMOTO_CLOSURE:
        alpha = par[0]; beta = par[1]; gamma = par[2]; delta = par[3]; zeta = par[4]
        for i in range(n):
            s1 = 0.0
            for j in range(n):
                s1 += a1[i * n + j] * sin(x[j] - x[i])
            s2 = 0.0
            for j in range(n):
                for k in range(n):
                    s2 += a2[i * n2 + j * n + k] * sin(x[j] + x[k] - 2.0 * x[i])
            dx[i] = omega[i] + s1 * inv_n + s2 * inv_n2
        for i in range(n):
            for j in range(n):
                g = _gate(a1, a2, n, i, j, delta, zeta, scan_all)
                ss = tanh((a1[i * n + j] + a1[j * n + i]) / (2.0 * zeta))
                da1[i * n + j] = (-alpha * (a1[i * n + j] - cos(x[i] - x[j]))
                                  + beta * delta * g * ss)
                for k in range(n):
                    da2[i * n2 + j * n + k] = -gamma * (
                        a2[i * n2 + j * n + k] - delta * cos(x[i] + x[j] + x[k]))
    elif kind == CONSENSUS_VARIANCE:
        alpha = par[0]; beta = par[1]; gamma = par[2]; delta = par[3]; zeta = par[4]
        kappa1 = par[5]; kappa2 = par[6]; lambda1 = par[7]; lambda2 = par[8]
        for i in range(n):
            s1 = 0.0
            for j in range(n):
                s1 += a1[i * n + j] * (x[j] - x[i])
            s2 = 0.0
            for j in range(n):
                for k in range(n):
                    s2 += a2[i * n2 + j * n + k] * (0.5 * (x[j] + x[k]) - x[i])
            dx[i] = s1 * inv_n + s2 * inv_n2
        for i in range(n):
            for j in range(n):
                g = _gate(a1, a2, n, i, j, delta, zeta, scan_all)
                ss = tanh((a1[i * n + j] + a1[j * n + i]) / (2.0 * zeta))
                d = x[i] - x[j]
                da1[i * n + j] = (-alpha * (a1[i * n + j] - kappa1 * _clamped_exp(-lambda1 * d * d))
                                  + beta * delta * g * ss)
                for k in range(n):
                    s = ((x[i] - x[j]) * (x[i] - x[j]) + (x[i] - x[k]) * (x[i] - x[k])
                         + (x[j] - x[k]) * (x[j] - x[k])) / 3.0
                    da2[i * n2 + j * n + k] = -gamma * (
                        a2[i * n2 + j * n + k] - kappa2 * _clamped_exp(-lambda2 * s))

    if flags & FLAG_FREEZE_DEGENERATE:
        for i in range(n):
            da1[i * n + i] = 0.0
            for j in range(n):
                for k in range(n):
                    if i == j or j == k or i == k:
                        da2[i * n2 + j * n + k] = 0.0


def _check_kind(int kind):
    if kind < 0 or kind > 3:
        raise ValueError(f"unknown model kind code {kind}")


def rhs_into(int kind, const double[::1] y, const double[::1] omega, const double[::1] params, int flags,
             Py_ssize_t n, double[::1] out):
    _check_kind(kind)
    if y.shape[0] != n + n * n + n * n * n or out.shape[0] != y.shape[0]:
        raise ValueError("state / output length does not match n")
    with nogil:
        _rhs(kind, &y[0], &omega[0], &params[0], flags, n, &out[0])
    return np.asarray(out)


def rk4_steps(int kind, double[::1] y, const double[::1] omega, const double[::1] params, int flags,
              Py_ssize_t n, double h, Py_ssize_t nsteps):
    _check_kind(kind)
    cdef Py_ssize_t dim = y.shape[0]
    if dim != n + n * n + n * n * n:
        raise ValueError("state length does not match n")
    cdef double *buf = <double *> malloc(6 * dim * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    cdef double *k1 = buf
    cdef double *k2 = buf + dim
    cdef double *k3 = buf + 2 * dim
    cdef double *k4 = buf + 3 * dim
    cdef double *tmp = buf + 4 * dim
    cdef double *nxt = buf + 5 * dim
    cdef double *yp = &y[0]
    cdef const double *om = &omega[0]
    cdef const double *par = &params[0]
    cdef Py_ssize_t step, q
    cdef Py_ssize_t done = nsteps
    cdef bint bad
    try:
        with nogil:
            for step in range(nsteps):
                _rhs(kind, yp, om, par, flags, n, k1)
                for q in range(dim):
                    tmp[q] = yp[q] + 0.5 * h * k1[q]
                _rhs(kind, tmp, om, par, flags, n, k2)
                for q in range(dim):
                    tmp[q] = yp[q] + 0.5 * h * k2[q]
                _rhs(kind, tmp, om, par, flags, n, k3)
                for q in range(dim):
                    tmp[q] = yp[q] + h * k3[q]
                _rhs(kind, tmp, om, par, flags, n, k4)
                bad = False
                for q in range(dim):
                    nxt[q] = yp[q] + (h / 6.0) * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q])
                    if not isfinite(nxt[q]):
                        bad = True
                if bad:
                    done = step
                    break
                for q in range(dim):
                    yp[q] = nxt[q]
    finally:
        free(buf)
    return done


def count_violations(const double[:, ::1] a1, const double[:, :, ::1] a2, double delta, int flavor):
    cdef Py_ssize_t n = a1.shape[0]
    cdef Py_ssize_t i, j, k
    cdef Py_ssize_t total = 0
    cdef double t, sigma, e1, e2, e3, lo
    with nogil:
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if flavor == SEMISIMPLICIAL:
                        if i == j or j == k or i == k:
                            continue
                    elif not (i < j and j < k):
                        continue
                    t = a2[i, j, k]
                    if fabs(t) < delta:
                        continue
                    if flavor == ORIENTED:
                        sigma = 1.0 if t > 0 else (-1.0 if t < 0 else 0.0)
                        e1 = sigma * a1[i, j]
                        e2 = sigma * a1[i, k]
                        e3 = sigma * a1[j, k]
                    else:
                        e1 = fabs(a1[i, j])
                        e2 = fabs(a1[i, k])
                        e3 = fabs(a1[j, k])
                    lo = e1
                    if e2 < lo:
                        lo = e2
                    if e3 < lo:
                        lo = e3
                    if lo < delta:
                        total += 1
    return total
