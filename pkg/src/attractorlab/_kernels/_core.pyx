# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: same contracts as ``_ref`` (see its docstring)."""

import numpy as np

cimport numpy as cnp
from libc.math cimport isfinite

cnp.import_array()

IMPL = "cython"

cdef double BLOWUP_L2SQ = 1e16


cdef inline void _norms(double[::1] u, double h, double* l2out, double* vout) noexcept:
    cdef Py_ssize_t i, n = u.shape[0]
    cdef double s2 = 0.0, sv = u[0] * u[0] + u[n - 1] * u[n - 1], d
    for i in range(n):
        s2 += u[i] * u[i]
    for i in range(n - 1):
        d = u[i + 1] - u[i]
        sv += d * d
    l2out[0] = h * s2
    vout[0] = sv / h


def chafee_march(u0, double dt, double h, double lam, b_vals, snap_steps):
    cdef double[::1] u = np.array(u0, dtype=np.float64)
    cdef double[::1] b = np.ascontiguousarray(b_vals, dtype=np.float64)
    cdef cnp.int64_t[::1] snp = np.ascontiguousarray(snap_steps, dtype=np.int64)
    cdef Py_ssize_t n = u.shape[0], nsteps = b.shape[0], k = snp.shape[0]

    snaps_arr = np.zeros((k, n))
    l2_arr = np.zeros(nsteps + 1)
    v_arr = np.zeros(nsteps + 1)
    cdef double[:, ::1] snaps = snaps_arr
    cdef double[::1] l2sq = l2_arr
    cdef double[::1] vsq = v_arr

    cdef double diag = 1.0 + dt * (2.0 / (h * h) - lam)
    cdef double off = -dt / (h * h)
    cdef double[::1] cp = np.zeros(n)
    cdef double[::1] dn = np.zeros(n)
    cdef double[::1] z = np.zeros(n)
    cdef Py_ssize_t i, j, ptr = 0, status = -1
    cdef double bn, ui, s

    dn[0] = diag
    cp[0] = off / dn[0]
    for i in range(1, n):
        dn[i] = diag - off * cp[i - 1]
        cp[i] = off / dn[i]

    _norms(u, h, &l2sq[0], &vsq[0])
    while ptr < k and snp[ptr] == 0:
        snaps[ptr, :] = u
        ptr += 1
    for j in range(nsteps):
        bn = dt * b[j]
        # rhs into z via forward elimination
        ui = u[0] - bn * u[0] * u[0] * u[0]
        z[0] = ui / dn[0]
        for i in range(1, n):
            ui = u[i] - bn * u[i] * u[i] * u[i]
            z[i] = (ui - off * z[i - 1]) / dn[i]
        u[n - 1] = z[n - 1]
        for i in range(n - 2, -1, -1):
            u[i] = z[i] - cp[i] * u[i + 1]
        _norms(u, h, &l2sq[j + 1], &vsq[j + 1])
        s = l2sq[j + 1]
        if not isfinite(s) or s > BLOWUP_L2SQ:
            status = j + 1
            break
        while ptr < k and snp[ptr] == j + 1:
            snaps[ptr, :] = u
            ptr += 1
    return snaps_arr, l2_arr, v_arr, status


def parabolic_march(u0, double dt, double h, b_vals, omega_vals, snap_steps):
    cdef double[::1] u = np.array(u0, dtype=np.float64)
    cdef double[::1] b = np.ascontiguousarray(b_vals, dtype=np.float64)
    cdef double[::1] om = np.ascontiguousarray(omega_vals, dtype=np.float64)
    cdef cnp.int64_t[::1] snp = np.ascontiguousarray(snap_steps, dtype=np.int64)
    cdef Py_ssize_t n = u.shape[0], nsteps = b.shape[0], k = snp.shape[0]

    snaps_arr = np.zeros((k, n))
    l2_arr = np.zeros(nsteps + 1)
    v_arr = np.zeros(nsteps + 1)
    cdef double[:, ::1] snaps = snaps_arr
    cdef double[::1] l2sq = l2_arr
    cdef double[::1] vsq = v_arr

    cdef double diag0 = 1.0 + dt * 2.0 / (h * h)
    cdef double off = -dt / (h * h)
    cdef double[::1] cp = np.zeros(n)
    cdef double[::1] dn = np.zeros(n)
    cdef double[::1] z = np.zeros(n)
    cdef Py_ssize_t i, j, ptr = 0, status = -1
    cdef double diag, src, s

    _norms(u, h, &l2sq[0], &vsq[0])
    while ptr < k and snp[ptr] == 0:
        snaps[ptr, :] = u
        ptr += 1
    for j in range(nsteps):
        diag = diag0 - dt * om[j]
        src = dt * b[j]
        dn[0] = diag
        cp[0] = off / dn[0]
        for i in range(1, n):
            dn[i] = diag - off * cp[i - 1]
            cp[i] = off / dn[i]
        z[0] = (u[0] + src) / dn[0]
        for i in range(1, n):
            z[i] = (u[i] + src - off * z[i - 1]) / dn[i]
        u[n - 1] = z[n - 1]
        for i in range(n - 2, -1, -1):
            u[i] = z[i] - cp[i] * u[i + 1]
        _norms(u, h, &l2sq[j + 1], &vsq[j + 1])
        s = l2sq[j + 1]
        if not isfinite(s) or s > BLOWUP_L2SQ:
            status = j + 1
            break
        while ptr < k and snp[ptr] == j + 1:
            snaps[ptr, :] = u
            ptr += 1
    return snaps_arr, l2_arr, v_arr, status


def maxmin_sq(A, B):
    cdef double[:, ::1] a = np.ascontiguousarray(np.atleast_2d(A), dtype=np.float64)
    cdef double[:, ::1] bm = np.ascontiguousarray(np.atleast_2d(B), dtype=np.float64)
    cdef Py_ssize_t ma = a.shape[0], mb = bm.shape[0], n = a.shape[1]
    cdef Py_ssize_t i, j, p
    cdef double best = 0.0, dmin, d, diff
    for i in range(ma):
        dmin = -1.0
        for j in range(mb):
            d = 0.0
            for p in range(n):
                diff = a[i, p] - bm[j, p]
                d += diff * diff
                if dmin >= 0.0 and d >= dmin:
                    break
            if dmin < 0.0 or d < dmin:
                dmin = d
                if dmin <= best:
                    # this row cannot raise the max
                    break
        if dmin > best:
            best = dmin
    return best
