"""Reference kernels: numpy/scipy implementations of the hot loops.

These define the semantics; the compiled Cython twin in ``_core.pyx`` must
agree with them to near machine precision (asserted in tests). Both expose:

    chafee_march(u0, dt, h, lam, b_vals, snap_steps)
    parabolic_march(u0, dt, h, b_vals, omega_vals, snap_steps)
    maxmin_sq(A, B)

March kernels return ``(snaps, l2sq, vsq, status)`` where ``snaps`` holds the
state after each step index listed in ``snap_steps`` (index 0 = initial
state), ``l2sq[j] = h * sum(u_j**2)`` and ``vsq[j]`` is the squared discrete
V-norm (first differences against phantom boundary zeros, divided by h) after
j steps, and ``status`` is -1 on success or the 1-based step index at which
blow-up (non-finite state or l2sq > 1e16) was detected.
"""

import numpy as np
from scipy.linalg import cho_solve_banded, cholesky_banded, solveh_banded
from scipy.spatial.distance import cdist

IMPL = "numpy"

BLOWUP_L2SQ = 1e16


def _vsq(u, h):
    return (u[0] ** 2 + np.sum(np.diff(u) ** 2) + u[-1] ** 2) / h


def chafee_march(u0, dt, h, lam, b_vals, snap_steps):
    """March (I + dt(A_h - lam I)) u+ = u - dt b_n u^3 (constant matrix)."""
    u = np.asarray(u0, dtype=float).copy()
    n = u.shape[0]
    nsteps = len(b_vals)
    snap_steps = np.asarray(snap_steps, dtype=np.int64)
    snaps = np.zeros((len(snap_steps), n))
    l2sq = np.zeros(nsteps + 1)
    vsq = np.zeros(nsteps + 1)

    diag = 1.0 + dt * (2.0 / h**2 - lam)
    off = -dt / h**2
    ab = np.zeros((2, n))
    ab[0, 1:] = off
    ab[1, :] = diag
    cb = cholesky_banded(ab)

    ptr = 0
    l2sq[0] = h * np.dot(u, u)
    vsq[0] = _vsq(u, h)
    while ptr < len(snap_steps) and snap_steps[ptr] == 0:
        snaps[ptr] = u
        ptr += 1
    for j in range(nsteps):
        rhs = u - dt * b_vals[j] * u**3
        u = cho_solve_banded((cb, False), rhs)
        s = h * np.dot(u, u)
        l2sq[j + 1] = s
        vsq[j + 1] = _vsq(u, h)
        if not np.isfinite(s) or s > BLOWUP_L2SQ:
            return snaps, l2sq, vsq, j + 1
        while ptr < len(snap_steps) and snap_steps[ptr] == j + 1:
            snaps[ptr] = u
            ptr += 1
    return snaps, l2sq, vsq, -1


def parabolic_march(u0, dt, h, b_vals, omega_vals, snap_steps):
    """March (I + dt A_h - dt omega_n I) u+ = u + dt b_n (matrix varies)."""
    u = np.asarray(u0, dtype=float).copy()
    n = u.shape[0]
    nsteps = len(b_vals)
    snap_steps = np.asarray(snap_steps, dtype=np.int64)
    snaps = np.zeros((len(snap_steps), n))
    l2sq = np.zeros(nsteps + 1)
    vsq = np.zeros(nsteps + 1)

    off = -dt / h**2
    diag0 = 1.0 + dt * 2.0 / h**2
    ab = np.zeros((2, n))
    ab[0, 1:] = off

    ptr = 0
    l2sq[0] = h * np.dot(u, u)
    vsq[0] = _vsq(u, h)
    while ptr < len(snap_steps) and snap_steps[ptr] == 0:
        snaps[ptr] = u
        ptr += 1
    for j in range(nsteps):
        ab[1, :] = diag0 - dt * omega_vals[j]
        rhs = u + dt * b_vals[j]
        u = solveh_banded(ab, rhs)
        s = h * np.dot(u, u)
        l2sq[j + 1] = s
        vsq[j + 1] = _vsq(u, h)
        if not np.isfinite(s) or s > BLOWUP_L2SQ:
            return snaps, l2sq, vsq, j + 1
        while ptr < len(snap_steps) and snap_steps[ptr] == j + 1:
            snaps[ptr] = u
            ptr += 1
    return snaps, l2sq, vsq, -1


def maxmin_sq(A, B):
    """max over rows a of A of min over rows b of B of |a-b|^2 (euclidean)."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    best = 0.0
    chunk = max(1, int(4_000_000 // max(B.shape[0], 1)))
    for i in range(0, A.shape[0], chunk):
        d = cdist(A[i : i + chunk], B, "sqeuclidean")
        m = float(d.min(axis=1).max())
        if m > best:
            best = m
    return best
