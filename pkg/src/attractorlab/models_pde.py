"""One-dimensional dissipative PDE models on a uniform Dirichlet grid.

Two models:

* ``ChafeeModel``: u_t = u_xx + lam*u - b(t)*u^3 on (0, L), zero boundary,
  lam strictly between the first two Dirichlet eigenvalues. Time stepping is
  IMEX: diffusion and the linear term implicit, the cubic explicit,

      (I + dt*(A_h - lam*I)) u^{n+1} = u^n - dt*b(t_n)*(u^n)^3,

  whose fixed points satisfy the discrete stationary equation exactly.

* ``ParabolicInclusionModel``: u_t >= u_xx + omega(t)*u with the multivalued
  forcing b(t)*H(u) (H the Heaviside set function), solutions confined to
  the nonnegative cone. From rest the process may stay at rest or depart
  upward at any instant; discretization is backward Euler,

      (I + dt*A_h - dt*omega(t_n)*I) u^{n+1} = u^n + dt*b(t_n)*1,

  an M-matrix scheme, so positivity and comparison hold exactly.

A_h is the standard second-difference matrix. The discrete first eigenvalue
(2/h)^2 sin^2(pi*h/(2L)) replaces the continuous (pi/L)^2 wherever a sharp
spectral constant matters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.linalg import solve_banded, solveh_banded

from . import _kernels
from .errors import ContractViolation, NumericalFailure, UnsupportedModel
from .models_scalar import TimeFnSpec
from .process import UNIQUE, BranchLabel, ProcessHandle
from .setcalc import CompactSetSample, StatePoint


@dataclass(frozen=True)
class Grid1D:
    """Uniform interior grid for (0, domain_length) with zero boundary."""

    domain_length: float
    n_interior: int = 127

    def __post_init__(self):
        if self.domain_length <= 0:
            raise ContractViolation("domain length must be positive")
        if self.n_interior < 15:
            raise ContractViolation("grid needs at least 15 interior nodes")

    @property
    def h(self) -> float:
        return self.domain_length / (self.n_interior + 1)

    @property
    def x(self) -> np.ndarray:
        return self.h * np.arange(1, self.n_interior + 1)

    @property
    def lambda1(self) -> float:
        """First eigenvalue of the discrete Dirichlet Laplacian A_h."""
        L, h = self.domain_length, self.h
        return (2.0 / h) ** 2 * math.sin(math.pi * h / (2.0 * L)) ** 2

    def eigenvalue(self, k: int) -> float:
        L, h = self.domain_length, self.h
        return (2.0 / h) ** 2 * math.sin(k * math.pi * h / (2.0 * L)) ** 2

    def l2_norm_sq(self, u) -> float:
        u = np.asarray(u, dtype=float)
        return float(self.h * np.dot(u, u))

    def v_norm_sq(self, u) -> float:
        u = np.asarray(u, dtype=float)
        d = np.diff(np.concatenate(([0.0], u, [0.0])))
        return float(np.dot(d, d) / self.h)


def _steps(dt: float, t0: float, t: float) -> int:
    if t < t0:
        raise ContractViolation("need t >= t0")
    n = (t - t0) / dt
    n_round = round(n)
    if abs(n - n_round) > 1e-6:
        raise ContractViolation(
            f"span {t - t0!r} is not a multiple of dt={dt!r}"
        )
    return int(n_round)


def _snap_indices(dt, t0, times):
    idx = []
    for t in times:
        n = (float(t) - t0) / dt
        n_round = round(n)
        if abs(n - n_round) > 1e-6:
            raise ContractViolation(f"snapshot time {t!r} is off the step grid")
        idx.append(int(n_round))
    out = np.array(sorted(set(idx)), dtype=np.int64)
    if np.any(out < 0):
        raise ContractViolation("snapshot times before t0")
    return out


# ---------------------------------------------------------------------------
# Chafee model


@dataclass(frozen=True)
class ChafeeModel:
    """u_t = u_xx + lam*u - b(t)*u^3, zero Dirichlet data."""

    lam: float
    b: TimeFnSpec
    grid: Grid1D
    dt: float = 0.005
    model_id: str = "chafee"

    def __post_init__(self):
        lam1 = self.grid.lambda1
        lam2 = self.grid.eigenvalue(2)
        if not (lam1 < self.lam < lam2):
            raise UnsupportedModel(
                f"lam must lie between the first two eigenvalues "
                f"({lam1:.6g}, {lam2:.6g}); got {self.lam}"
            )
        lo, hi = self.b.bounds()
        if not (0 < lo <= hi < math.inf):
            raise UnsupportedModel("b(t) needs 0 < inf b <= sup b < inf")
        if not (0 < self.dt <= 0.01):
            raise UnsupportedModel("dt must be in (0, 0.01]")

    @property
    def alpha(self) -> float:
        return self.lam - self.grid.lambda1 + 1.0

    @property
    def gamma(self) -> float:
        return self.alpha + self.grid.lambda1 - self.lam  # identically 1

    def forcing_const(self) -> float:
        """Absorbing forcing level alpha^2*|interior|/(4*gamma*b_min)."""
        b0 = self.b.bounds()[0]
        measure = self.grid.h * self.grid.n_interior
        return self.alpha**2 * measure / (4.0 * self.gamma * b0)

    def absorbing_radii(self) -> tuple[float, float]:
        """(R0^2, R1^2): L2 and V-norm absorbing-ball radii squared."""
        r0sq = 1.0 + self.forcing_const()
        b0 = self.b.bounds()[0]
        measure = self.grid.h * self.grid.n_interior
        r1sq = (1.0 + 2.0 * (self.lam - self.grid.lambda1)) * (
            r0sq / 2.0 + self.alpha**2 * measure / (4.0 * b0)
        )
        return r0sq, r1sq


def _chafee_march(m: ChafeeModel, t0: float, u0, snap_idx):
    n_steps = int(snap_idx[-1])
    b_vals = np.atleast_1d(
        np.asarray(m.b(t0 + m.dt * np.arange(max(n_steps, 1))), dtype=float)
    )
    u0 = np.ascontiguousarray(np.asarray(u0, dtype=float))
    if u0.shape != (m.grid.n_interior,):
        raise ContractViolation("initial field does not match the grid")
    snaps, l2sq, vsq, status = _kernels.chafee_march(
        u0, m.dt, m.grid.h, m.lam, b_vals, snap_idx
    )
    if status >= 0:
        raise NumericalFailure(
            f"{m.model_id}: blow-up at step {status}",
            last_good_time=t0 + (status - 1) * m.dt,
        )
    return snaps, l2sq, vsq


def chafee_solve(m: ChafeeModel, t: float, t0: float, u0, snapshot_times=None):
    """March the IMEX scheme from (t0, u0) to t.

    Returns the final field, or with ``snapshot_times`` a dict holding the
    snapshot times, fields, and their squared L2 / V norms.
    """
    n_steps = _steps(m.dt, t0, t)
    if snapshot_times is None:
        snap_idx = np.array([n_steps], dtype=np.int64)
        snaps, _, _ = _chafee_march(m, t0, u0, snap_idx)
        return snaps[-1]
    snap_idx = _snap_indices(m.dt, t0, snapshot_times)
    if snap_idx[-1] > n_steps:
        raise ContractViolation("snapshot beyond the final time")
    if snap_idx[-1] < n_steps:
        snap_idx = np.append(snap_idx, n_steps)
    snaps, l2sq, vsq = _chafee_march(m, t0, u0, snap_idx)
    return {
        "times": t0 + m.dt * snap_idx.astype(float),
        "states": snaps,
        "l2_sq": l2sq[snap_idx],
        "v_sq": vsq[snap_idx],
    }


def _limit_b(m: ChafeeModel) -> float:
    b_inf = m.b.declared_limit()
    if b_inf is None:
        raise UnsupportedModel("b(t) declares no limit at t -> +inf")
    return b_inf


def _stationary_residual(m: ChafeeModel, v, b_const):
    h2 = m.grid.h**2
    av = np.empty_like(v)
    av[:] = 2.0 * v
    av[:-1] -= v[1:]
    av[1:] -= v[:-1]
    av /= h2
    return av - m.lam * v + b_const * v**3


def chafee_autonomous_equilibria(m: ChafeeModel, march_time: float = 200.0) -> dict:
    """Equilibria of the limiting autonomous system: 0 and +-v1.

    v1 is obtained by marching from a low-mode seed, then Newton-polished on
    the discrete stationary equation; the reported residual is the discrete
    L2 norm of that equation at the result.
    """
    b_inf = _limit_b(m)
    m_inf = ChafeeModel(m.lam, TimeFnSpec.constant(b_inf), m.grid, m.dt, m.model_id)
    seed = 0.5 * np.sin(math.pi * m.grid.x / m.grid.domain_length)
    v = chafee_solve(m_inf, march_time, 0.0, seed)
    h2 = m.grid.h**2
    for _ in range(40):
        res = _stationary_residual(m, v, b_inf)
        if math.sqrt(m.grid.l2_norm_sq(res)) <= 1e-13:
            break
        ab = np.zeros((3, m.grid.n_interior))
        ab[0, 1:] = -1.0 / h2
        ab[1, :] = 2.0 / h2 - m.lam + 3.0 * b_inf * v**2
        ab[2, :-1] = -1.0 / h2
        v = v - solve_banded((1, 1), ab, res)
    res = _stationary_residual(m, v, b_inf)
    residual = math.sqrt(m.grid.l2_norm_sq(res))
    if v.max() <= 0:
        raise NumericalFailure("positive equilibrium collapsed to zero")
    return {
        "plus": v,
        "minus": -v,
        "zero": np.zeros(m.grid.n_interior),
        "residual": residual,
    }


def chafee_xi_M(m: ChafeeModel, t: float, sign: int = +1, depth_L: float | None = None,
                tol: float = 1e-6) -> np.ndarray:
    """Extreme bounded solution at time t by deep pullback from a dominating seed.

    Marches from the constant field sign*5 started at t - L, doubling L until
    two successive answers agree to tol in discrete L2 (L capped at 200).
    """
    if sign not in (+1, -1):
        raise ContractViolation("sign must be +1 or -1")
    seed = sign * 5.0 * np.ones(m.grid.n_interior)
    if depth_L is not None:
        return chafee_solve(m, t, t - depth_L, seed)
    L = 25.0
    prev = chafee_solve(m, t, t - L, seed)
    while L < 200.0:
        L *= 2.0
        cur = chafee_solve(m, t, t - L, seed)
        if math.sqrt(m.grid.l2_norm_sq(cur - prev)) <= tol:
            return cur
        prev = cur
    raise NumericalFailure(f"pullback for xi_M did not settle by depth {L}")


def chafee_ic_bank(m: ChafeeModel, ic_count: int = 40, seed: int = 12345) -> list:
    """Deterministic spread of initial fields inside the absorbing ball."""
    x, L = m.grid.x, m.grid.domain_length
    ics = [np.zeros(m.grid.n_interior)]
    n_amp = max(2, (ic_count - 4) // 6)
    for c in np.geomspace(0.05, 2.0, n_amp):
        for k in (1, 2):
            mode = np.sin(k * math.pi * x / L)
            ics.append(c * mode)
            ics.append(-c * mode)
    rng = np.random.default_rng(seed)
    while len(ics) < ic_count:
        coeffs = rng.normal(0.0, 0.5, size=5) / np.arange(1, 6)
        field = sum(
            a * np.sin((j + 1) * math.pi * x / L) for j, a in enumerate(coeffs)
        )
        ics.append(field)
    return ics[:ic_count]


def chafee_attractor_sample(m: ChafeeModel, t: float, depth_L: float = 25.0,
                            ic_count: int = 40, seed: int = 12345,
                            merge_eps: float = 0.0) -> CompactSetSample:
    """Attractor section at t: pull the IC bank back to t - depth_L and march in.

    The bank always carries the exact rest state and +-xi_M(t) on top of the
    deterministic IC spread, so the extreme points of the section are present
    regardless of bank size.
    """
    pts = []
    h = m.grid.h
    for u0 in chafee_ic_bank(m, ic_count, seed):
        u = chafee_solve(m, t, t - depth_L, u0)
        pts.append(StatePoint(u, "l2", h))
    xi = chafee_xi_M(m, t)
    pts.append(StatePoint(xi, "l2", h))
    pts.append(StatePoint(chafee_xi_M(m, t, -1), "l2", h))
    from .setcalc import eps_merge

    return eps_merge(pts, merge_eps)


def chafee_heteroclinic_rate(m: ChafeeModel, eps0: float = 1e-7,
                             fit_lo: float = 1e-5, fit_hi: float = 1e-2) -> float:
    """Escape rate from zero along the first mode, fitted on the linear regime.

    Marches the limiting autonomous system from eps0 times the first mode and
    fits d(log ||u||)/dt on the window where ||u|| lies in [fit_lo, fit_hi].
    """
    b_inf = _limit_b(m)
    m_inf = ChafeeModel(m.lam, TimeFnSpec.constant(b_inf), m.grid, m.dt, m.model_id)
    rate_guess = m.lam - m.grid.lambda1
    horizon = (math.log(fit_hi / eps0) / rate_guess) * 1.6 + 2.0
    horizon = m.dt * math.ceil(horizon / m.dt)
    u0 = eps0 * np.sin(math.pi * m.grid.x / m.grid.domain_length)
    every = max(1, int(round(0.05 / m.dt)))
    n_steps = _steps(m.dt, 0.0, horizon)
    snap_idx = np.arange(0, n_steps + 1, every, dtype=np.int64)
    snaps, l2sq, _ = _chafee_march(m_inf, 0.0, u0, snap_idx)
    norms = np.sqrt(l2sq[snap_idx])
    times = m.dt * snap_idx.astype(float)
    mask = (norms >= fit_lo) & (norms <= fit_hi)
    if mask.sum() < 10:
        raise NumericalFailure("linear growth window too short to fit a rate")
    slope = np.polyfit(times[mask], np.log(norms[mask]), 1)[0]
    return float(slope)


def chafee_energy_check(m: ChafeeModel, u0, t0: float, horizon: float,
                        slack: float = 1e-7) -> dict:
    """Per-step absorbing inequality along one trajectory.

    Checks, for every step,
        ||u^{n+1}||^2 <= e^{-2*gamma*dt} ||u^n||^2 + (1 - e^{-2*gamma*dt}) * F
    with F the absorbing forcing level. Slack is relative to max(1, ||u^n||^2).
    """
    n_steps = _steps(m.dt, t0, horizon)
    snap_idx = np.array([n_steps], dtype=np.int64)
    _, l2sq, vsq = _chafee_march(m, t0, u0, snap_idx)
    decay = math.exp(-2.0 * m.gamma * m.dt)
    forcing = (1.0 - decay) * m.forcing_const()
    bound = decay * l2sq[:-1] + forcing
    margins = (l2sq[1:] - bound) / np.maximum(1.0, l2sq[:-1])
    worst = float(margins.max())
    return {
        "passed": worst <= slack,
        "worst_margin": worst,
        "n_steps": int(n_steps),
        "max_l2_sq": float(l2sq.max()),
        "max_v_sq": float(vsq.max()),
    }


def chafee_order_check(m: ChafeeModel, u_lo0, u_hi0, t0: float, horizon: float) -> dict:
    """Comparison-principle check: ordered data stay ordered along the march."""
    u_lo0 = np.asarray(u_lo0, dtype=float)
    u_hi0 = np.asarray(u_hi0, dtype=float)
    if np.any(u_hi0 < u_lo0):
        raise ContractViolation("initial fields are not ordered")
    amp = max(np.abs(u_lo0).max(), np.abs(u_hi0).max())
    b_hi = m.b.bounds()[1]
    monotone_cap = math.sqrt(1.0 / (3.0 * m.dt * b_hi))
    n_steps = _steps(m.dt, t0, horizon)
    snap_idx = np.arange(0, n_steps + 1, dtype=np.int64)
    lo_snaps, _, _ = _chafee_march(m, t0, u_lo0, snap_idx)
    hi_snaps, _, _ = _chafee_march(m, t0, u_hi0, snap_idx)
    gaps = hi_snaps - lo_snaps
    min_gap = float(gaps.min())
    max_amp = float(max(np.abs(lo_snaps).max(), np.abs(hi_snaps).max()))
    return {
        "min_gap": min_gap,
        "max_amplitude": max_amp,
        "monotone_cap": monotone_cap,
        "in_monotone_regime": bool(max(amp, max_amp) <= monotone_cap),
    }


def chafee_handle(m: ChafeeModel) -> ProcessHandle:
    h = m.grid.h

    def evaluator(t, t0, x, budget):
        u = chafee_solve(m, t, t0, x.values)
        return [(UNIQUE, StatePoint(u, "l2", h))]

    return ProcessHandle(
        model_id=m.model_id,
        evaluator=evaluator,
        is_multivalued=False,
        is_autonomous=m.b.kind == "constant",
        forcing_period=m.b.period,
    )


# ---------------------------------------------------------------------------
# parabolic inclusion


@dataclass(frozen=True)
class ParabolicInclusionModel:
    """u_t in u_xx + omega(t)*u + b(t)*H(u) on the nonnegative cone."""

    b: TimeFnSpec
    omega: TimeFnSpec
    grid: Grid1D
    dt: float = 0.005
    model_id: str = "parabolic-inclusion"

    def __post_init__(self):
        lam1_cont = (math.pi / self.grid.domain_length) ** 2
        w_lo, w_hi = self.omega.bounds()
        if w_hi >= lam1_cont:
            raise UnsupportedModel(
                f"sup omega = {w_hi:.6g} must stay below {lam1_cont:.6g}"
            )
        if w_lo < 0:
            raise UnsupportedModel("omega(t) must be nonnegative")
        b_lo, b_hi = self.b.bounds()
        if not (0 < b_lo <= b_hi < math.inf):
            raise UnsupportedModel("b(t) needs 0 < inf b <= sup b < inf")
        if not (0 < self.dt <= 0.01):
            raise UnsupportedModel("dt must be in (0, 0.01]")

    def decay_rate(self) -> float:
        """Contraction rate 2*((pi/L)^2 - sup omega) for squared L2 norms."""
        return 2.0 * ((math.pi / self.grid.domain_length) ** 2 - self.omega.bounds()[1])


def _parabolic_march(m: ParabolicInclusionModel, t0: float, u0, snap_idx):
    n_steps = int(snap_idx[-1])
    k = np.arange(max(n_steps, 1))
    b_vals = np.atleast_1d(np.asarray(m.b(t0 + m.dt * k), dtype=float))
    w_vals = np.atleast_1d(np.asarray(m.omega(t0 + m.dt * k), dtype=float))
    u0 = np.ascontiguousarray(np.asarray(u0, dtype=float))
    if u0.shape != (m.grid.n_interior,):
        raise ContractViolation("initial field does not match the grid")
    snaps, l2sq, vsq, status = _kernels.parabolic_march(
        u0, m.dt, m.grid.h, b_vals, w_vals, snap_idx
    )
    if status >= 0:
        raise NumericalFailure(
            f"{m.model_id}: blow-up at step {status}",
            last_good_time=t0 + (status - 1) * m.dt,
        )
    return snaps, l2sq, vsq


def parabolic_march_snapshots(m: ParabolicInclusionModel, t0: float, u0, snapshot_times):
    snap_idx = _snap_indices(m.dt, t0, snapshot_times)
    snaps, l2sq, vsq = _parabolic_march(m, t0, u0, snap_idx)
    return {
        "times": t0 + m.dt * snap_idx.astype(float),
        "states": snaps,
        "l2_sq": l2sq[snap_idx],
        "v_sq": vsq[snap_idx],
    }


def parabolic_solve(m: ParabolicInclusionModel, t: float, t0: float, u0,
                    budget: int = 9):
    """All selected solutions at t from (t0, u0) as (BranchLabel, field) pairs.

    Positive data evolve uniquely. Exact rest may stay at rest or depart
    upward; departure instants are spread over budget - 1 step-aligned times
    in [t0, t].
    """
    u0 = np.asarray(u0, dtype=float)
    if np.any(u0 < 0):
        raise ContractViolation("parabolic states live in the nonnegative cone")
    n_steps = _steps(m.dt, t0, t)
    if np.any(u0 > 0):
        snaps, _, _ = _parabolic_march(m, t0, u0, np.array([n_steps], dtype=np.int64))
        return [(UNIQUE, snaps[-1])]
    out = [(BranchLabel("zero"), np.zeros(m.grid.n_interior))]
    n_dep = max(budget - 1, 1)
    if n_steps == 0:
        dep_steps = [0]
    else:
        dep_steps = sorted(set(np.linspace(0, n_steps, n_dep).round().astype(int)))
    for k in dep_steps:
        r = t0 + m.dt * k
        if k == n_steps:
            field = np.zeros(m.grid.n_interior)
        else:
            snaps, _, _ = _parabolic_march(
                m, r, np.zeros(m.grid.n_interior),
                np.array([n_steps - k], dtype=np.int64),
            )
            field = snaps[-1]
        out.append((BranchLabel("plus", float(r)), field))
    return out


def parabolic_decay_check(m: ParabolicInclusionModel, u0a, u0b, t: float, t0: float,
                          n_snapshots: int = 16, slack: float = 1e-6) -> dict:
    """Squared-distance contraction between two positive solutions.

    Verifies ||u_b(s) - u_a(s)||^2 <= e^{-rate*(s - t0)} ||u_b(t0) - u_a(t0)||^2
    times (1 + slack) at every snapshot, with the model's spectral decay rate.
    """
    times = np.linspace(t0, t, n_snapshots)
    times = t0 + m.dt * np.round((times - t0) / m.dt)
    snap_idx = _snap_indices(m.dt, t0, times)
    snaps_a, _, _ = _parabolic_march(m, t0, np.asarray(u0a, dtype=float), snap_idx)
    snaps_b, _, _ = _parabolic_march(m, t0, np.asarray(u0b, dtype=float), snap_idx)
    w = snaps_b - snaps_a
    wsq = m.grid.h * np.sum(w * w, axis=1)
    rate = m.decay_rate()
    rel_times = m.dt * snap_idx.astype(float)
    bound = np.exp(-rate * rel_times) * wsq[0] * (1.0 + slack)
    ratios = wsq / np.maximum(bound, 1e-300)
    return {
        "passed": bool(np.all(wsq <= bound)),
        "worst_ratio": float(ratios.max()),
        "rate": rate,
        "times": t0 + rel_times,
    }


def parabolic_stationary(m: ParabolicInclusionModel, b_const: float, omega_const: float) -> np.ndarray:
    """Solve (A_h - omega*I) v = b * 1 (the positive stationary state)."""
    n, h2 = m.grid.n_interior, m.grid.h**2
    ab = np.zeros((2, n))
    ab[0, 1:] = -1.0 / h2
    ab[1, :] = 2.0 / h2 - omega_const
    return solveh_banded(ab, b_const * np.ones(n))


def parabolic_xi_M(m: ParabolicInclusionModel, t: float, depth_L: float | None = None,
                   tol: float = 1e-8) -> np.ndarray:
    """Maximal bounded solution at t by deep pullback from a dominating seed."""
    seed = 5.0 * np.ones(m.grid.n_interior)

    def pull(L):
        snaps, _, _ = _parabolic_march(
            m, t - L, seed, np.array([_steps(m.dt, t - L, t)], dtype=np.int64)
        )
        return snaps[-1]

    if depth_L is not None:
        return pull(depth_L)
    L = 10.0
    prev = pull(L)
    while L < 160.0:
        L *= 2.0
        cur = pull(L)
        if math.sqrt(m.grid.l2_norm_sq(cur - prev)) <= tol:
            return cur
        prev = cur
    raise NumericalFailure(f"pullback for xi_M did not settle by depth {L}")


def parabolic_attractor_sample(m: ParabolicInclusionModel, t: float, durations,
                               include_xi: bool = True) -> CompactSetSample:
    """Attractor section at t sampled by rest-departure durations.

    Each duration d contributes the state reached at t after departing from
    rest at t - d; duration 0 is the rest state itself. The maximal solution
    is appended so both ends of the section are present.
    """
    h = m.grid.h
    pts = []
    zero = np.zeros(m.grid.n_interior)
    for d in durations:
        d = float(d)
        if d < 0:
            raise ContractViolation("durations must be nonnegative")
        if d == 0:
            pts.append(StatePoint(zero, "l2", h))
            continue
        steps = _steps(m.dt, t - d, t)
        snaps, _, _ = _parabolic_march(m, t - d, zero, np.array([steps], dtype=np.int64))
        pts.append(StatePoint(snaps[-1], "l2", h))
    if include_xi:
        pts.append(StatePoint(parabolic_xi_M(m, t), "l2", h))
    return CompactSetSample(pts, merge_eps=0.0)


def parabolic_autonomous_attractor(m: ParabolicInclusionModel, durations=None) -> dict:
    """Attractor data of the limiting autonomous system.

    Requires b and omega to declare limits. Returns the stationary state, the
    rest state, and a duration-indexed sample of the connecting orbit (same
    parametrization as ``parabolic_attractor_sample``, so banks match).
    """
    b_inf = m.b.declared_limit()
    w_inf = m.omega.declared_limit()
    if b_inf is None or w_inf is None:
        raise UnsupportedModel("b or omega declares no limit at t -> +inf")
    m_inf = ParabolicInclusionModel(
        TimeFnSpec.constant(b_inf), TimeFnSpec.constant(w_inf),
        m.grid, m.dt, m.model_id
    )
    v_plus = parabolic_stationary(m, b_inf, w_inf)
    h = m.grid.h
    if durations is None:
        durations = np.concatenate(([0.0], np.geomspace(m.dt, 8.0, 41)))
    pts = []
    zero = np.zeros(m.grid.n_interior)
    for d in durations:
        d = float(d)
        if d == 0:
            pts.append(StatePoint(zero, "l2", h))
            continue
        d = m.dt * round(d / m.dt)
        steps = _steps(m.dt, 0.0, d)
        snaps, _, _ = _parabolic_march(m_inf, 0.0, zero, np.array([steps], dtype=np.int64))
        pts.append(StatePoint(snaps[-1], "l2", h))
    pts.append(StatePoint(v_plus, "l2", h))
    return {
        "v_plus": v_plus,
        "zero": zero,
        "sample": CompactSetSample(pts, merge_eps=0.0),
        "model": m_inf,
    }


def parabolic_reference_solution(m: ParabolicInclusionModel, t: float, t0: float, u0) -> np.ndarray:
    """Spectrally exact solution of the semidiscrete system (time quadrature).

    Diagonalizes A_h in the discrete sine basis and integrates each scalar
    mode c_k' = (omega(s) - mu_k) c_k + b(s) beta_k with adaptive quadrature,
    so the only error against the march is the march's time discretization.
    """
    n = m.grid.n_interior
    L, h = m.grid.domain_length, m.grid.h
    x = m.grid.x
    k = np.arange(1, n + 1)
    S = np.sin(np.outer(x, k) * math.pi / L)  # orthogonal up to factor (n+1)/2
    mu = np.array([m.grid.eigenvalue(int(kk)) for kk in k])
    scale = 2.0 / (n + 1)
    c0 = scale * (S.T @ np.asarray(u0, dtype=float))
    beta = scale * (S.T @ np.ones(n))
    w_cum = m.omega.integral(t0, t)
    c = np.empty(n)
    for i in range(n):
        decay = math.exp(-mu[i] * (t - t0) + w_cum)

        def integrand(s, mu_i=mu[i]):
            return math.exp(-mu_i * (t - s) + m.omega.integral(s, t)) * m.b(s)

        # stiff modes only see a boundary layer at s = t; clip the window
        lo = t0
        if mu[i] * (t - t0) > 46.0 and mu[i] > 100.0:
            lo = t - 46.0 / mu[i]
        breakpoints = [s for s in (0.0,) if lo < s < t] or None
        forced, _ = quad(integrand, lo, t, points=breakpoints,
                         limit=400, epsabs=1e-14, epsrel=1e-12)
        c[i] = decay * c0[i] + beta[i] * forced
    return S @ c


def parabolic_solver_matching(m: ParabolicInclusionModel, u0, t: float, t0: float) -> dict:
    """First-order error constant of the march against the spectral reference.

    Returns C = ||u_march(t) - u_ref(t)|| / dt in discrete L2 and the same
    constant at dt/2 (halving should keep C roughly flat for a first-order
    scheme).
    """
    ref = parabolic_reference_solution(m, t, t0, u0)
    steps = _steps(m.dt, t0, t)
    snaps, _, _ = _parabolic_march(m, t0, np.asarray(u0, dtype=float),
                                   np.array([steps], dtype=np.int64))
    err = math.sqrt(m.grid.l2_norm_sq(snaps[-1] - ref))
    m_half = ParabolicInclusionModel(m.b, m.omega, m.grid, m.dt / 2.0, m.model_id)
    snaps_h, _, _ = _parabolic_march(m_half, t0, np.asarray(u0, dtype=float),
                                     np.array([2 * steps], dtype=np.int64))
    err_half = math.sqrt(m.grid.l2_norm_sq(snaps_h[-1] - ref))
    return {
        "C": err / m.dt,
        "C_half": err_half / (m.dt / 2.0),
        "err": err,
        "err_half": err_half,
    }


def parabolic_handle(m: ParabolicInclusionModel) -> ProcessHandle:
    h = m.grid.h

    def evaluator(t, t0, x, budget):
        pairs = parabolic_solve(m, t, t0, x.values, budget)
        return [(lbl, StatePoint(u, "l2", h)) for lbl, u in pairs]

    return ProcessHandle(
        model_id=m.model_id,
        evaluator=evaluator,
        is_multivalued=True,
        is_autonomous=m.b.kind == "constant" and m.omega.kind == "constant",
        forcing_period=None,
    )
