"""Mechanical checks of attraction, invariance, and limit-set conditions.

Every check returns a ``VerifierReport`` with the measured defect curve and
a verdict. A curve "tends to zero" when its final value is at or below the
tolerance AND its last quartile is non-increasing once values are clipped
at the tolerance floor (10% jitter allowed); the floor keeps roundoff
wiggle below the tolerance from failing an otherwise converged curve.

Schedule semantics: ``ToleranceSchedule.grid`` is the sequence of check
parameters. Attraction checks read it as increasing evolution durations;
invariance, equivalence, and autonomy checks read it as absolute times.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation
from .limits import a_min, forward_omega, omega_liminf, omega_limsup
from .process import ProcessHandle, evolve_set
from .setcalc import CompactSetSample, SetFamily, hausdorff, semidist


@dataclass
class ToleranceSchedule:
    """Tolerance + parameter grid a verifier walks through.

    tol     pass tolerance for the check's defect
    grid    increasing durations or times (meaning depends on the check)
    budget  branch budget for multivalued evolution
    eps     merge tolerance for any limit sets built inside the check
    """

    tol: float
    grid: np.ndarray
    budget: int = 9
    eps: float = 1e-2

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        if self.grid.ndim != 1 or len(self.grid) < 2:
            raise ContractViolation("schedule grid needs >= 2 entries")
        if not np.all(np.diff(self.grid) > 0):
            raise ContractViolation("schedule grid must be strictly increasing")
        if self.tol <= 0:
            raise ContractViolation("schedule tol must be positive")


@dataclass
class VerifierReport:
    check_id: str
    passed: bool
    curve: dict
    tolerance: float
    margin: float
    notes: str = ""

    def to_json(self, path=None):
        payload = {
            "check_id": self.check_id,
            "passed": self.passed,
            "curve": {k: list(map(float, v)) for k, v in self.curve.items()},
            "tolerance": self.tolerance,
            "margin": self.margin,
            "notes": self.notes,
        }
        if path is None:
            return json.dumps(payload, indent=2, sort_keys=True)
        with open(path, "w") as f:
            json.dump(payload, f, indent=2, sort_keys=True)
        return path


def tends_to_zero(values, tol: float) -> tuple[bool, str]:
    """final <= tol and tol-floored last quartile non-increasing (10% jitter)."""
    v = np.asarray(values, dtype=float)
    if len(v) < 4:
        raise ContractViolation("convergence verdict needs >= 4 samples")
    if not np.all(np.isfinite(v)):
        return False, "curve contains non-finite values"
    final_ok = v[-1] <= tol
    clipped = np.maximum(v, tol)
    tail = clipped[(3 * len(v)) // 4 :]
    monotone_ok = bool(np.all(tail[1:] <= 1.1 * tail[:-1]))
    if final_ok and monotone_ok:
        return True, "converged"
    if not final_ok:
        return False, f"final defect {v[-1]:.6g} above tol {tol:.6g}"
    return False, "tail of the defect curve is not settling"


def _report(check_id, passed, params, values, tol, notes=""):
    values = np.asarray(values, dtype=float)
    return VerifierReport(
        check_id=check_id,
        passed=bool(passed),
        curve={"params": list(map(float, params)), "values": list(map(float, values))},
        tolerance=float(tol),
        margin=float(tol - values[-1]) if len(values) else float("nan"),
        notes=notes,
    )


def verify_pullback_attraction(p: ProcessHandle, A: SetFamily, B: CompactSetSample,
                               t_fixed: float, sched: ToleranceSchedule) -> VerifierReport:
    """dist(U(t, t-d)B, A(t)) -> 0 as the pullback duration d grows, t fixed."""
    target = A.section_at(t_fixed)
    vals = []
    for d in sched.grid:
        img = evolve_set(p, t_fixed, t_fixed - float(d), B, sched.budget)
        vals.append(semidist(img, target))
    ok, why = tends_to_zero(vals, sched.tol)
    return _report("pullback-attraction", ok, sched.grid, vals, sched.tol,
                   f"t={t_fixed:g}; {why}")


def verify_forward_attraction(p: ProcessHandle, A: SetFamily, B: CompactSetSample,
                              t0_fixed: float, sched: ToleranceSchedule) -> VerifierReport:
    """dist(U(t0+d, t0)B, A(t0+d)) -> 0 as the forward duration d grows."""
    vals = []
    for d in sched.grid:
        t = t0_fixed + float(d)
        img = evolve_set(p, t, t0_fixed, B, sched.budget)
        vals.append(semidist(img, A.section_at(t)))
    ok, why = tends_to_zero(vals, sched.tol)
    return _report("forward-attraction", ok, sched.grid, vals, sched.tol,
                   f"t0={t0_fixed:g}; {why}")


def verify_invariance(p: ProcessHandle, A: SetFamily, mode: str,
                      sched: ToleranceSchedule) -> VerifierReport:
    """Step-to-step invariance of the family along the schedule times.

    strict:   U(t2, t1)A(t1) = A(t2)  (hausdorff defect)
    negative: A(t2) inside U(t2, t1)A(t1)  (one-sided defect)
    Passes when the worst step defect is at most tol.
    """
    if mode not in ("strict", "negative"):
        raise ContractViolation("invariance mode must be 'strict' or 'negative'")
    vals = []
    for t1, t2 in zip(sched.grid[:-1], sched.grid[1:]):
        img = evolve_set(p, float(t2), float(t1), A.section_at(t1), sched.budget)
        target = A.section_at(t2)
        if mode == "strict":
            vals.append(hausdorff(img, target))
        else:
            vals.append(semidist(target, img))
    worst = max(vals)
    return _report(f"invariance-{mode}", worst <= sched.tol,
                   sched.grid[1:], vals, sched.tol,
                   f"worst step defect {worst:.6g}")


def _family_limits(A: SetFamily, sched: ToleranceSchedule, window=None, limits=None):
    if limits is not None:
        return limits
    if window is None:
        span = A.times[-1] - A.times[0]
        window = span / 4.0
    lim_sup = omega_limsup(A, window, sched.eps)
    lim_inf = omega_liminf(A, window, sched.eps)
    return lim_sup, lim_inf, window


def _forward_results(p, test_sets, horizon, window, sched, n_times, cached):
    if cached is not None:
        return list(cached)
    out = []
    for B, t0 in test_sets:
        # the recurrence window cannot exceed a third of the observed span
        w = min(window, (horizon - float(t0)) / 3.0)
        out.append(forward_omega(p, B, float(t0), horizon, w, sched.eps,
                                 n_times, sched.budget))
    return out


def verify_cond_omega0(p: ProcessHandle, A: SetFamily, test_sets,
                       sched: ToleranceSchedule, horizon: float | None = None,
                       window: float | None = None, n_times: int = 129,
                       limits=None, forward_results=None) -> VerifierReport:
    """Liminf-based forward-attractor condition.

    Requires the family's liminf to be nonempty and to carry the full limit
    dynamics: hausdorff(limsup, liminf) <= 2*eps, and every forward
    omega-limit of the supplied (B, t0) pairs to sit inside the liminf
    within tol. ``limits`` and ``forward_results`` accept precomputed
    (limsup, liminf, window) and forward-omega results to avoid rework.
    """
    lim_sup, lim_inf, window = _family_limits(A, sched, window, limits)
    if horizon is None:
        horizon = float(A.times[-1])
    if lim_inf.is_empty:
        return _report(
            "cond-omega0", False, [0], [float("inf")], sched.tol,
            "liminf of the family is empty "
            f"(min worst-case defect {lim_inf.evidence['min_max_defect']:.6g})",
        )
    agree = hausdorff(lim_sup.sample, lim_inf.sample)
    results = _forward_results(p, test_sets, horizon, window, sched, n_times,
                               forward_results)
    vals = [semidist(res.sample, lim_inf.sample) for res in results]
    params = [float(i) for i in range(len(vals))]
    passed = agree <= 2 * sched.eps and max(vals) <= sched.tol
    return _report(
        "cond-omega0", passed, params, vals, sched.tol,
        f"hausdorff(limsup, liminf)={agree:.6g} (allowed {2 * sched.eps:g}); "
        f"worst forward-omega inclusion defect {max(vals):.6g}",
    )


def verify_cond_omega_pair(p: ProcessHandle, A: SetFamily, test_sets,
                           sched: ToleranceSchedule, horizon: float | None = None,
                           window: float | None = None, n_times: int = 129,
                           limits=None, forward_results=None) -> VerifierReport:
    """Limsup-based pair condition.

    (a) every forward omega-limit of the (B, t0) pairs sits inside the
    family's limsup within tol; (b) hausdorff(A(t), limsup) -> 0 along the
    schedule times.
    """
    lim_sup, _, window = _family_limits(A, sched, window, limits)
    if horizon is None:
        horizon = float(A.times[-1])
    results = _forward_results(p, test_sets, horizon, window, sched, n_times,
                               forward_results)
    inc_vals = [semidist(res.sample, lim_sup.sample) for res in results]
    conv_vals = [hausdorff(A.section_at(t), lim_sup.sample) for t in sched.grid]
    ok_conv, why = tends_to_zero(conv_vals, sched.tol)
    passed = ok_conv and max(inc_vals) <= sched.tol
    return _report(
        "cond-omega-pair", passed, sched.grid, conv_vals, sched.tol,
        f"worst forward-omega inclusion defect {max(inc_vals):.6g}; "
        f"family-to-limsup convergence: {why}",
    )


def verify_amin(p: ProcessHandle, A: SetFamily, bounded_sets, t0s,
                sched: ToleranceSchedule, horizon: float | None = None,
                window: float | None = None, n_times: int = 129,
                limits=None, forward_results=None) -> VerifierReport:
    """Minimality: the union of forward omega-limits matches the family's limits.

    Builds the minimal candidate from the supplied (B, t0) pairs and compares
    it against both the liminf and the limsup of the family; agreement of all
    three (within 2*eps set resolution) is required.
    """
    from .limits import LimitSetResult
    from .setcalc import eps_merge

    lim_sup, lim_inf, window = _family_limits(A, sched, window, limits)
    if horizon is None:
        horizon = float(A.times[-1])
    if forward_results is not None:
        pts = [pt for res in forward_results for pt in res.sample.points]
        candidate = LimitSetResult(
            kind="a-min", sample=eps_merge(pts, sched.eps), window=window,
            eps=sched.eps,
            residual=max(res.residual for res in forward_results),
        )
    else:
        w = min(window, (horizon - max(float(t) for t in t0s)) / 3.0)
        candidate = a_min(p, bounded_sets, t0s, horizon, w, sched.eps,
                          n_times, sched.budget)
    if lim_inf.is_empty:
        return _report("a-min", False, [0], [float("inf")], sched.tol,
                       "liminf of the family is empty; no minimal forward attractor")
    d_inf = hausdorff(candidate.sample, lim_inf.sample)
    d_sup = hausdorff(candidate.sample, lim_sup.sample)
    allowed = 2 * sched.eps
    passed = d_inf <= allowed and d_sup <= allowed
    return _report(
        "a-min", passed, [0.0, 1.0], [d_inf, d_sup], allowed,
        f"hausdorff(candidate, liminf)={d_inf:.6g}, "
        f"hausdorff(candidate, limsup)={d_sup:.6g} (allowed {allowed:g})",
    )


def verify_asymptotic_equivalence(A1: SetFamily, A2: SetFamily,
                                  sched: ToleranceSchedule) -> VerifierReport:
    """hausdorff(A1(t), A2(t)) -> 0 along the schedule times."""
    vals = [hausdorff(A1.section_at(t), A2.section_at(t)) for t in sched.grid]
    ok, why = tends_to_zero(vals, sched.tol)
    return _report("asymptotic-equivalence", ok, sched.grid, vals, sched.tol, why)


def verify_aa_convergence(p: ProcessHandle, A: SetFamily, A_inf: CompactSetSample,
                          sched: ToleranceSchedule) -> VerifierReport:
    """Asymptotic autonomy: hausdorff(A(t), A_inf) -> 0 along schedule times."""
    fwd, back = [], []
    for t in sched.grid:
        sec = A.section_at(t)
        fwd.append(semidist(sec, A_inf))
        back.append(semidist(A_inf, sec))
    vals = np.maximum(fwd, back)
    ok, why = tends_to_zero(vals, sched.tol)
    return _report(
        "aa-convergence", ok, sched.grid, vals, sched.tol,
        f"{why}; final into-limit {fwd[-1]:.6g}, final from-limit {back[-1]:.6g}",
    )
