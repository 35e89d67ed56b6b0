"""Forward omega-limit sets and Liminf/Limsup of time-indexed set families.

All limit objects are reported as ``LimitSetResult``: a finite sample plus
the window/eps used and numerical evidence. Conventions:

* Limsup(K) keeps every point visited by the family over the trailing
  window (eps-merged): points approached along SOME late time sequence.
* Liminf(K) keeps the points approached along EVERY late time sequence:
  candidates whose worst-case distance to the family over the window stays
  within eps. It may legitimately come out empty; the evidence records the
  smallest worst-case defect seen so emptiness is auditable.
* The forward omega-limit of (B, t0) evolves B across the trailing window
  and keeps the visited points that recur in the final quarter-window.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, EmptySetError, NumericalFailure
from .process import ProcessHandle
from .setcalc import (
    CompactSetSample,
    SetFamily,
    eps_merge,
    save_set_csv,
    semidist,
)


@dataclass
class LimitSetResult:
    """A computed limit set plus the evidence behind it."""

    kind: str
    sample: CompactSetSample
    window: float
    eps: float
    residual: float
    evidence: dict = field(default_factory=dict)

    @property
    def is_empty(self) -> bool:
        return self.sample.is_empty

    def to_json(self, directory, stem):
        os.makedirs(directory, exist_ok=True)
        csv_name = f"{stem}.csv"
        save_set_csv(self.sample, os.path.join(directory, csv_name))
        def _num(v):
            v = float(v)
            return v if math.isfinite(v) else None

        payload = {
            "kind": self.kind,
            "window": self.window,
            "eps": self.eps,
            "residual": _num(self.residual),
            "points_csv_path": csv_name,
            "empty": self.is_empty,
            "evidence": {k: _num(v) for k, v in self.evidence.items()},
        }
        path = os.path.join(directory, f"{stem}.json")
        with open(path, "w") as f:
            json.dump(payload, f, indent=2, sort_keys=True)
        return path


def _min_dists(candidates: CompactSetSample, section: CompactSetSample) -> np.ndarray:
    """Distance from each candidate point to the section sample."""
    from scipy.spatial.distance import cdist

    d2 = cdist(candidates.tmatrix, section.tmatrix, "sqeuclidean")
    return np.sqrt(d2.min(axis=1))


def _pick_window(p, t0, horizon, window):
    if window is None:
        if p is not None and p.forcing_period:
            window = 4.0 * p.forcing_period
        else:
            window = (horizon - t0) / 4.0
    if horizon - t0 < 3.0 * window:
        raise ContractViolation("need horizon - t0 >= 3 * window")
    return float(window)


def forward_omega(p: ProcessHandle, B: CompactSetSample, t0: float, horizon: float,
                  window: float | None = None, eps: float = 1e-2,
                  n_times: int = 129, budget: int = 9) -> LimitSetResult:
    """Forward omega-limit of (B, t0): recurrent part of the late-time flow.

    B is evolved from t0 to n_times section times across
    [horizon - window, horizon]; the union of sections is eps-merged and a
    candidate survives iff something in the final quarter-window comes back
    within eps of it.
    """
    window = _pick_window(p, t0, horizon, window)
    if B.is_empty:
        raise ContractViolation("forward_omega of an empty sample")
    times = np.linspace(horizon - window, horizon, n_times)
    from .process import evolve_set

    sections = [evolve_set(p, float(t), t0, B, budget) for t in times]
    quarter_start = horizon - window / 4.0
    late = [s for t, s in zip(times, sections) if t >= quarter_start - 1e-12]
    late_cloud = eps_merge([pt for s in late for pt in s.points], 0.0)
    candidates = eps_merge([pt for s in sections for pt in s.points], eps)
    d = _min_dists(candidates, late_cloud)
    keep = d <= eps
    if not np.any(keep):
        raise NumericalFailure(
            f"{p.model_id}: no recurrent points in the final quarter-window "
            f"(min defect {d.min():.3g}); widen the window or horizon",
            last_good_time=horizon,
        )
    kept = CompactSetSample(
        [pt for pt, k in zip(candidates.points, keep) if k], merge_eps=eps
    )
    return LimitSetResult(
        kind="forward-omega",
        sample=kept,
        window=window,
        eps=eps,
        residual=float(d[keep].max()),
        evidence={
            "min_max_defect": float(d.max()),
            "recurrence_window": window / 4.0,
            "n_sections": float(len(sections)),
        },
    )


def _window_sections(family: SetFamily, window: float):
    t_hi = family.times[-1]
    mask = family.times >= t_hi - window - 1e-12
    secs = [s for s, m in zip(family.sections, mask) if m]
    if len(secs) < 4:
        raise ContractViolation("window covers fewer than 4 family sections")
    if any(s.is_empty for s in secs):
        raise EmptySetError("family has empty sections inside the window")
    return [t for t, m in zip(family.times, mask) if m], secs


def omega_limsup(family: SetFamily, window: float, eps: float = 1e-2) -> LimitSetResult:
    """Limsup of the family over its trailing window: all visited points.

    The residual compares the full-window union against the trailing
    half-window union; a small value indicates the window long enough to
    capture the recurrence.
    """
    times, secs = _window_sections(family, window)
    candidates = eps_merge([pt for s in secs for pt in s.points], eps)
    if candidates.is_empty:
        raise NumericalFailure("limsup candidates came out empty")
    half_start = times[-1] - window / 2.0
    late = [s for t, s in zip(times, secs) if t >= half_start - 1e-12]
    late_union = eps_merge([pt for s in late for pt in s.points], eps)
    residual = max(semidist(candidates, late_union), semidist(late_union, candidates))
    return LimitSetResult(
        kind="limsup",
        sample=candidates,
        window=float(window),
        eps=eps,
        residual=float(residual),
        evidence={"n_sections": float(len(secs))},
    )


def omega_liminf(family: SetFamily, window: float, eps: float = 1e-2) -> LimitSetResult:
    """Liminf of the family over its trailing window; may be empty.

    A candidate (from the eps-merged union) survives iff its distance to
    EVERY section in the window is at most eps. Defects are measured against
    the raw sections, not the merged union.
    """
    _, secs = _window_sections(family, window)
    candidates = eps_merge([pt for s in secs for pt in s.points], eps)
    defect = np.zeros(len(candidates))
    for s in secs:
        defect = np.maximum(defect, _min_dists(candidates, s))
    keep = defect <= eps
    kept = CompactSetSample(
        [pt for pt, k in zip(candidates.points, keep) if k], merge_eps=eps
    )
    return LimitSetResult(
        kind="liminf",
        sample=kept,
        window=float(window),
        eps=eps,
        residual=float(defect[keep].max()) if np.any(keep) else float("nan"),
        evidence={
            "min_max_defect": float(defect.min()),
            "n_sections": float(len(secs)),
        },
    )


def a_min(p: ProcessHandle, bounded_sets, t0s, horizon: float,
          window: float | None = None, eps: float = 1e-2,
          n_times: int = 129, budget: int = 9) -> LimitSetResult:
    """Union of forward omega-limits over the supplied (B, t0) pairs.

    Approximates the minimal candidate for a forward attractor: any forward
    attractor must contain every forward omega-limit set.
    """
    bounded_sets = list(bounded_sets)
    t0s = list(t0s)
    if len(bounded_sets) != len(t0s) or not bounded_sets:
        raise ContractViolation("a_min needs aligned, nonempty sets and t0s")
    pieces = []
    residual = 0.0
    evidence = {}
    for i, (B, t0) in enumerate(zip(bounded_sets, t0s)):
        res = forward_omega(p, B, float(t0), horizon, window, eps, n_times, budget)
        pieces.extend(res.sample.points)
        residual = max(residual, res.residual)
        evidence[f"piece_{i}_size"] = float(len(res.sample))
    merged = eps_merge(pieces, eps)
    return LimitSetResult(
        kind="a-min",
        sample=merged,
        window=res.window,
        eps=eps,
        residual=float(residual),
        evidence=evidence,
    )


def forward_boundedness_diagnostic(p: ProcessHandle, B: CompactSetSample, t0: float,
                                   horizon: float, bound: float,
                                   n_times: int = 33, budget: int = 9) -> dict:
    """Check that the forward orbit of B stays inside the norm ball of radius bound.

    Returns the max norm seen, the first violation time (None if none), and
    a pass flag. This is the entry condition every limit-set computation
    assumes.
    """
    from .process import evolve_set
    from .setcalc import _sq_norms

    times = np.linspace(t0, horizon, n_times)
    max_norm = 0.0
    first_violation = None
    for t in times[1:]:
        sec = evolve_set(p, float(t), t0, B, budget)
        norms = np.sqrt(_sq_norms(sec.matrix, sec.norm_tag, sec.h))
        m = float(norms.max())
        max_norm = max(max_norm, m)
        if m > bound and first_violation is None:
            first_violation = float(t)
    return {
        "passed": first_violation is None,
        "max_norm": max_norm,
        "bound": float(bound),
        "first_violation_time": first_violation,
        "notes": (
            "orbit stayed inside the ball"
            if first_violation is None
            else f"norm {max_norm:.6g} exceeded bound {bound:.6g} from t={first_violation:.6g}"
        ),
    }
