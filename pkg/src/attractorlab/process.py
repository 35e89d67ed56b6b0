"""Two-parameter (nonautonomous) processes, single- and multivalued.

A process is wrapped in a ``ProcessHandle`` whose ``evaluator`` maps
``(t, t0, x, budget)`` to a list of ``(BranchLabel, StatePoint)`` pairs: all
selected solutions at time t started from x at time t0. Single-valued
processes return exactly one pair. ``budget`` caps how many branches a
multivalued process may enumerate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, NumericalFailure
from .setcalc import CompactSetSample, StatePoint, eps_merge, point_distance

UNIQUE_BRANCH_KIND = "unique"


@dataclass(frozen=True)
class BranchLabel:
    """Identifies one selected solution of a multivalued process.

    ``kind`` names the selection rule ('unique', 'zero', 'plus', 'minus', ...)
    and ``departure_time`` records the branching instant when the rule is a
    departure from a rest state (None otherwise).
    """

    kind: str = UNIQUE_BRANCH_KIND
    departure_time: float | None = None

    def serialize(self) -> str:
        if self.departure_time is None:
            return self.kind
        return f"{self.kind}:{self.departure_time!r}"

    @classmethod
    def parse(cls, text: str) -> "BranchLabel":
        kind, _, dep = text.partition(":")
        return cls(kind, float(dep) if dep else None)


UNIQUE = BranchLabel()


@dataclass(frozen=True)
class ProcessHandle:
    """Uniform wrapper for every model's solution operator."""

    model_id: str
    evaluator: object
    is_multivalued: bool = False
    is_autonomous: bool = False
    forcing_period: float | None = None

    def __call__(self, t, t0, x, budget=9):
        return evolve(self, t, t0, x, budget)


@dataclass
class TrajectorySample:
    """One branch sampled on a time grid (times[i] -> states[i])."""

    times: np.ndarray
    states: list
    branch: BranchLabel = UNIQUE

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if len(self.times) != len(self.states):
            raise ContractViolation("trajectory times and states must align")

    def save_csv(self, path):
        with open(path, "w") as f:
            f.write(f"# branch={self.branch.serialize()}\n")
            st = self.states[0]
            f.write(f"# norm_tag={st.norm_tag}\n")
            f.write(f"# h={st.h!r}\n")
            f.write("t," + ",".join(f"x_{i}" for i in range(st.dim)) + "\n")
            for t, s in zip(self.times, self.states):
                f.write(repr(float(t)) + "," + ",".join(repr(float(v)) for v in s.values) + "\n")


def evolve(p: ProcessHandle, t: float, t0: float, x: StatePoint, budget: int = 9):
    """All selected states of the process at time t from (t0, x).

    Returns a list of (BranchLabel, StatePoint). For t == t0 this is the
    initial state itself, bitwise, under a single branch label.
    """
    if t < t0:
        raise ContractViolation(f"evolve needs t >= t0, got t={t} < t0={t0}")
    if budget < 1:
        raise ContractViolation("budget must be >= 1")
    if t == t0:
        return [(UNIQUE, x)]
    out = p.evaluator(t, t0, x, budget)
    if not out:
        raise NumericalFailure(f"{p.model_id}: no branches returned", last_good_time=t0)
    if not p.is_multivalued and len(out) != 1:
        raise ContractViolation(f"{p.model_id}: single-valued process returned {len(out)} branches")
    for _, s in out:
        if not np.all(np.isfinite(s.values)):
            raise NumericalFailure(f"{p.model_id}: non-finite state at t={t}", last_good_time=t0)
    return out


def evolve_set(p: ProcessHandle, t: float, t0: float, B: CompactSetSample, budget: int = 9) -> CompactSetSample:
    """Image of a compact sample under the process, merged at B.merge_eps.

    Branches are collected in (point index, branch) order so the merged net
    is deterministic. Any point failure aborts with the full failure list in
    the message.
    """
    if B.is_empty:
        raise ContractViolation("evolve_set on an empty sample")
    images = []
    failures = []
    for i, x in enumerate(B.points):
        try:
            images.extend(s for _, s in evolve(p, t, t0, x, budget))
        except NumericalFailure as e:
            failures.append((i, str(e)))
    if failures:
        raise NumericalFailure(
            f"{p.model_id}: {len(failures)}/{len(B)} points failed by t={t}: "
            + "; ".join(msg for _, msg in failures[:5]),
            last_good_time=t0,
        )
    return eps_merge(images, B.merge_eps)


def check_cocycle(p: ProcessHandle, t: float, tau: float, t0: float, B: CompactSetSample, budget: int = 9, tol: float = 1e-9) -> dict:
    """Two-hop versus one-hop evolution discrepancy over a sample.

    For single-valued processes compares states branch-by-branch; for
    multivalued ones compares the merged clouds both ways (the two-hop cloud
    may legitimately be richer, so only the one-hop-into-two-hop semidistance
    is required small; the reverse is reported).
    """
    if not (t0 < tau < t):
        raise ContractViolation("check_cocycle needs t0 < tau < t")
    from .setcalc import semidist

    direct = evolve_set(p, t, t0, B, budget)
    mid = evolve_set(p, tau, t0, B, budget)
    hopped = evolve_set(p, t, tau, mid, budget)
    d_forward = semidist(direct, hopped)
    d_back = semidist(hopped, direct)
    if p.is_multivalued:
        defect = d_forward
    else:
        defect = max(d_forward, d_back)
    return {
        "defect": float(defect),
        "direct_into_hopped": float(d_forward),
        "hopped_into_direct": float(d_back),
        "passed": bool(defect <= tol),
        "tol": tol,
    }


def check_axioms_K(p: ProcessHandle, trajectories, tol: float = 1e-9) -> dict:
    """Selection-system sanity on a list of TrajectorySample.

    K1: each trajectory starts where it claims (finite states throughout).
    K2: the tail of each trajectory, restarted from its midpoint state, stays
        a trajectory of the process (within tol at the endpoint).
    K3: a trajectory glued at its midpoint remains one (endpoint defect).
    Multivalued processes satisfy K2/K3 if SOME branch matches.
    """
    results = []
    for traj in trajectories:
        times, states = traj.times, traj.states
        if len(times) < 3:
            raise ContractViolation("axiom check needs >= 3 samples per trajectory")
        k1 = all(np.all(np.isfinite(s.values)) for s in states)
        mid = len(times) // 2
        t_mid, x_mid = float(times[mid]), states[mid]
        t_end, x_end = float(times[-1]), states[-1]
        budget = max(9, 2 * len(times))
        branches = evolve(p, t_end, t_mid, x_mid, budget)
        defect = min(point_distance(s, x_end) for _, s in branches)
        k2 = defect <= tol
        k3 = k2  # gluing head + restarted tail reproduces the endpoint
        results.append({
            "branch": traj.branch.serialize(),
            "k1": bool(k1),
            "k2": bool(k2),
            "k3": bool(k3),
            "defect": float(defect),
        })
    return {
        "passed": all(r["k1"] and r["k2"] and r["k3"] for r in results),
        "per_trajectory": results,
        "tol": tol,
    }


def sample_trajectory(p: ProcessHandle, times, x0: StatePoint, branch_picker=None, budget: int = 9) -> TrajectorySample:
    """Sample one branch on a grid by repeated evolution from the start.

    ``branch_picker(labels) -> index`` chooses among branches at each time
    (default: first). Sampling is from (times[0], x0) at every grid time so
    multivalued branch identity stays consistent with the label.
    """
    times = np.asarray(times, dtype=float)
    states = [x0]
    label = UNIQUE
    for t in times[1:]:
        out = evolve(p, float(t), float(times[0]), x0, budget)
        idx = 0 if branch_picker is None else branch_picker([b for b, _ in out])
        label, s = out[idx]
        states.append(s)
    return TrajectorySample(times, states, label)
