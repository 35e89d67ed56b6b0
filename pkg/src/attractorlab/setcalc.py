"""Compact-set representation and Hausdorff (semi)metrics.

Compact sets are represented by finite eps-nets (``CompactSetSample``): a
point cloud plus the merge tolerance it was thinned at. Three norms are
supported, selected by ``norm_tag``:

    abs  scalar absolute value (vector length 1)
    l2   discrete L2 on an interior grid with step h:  ||u||^2 = h sum u_i^2
    h1   discrete V-norm (H1_0 seminorm) with phantom boundary zeros:
         ||u||_V^2 = h sum ((u_{i+1}-u_i)/h)^2

All distances are computed by mapping points into a coordinate system where
the chosen norm is the plain euclidean norm, then running an exhaustive
pairwise max-min scan (the hot kernel).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import ContractViolation, EmptySetError

NORM_TAGS = ("abs", "l2", "h1")


@dataclass(frozen=True, eq=False)
class StatePoint:
    """One state: a real vector with a norm tag and (for grid norms) the step h."""

    values: np.ndarray
    norm_tag: str = "abs"
    h: float | None = None

    def __post_init__(self):
        v = np.atleast_1d(np.asarray(self.values, dtype=float))
        object.__setattr__(self, "values", v)
        if self.norm_tag not in NORM_TAGS:
            raise ContractViolation(f"unknown norm_tag {self.norm_tag!r}")
        # scalar fast path: singleton states dominate branch clouds
        finite = math.isfinite(v[0]) if v.shape == (1,) else bool(np.all(np.isfinite(v)))
        if not finite:
            raise ContractViolation("state contains non-finite entries")
        if self.norm_tag == "abs" and v.shape != (1,):
            raise ContractViolation("norm_tag 'abs' requires a length-1 vector")
        if self.norm_tag in ("l2", "h1") and (self.h is None or self.h <= 0):
            raise ContractViolation("grid norms require a positive step h")

    @property
    def dim(self) -> int:
        return self.values.shape[0]

    def norm(self) -> float:
        return float(np.sqrt(_sq_norms(self.values[None, :], self.norm_tag, self.h)[0]))

    def scalar(self) -> float:
        if self.dim != 1:
            raise ContractViolation("scalar() on a non-scalar state")
        return float(self.values[0])


def _transform(mat: np.ndarray, norm_tag: str, h: float | None) -> np.ndarray:
    """Map rows so the tagged norm becomes the euclidean norm."""
    mat = np.atleast_2d(np.asarray(mat, dtype=float))
    if norm_tag == "abs":
        return mat
    if norm_tag == "l2":
        return np.sqrt(h) * mat
    padded = np.zeros((mat.shape[0], mat.shape[1] + 2))
    padded[:, 1:-1] = mat
    return np.diff(padded, axis=1) / np.sqrt(h)


def _sq_norms(mat, norm_tag, h):
    t = _transform(mat, norm_tag, h)
    return np.sum(t * t, axis=1)


def point_distance(x: StatePoint, y: StatePoint) -> float:
    _check_compatible(x, y)
    tx = _transform(x.values[None, :], x.norm_tag, x.h)
    ty = _transform(y.values[None, :], y.norm_tag, y.h)
    return float(np.linalg.norm(tx[0] - ty[0]))


def _check_compatible(x, y):
    if x.norm_tag != y.norm_tag or x.dim != y.dim:
        raise ContractViolation(
            f"norm/dimension mismatch: ({x.norm_tag},{x.dim}) vs ({y.norm_tag},{y.dim})"
        )


class CompactSetSample:
    """A finite eps-net standing for a compact set.

    ``points`` is an ordered tuple of StatePoint (all sharing norm tag and
    dimension); ``merge_eps`` records the tolerance the cloud was merged at.
    The empty sample (allowed only as a liminf result) is flagged by an empty
    point tuple.
    """

    def __init__(self, points, merge_eps: float = 0.0):
        points = tuple(points)
        if points:
            first = points[0]
            for p in points[1:]:
                _check_compatible(first, p)
        self.points = points
        self.merge_eps = float(merge_eps)
        self._matrix = None
        self._tmatrix = None

    @property
    def is_empty(self) -> bool:
        return not self.points

    def __len__(self):
        return len(self.points)

    @property
    def norm_tag(self):
        return self.points[0].norm_tag if self.points else None

    @property
    def h(self):
        return self.points[0].h if self.points else None

    @property
    def dim(self):
        return self.points[0].dim if self.points else 0

    @property
    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            self._matrix = np.stack([p.values for p in self.points])
        return self._matrix

    @property
    def tmatrix(self) -> np.ndarray:
        """Points mapped to euclidean coordinates for the tagged norm."""
        if self._tmatrix is None:
            self._tmatrix = np.ascontiguousarray(
                _transform(self.matrix, self.norm_tag, self.h)
            )
        return self._tmatrix

    def save_csv(self, path):
        save_set_csv(self, path)

    @classmethod
    def load_csv(cls, path):
        return load_set_csv(path)


@dataclass
class SetFamily:
    """Time-indexed family t -> CompactSetSample on a strictly increasing grid."""

    times: np.ndarray
    sections: list

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if self.times.ndim != 1 or len(self.times) != len(self.sections):
            raise ContractViolation("times and sections must align")
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise ContractViolation("family times must be strictly increasing")
        dims = {s.dim for s in self.sections if not s.is_empty}
        if len(dims) > 1:
            raise ContractViolation("family sections have mixed dimensions")

    def section_at(self, t: float) -> CompactSetSample:
        idx = int(np.argmin(np.abs(self.times - t)))
        if abs(self.times[idx] - t) > 1e-9 * max(1.0, abs(t)):
            raise ContractViolation(f"family has no section at t={t}")
        return self.sections[idx]

    def restrict(self, t_lo: float, t_hi: float) -> "SetFamily":
        mask = (self.times >= t_lo - 1e-12) & (self.times <= t_hi + 1e-12)
        return SetFamily(self.times[mask], [s for s, m in zip(self.sections, mask) if m])

    def save(self, directory, prefix="section"):
        return save_family(self, directory, prefix=prefix)

    @classmethod
    def load(cls, index_path):
        return load_family(index_path)


def semidist(A: CompactSetSample, B: CompactSetSample) -> float:
    """sup over points of A of the distance to B (Hausdorff semidistance)."""
    if A.is_empty or B.is_empty:
        raise EmptySetError("semidist requires nonempty samples")
    if A.norm_tag != B.norm_tag or A.dim != B.dim:
        raise ContractViolation("semidist: norm/dimension mismatch")
    return float(np.sqrt(_kernels.maxmin_sq(A.tmatrix, B.tmatrix)))


def hausdorff(A: CompactSetSample, B: CompactSetSample) -> float:
    """max(semidist(A,B), semidist(B,A))."""
    return max(semidist(A, B), semidist(B, A))


def eps_merge(points, eps: float) -> CompactSetSample:
    """Greedy first-kept thinning in input order.

    A point is kept iff its distance to every previously kept point exceeds
    eps. Deterministic given the input order. Candidates are screened in
    blocks against the already-kept net, so only points that survive the
    vectorized screen enter the sequential scan.
    """
    from scipy.spatial.distance import cdist

    points = list(points)
    if eps < 0:
        raise ContractViolation("eps must be nonnegative")
    if not points:
        return CompactSetSample((), merge_eps=eps)
    first = points[0]
    for p in points[1:]:
        _check_compatible(first, p)
    tmat = _transform(np.stack([p.values for p in points]), first.norm_tag, first.h)
    kept_rows = np.empty_like(tmat)
    kept_idx = []
    nkept = 0
    eps2 = eps * eps
    block = 4096
    for start in range(0, len(points), block):
        rows = tmat[start : start + block]
        if nkept:
            d2 = cdist(rows, kept_rows[:nkept], "sqeuclidean").min(axis=1)
            survivors = np.nonzero(d2 > eps2)[0]
        else:
            survivors = np.arange(len(rows))
        block_base = nkept
        for i in survivors:
            row = rows[i]
            if nkept > block_base:
                d2_new = np.sum((kept_rows[block_base:nkept] - row) ** 2, axis=1)
                if not np.all(d2_new > eps2):
                    continue
            kept_rows[nkept] = row
            kept_idx.append(start + int(i))
            nkept += 1
    return CompactSetSample([points[i] for i in kept_idx], merge_eps=eps)


def interval_hull(A: CompactSetSample):
    """[min, max] of a scalar sample."""
    if A.is_empty:
        raise EmptySetError("interval_hull of an empty sample")
    if A.dim != 1:
        raise ContractViolation("interval_hull requires scalar points")
    vals = A.matrix[:, 0]
    return [float(vals.min()), float(vals.max())]


def scalar_points(values, norm_tag="abs") -> list:
    return [StatePoint(np.array([float(v)]), norm_tag) for v in np.atleast_1d(values)]


def interval_sample(lo: float, hi: float, n: int, merge_eps: float = 0.0) -> CompactSetSample:
    """Uniform scalar sample of [lo, hi] (endpoints included)."""
    if n < 2 and lo != hi:
        raise ContractViolation("interval_sample needs n >= 2")
    vals = np.linspace(lo, hi, max(n, 1))
    return CompactSetSample(scalar_points(vals), merge_eps=merge_eps)


def singleton(value, norm_tag="abs", h=None) -> CompactSetSample:
    arr = np.atleast_1d(np.asarray(value, dtype=float))
    return CompactSetSample([StatePoint(arr, norm_tag, h)], merge_eps=0.0)


# ---------------------------------------------------------------------------
# serialization


def save_set_csv(A: CompactSetSample, path):
    with open(path, "w") as f:
        f.write(f"# norm_tag={A.norm_tag if A.norm_tag else 'none'}\n")
        f.write(f"# merge_eps={A.merge_eps!r}\n")
        f.write(f"# h={A.h!r}\n")
        if A.is_empty:
            f.write("# empty=true\n")
            return
        cols = ",".join(f"x_{i}" for i in range(A.dim))
        f.write(cols + "\n")
        for row in A.matrix:
            f.write(",".join(repr(float(v)) for v in row) + "\n")


def _parse_header(lines):
    meta = {}
    body_start = 0
    for i, line in enumerate(lines):
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition("=")
            meta[key.strip()] = val.strip()
            body_start = i + 1
        else:
            break
    return meta, body_start


def load_set_csv(path) -> CompactSetSample:
    with open(path) as f:
        lines = f.read().splitlines()
    meta, body = _parse_header(lines)
    merge_eps = float(meta.get("merge_eps", "0.0"))
    norm_tag = meta.get("norm_tag", "abs")
    h = None if meta.get("h", "None") in ("None", "none") else float(meta["h"])
    if meta.get("empty") == "true" or body >= len(lines):
        return CompactSetSample((), merge_eps=merge_eps)
    rows = [
        [float(v) for v in line.split(",")] for line in lines[body + 1 :] if line.strip()
    ]
    pts = [StatePoint(np.array(r), norm_tag if norm_tag != "none" else "abs", h) for r in rows]
    return CompactSetSample(pts, merge_eps=merge_eps)


def save_family(fam: SetFamily, directory, prefix="section"):
    """One CSV per section plus a family.json index of {time, path} records."""
    os.makedirs(directory, exist_ok=True)
    records = []
    for i, (t, sec) in enumerate(zip(fam.times, fam.sections)):
        name = f"{prefix}_{i:05d}.csv"
        save_set_csv(sec, os.path.join(directory, name))
        records.append({"time": float(t), "path": name})
    index_path = os.path.join(directory, "family.json")
    with open(index_path, "w") as f:
        json.dump(records, f, indent=2, sort_keys=True)
    return index_path


def load_family(index_path) -> SetFamily:
    directory = os.path.dirname(index_path)
    with open(index_path) as f:
        records = json.load(f)
    times = [r["time"] for r in records]
    sections = [load_set_csv(os.path.join(directory, r["path"])) for r in records]
    return SetFamily(np.asarray(times), sections)
