"""Scalar nonautonomous models with closed-form solution operators.

Two model families live here:

* ``LinearModel``: dy/dt = a*y + f(t) with a < 0, solved by variation of
  constants. Its pullback limit is the entire bounded trajectory
  xi(t) = int_{-inf}^t e^{a(t-s)} f(s) ds.

* ``InclusionModel``: du/dt in -lam*u + b(t)*Sgn(u) with b(t) >= b_min > 0
  and Sgn the multivalued sign (Sgn(0) = [-1, 1]). Away from zero solutions
  are unique; from rest at zero the process may stay at rest or depart up or
  down at any instant, so the solution set is parametrized by departure
  times.

Time-dependent coefficients are ``TimeFnSpec`` values with closed-form
variation-of-constants integrals per kind; tabulated forcings fall back to
quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import ContractViolation, UnsupportedModel
from .process import UNIQUE, BranchLabel, ProcessHandle
from .setcalc import (CompactSetSample, SetFamily, StatePoint, interval_sample,
                      scalar_points, singleton)

_KINDS = ("constant", "linear", "sinusoidal", "exp-ramp", "table")


@dataclass(frozen=True)
class TimeFnSpec:
    """Declarative time-dependent coefficient.

    kind        one of constant | linear | sinusoidal | exp-ramp | table
    constant    c(t) = c0
    linear      c(t) = c0 + c1*t
    sinusoidal  c(t) = c0 + c1*sin(nu*t + phi)
    exp-ramp    c(t) = c_inf + c0*exp(-k*t) for t >= 0, frozen at its t=0
                value for t <= 0 (keeps backward integrals convergent)
    table       piecewise-linear interpolation of (times, values)
    """

    kind: str
    params: tuple = ()

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ContractViolation(f"unknown TimeFnSpec kind {self.kind!r}")

    @classmethod
    def constant(cls, c0):
        return cls("constant", (float(c0),))

    @classmethod
    def linear_in_t(cls, c0, c1):
        return cls("linear", (float(c0), float(c1)))

    @classmethod
    def sinusoidal(cls, c0, c1, nu=1.0, phi=0.0):
        if nu <= 0:
            raise ContractViolation("sinusoidal needs nu > 0")
        return cls("sinusoidal", (float(c0), float(c1), float(nu), float(phi)))

    @classmethod
    def exp_ramp(cls, c_inf, c0, k):
        if k <= 0:
            raise ContractViolation("exp-ramp needs decay rate k > 0")
        return cls("exp-ramp", (float(c_inf), float(c0), float(k)))

    @classmethod
    def table(cls, times, values):
        times = tuple(float(t) for t in times)
        values = tuple(float(v) for v in values)
        if len(times) != len(values) or len(times) < 2:
            raise ContractViolation("table needs >= 2 aligned samples")
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ContractViolation("table times must be strictly increasing")
        return cls("table", (times, values))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "constant":
            return np.broadcast_to(self.params[0], t.shape).copy() if t.ndim else float(self.params[0])
        if self.kind == "linear":
            c0, c1 = self.params
            out = c0 + c1 * t
        elif self.kind == "sinusoidal":
            c0, c1, nu, phi = self.params
            out = c0 + c1 * np.sin(nu * t + phi)
        elif self.kind == "exp-ramp":
            c_inf, c0, k = self.params
            out = c_inf + c0 * np.exp(-k * np.maximum(t, 0.0))
        else:
            times, values = self.params
            if np.any(t < times[0] - 1e-12) or np.any(t > times[-1] + 1e-12):
                raise ContractViolation("table evaluated outside its support")
            out = np.interp(t, times, values)
        return out if out.ndim else float(out)

    def bounds(self):
        """(inf, sup) over all real t."""
        if self.kind == "constant":
            c = self.params[0]
            return (c, c)
        if self.kind == "linear":
            c0, c1 = self.params
            if c1 == 0:
                return (c0, c0)
            return (-math.inf, math.inf)
        if self.kind == "sinusoidal":
            c0, c1 = self.params[0], self.params[1]
            return (c0 - abs(c1), c0 + abs(c1))
        if self.kind == "exp-ramp":
            c_inf, c0, _ = self.params
            return (min(c_inf, c_inf + c0), max(c_inf, c_inf + c0))
        values = self.params[1]
        return (min(values), max(values))

    def declared_limit(self):
        """Limit as t -> +inf if this time function pins one down, else None."""
        if self.kind == "constant":
            return self.params[0]
        if self.kind == "exp-ramp":
            return self.params[0]
        if self.kind == "sinusoidal" and self.params[1] == 0:
            return self.params[0]
        if self.kind == "linear" and self.params[1] == 0:
            return self.params[0]
        return None

    @property
    def period(self):
        if self.kind == "sinusoidal" and self.params[1] != 0:
            return 2 * math.pi / self.params[2]
        return None

    def integral(self, a, b):
        """Exact int_a^b of the coefficient (sign-aware if b < a)."""
        if b < a:
            return -self.integral(b, a)
        if self.kind == "constant":
            return self.params[0] * (b - a)
        if self.kind == "linear":
            c0, c1 = self.params
            return c0 * (b - a) + c1 * (b * b - a * a) / 2.0
        if self.kind == "sinusoidal":
            c0, c1, nu, phi = self.params
            return c0 * (b - a) + c1 * (math.cos(nu * a + phi) - math.cos(nu * b + phi)) / nu
        if self.kind == "exp-ramp":
            c_inf, c0, k = self.params
            total = c_inf * (b - a)
            if a < 0:
                total += c0 * (min(b, 0.0) - a)
            if b > 0:
                lo = max(a, 0.0)
                total += c0 * (math.exp(-k * lo) - math.exp(-k * b)) / k
            return total
        # piecewise linear: the trapezoid rule over the knots is exact
        times = self.params[0]
        pts = [a] + [kt for kt in times if a < kt < b] + [b]
        pts = np.asarray(pts)
        return float(np.trapezoid(self(pts), pts))

    def to_dict(self):
        if self.kind == "table":
            times, values = self.params
            return {"kind": "table", "times": list(times), "values": list(values)}
        names = {
            "constant": ("c0",),
            "linear": ("c0", "c1"),
            "sinusoidal": ("c0", "c1", "nu", "phi"),
            "exp-ramp": ("c_inf", "c0", "k"),
        }[self.kind]
        return {"kind": self.kind, **dict(zip(names, self.params))}

    @classmethod
    def from_dict(cls, d):
        kind = d["kind"]
        if kind == "constant":
            return cls.constant(d["c0"])
        if kind == "linear":
            return cls.linear_in_t(d["c0"], d["c1"])
        if kind == "sinusoidal":
            return cls.sinusoidal(d["c0"], d["c1"], d.get("nu", 1.0), d.get("phi", 0.0))
        if kind == "exp-ramp":
            return cls.exp_ramp(d["c_inf"], d["c0"], d["k"])
        if kind == "table":
            return cls.table(d["times"], d["values"])
        raise ContractViolation(f"unknown TimeFnSpec kind {kind!r}")


def _expm1_div(a, dt):
    """(e^{a*dt} - 1)/a, continuous at a = 0."""
    if a == 0:
        return dt
    return math.expm1(a * dt) / a


def voc_integral(a: float, f: TimeFnSpec, t0: float, t: float) -> float:
    """int_{t0}^{t} e^{a(t-s)} f(s) ds, closed form per spec kind."""
    if t == t0:
        return 0.0
    if t < t0:
        raise ContractViolation("voc_integral needs t >= t0")
    dt = t - t0
    if f.kind == "constant":
        return f.params[0] * _expm1_div(a, dt)
    if f.kind == "linear":
        c0, c1 = f.params
        e = _expm1_div(a, dt)
        if a == 0:
            ramp = t * dt - dt * dt / 2.0  # int_0^dt (t-u) du
        else:
            ramp = t * e - (dt * math.exp(a * dt) - e) / a
        return c0 * e + c1 * ramp
    if f.kind == "sinusoidal":
        c0, c1, nu, phi = f.params
        if a == 0 and nu == 0:
            raise ContractViolation("degenerate sinusoid")
        den = a * a + nu * nu
        osc_t = (-a * math.sin(nu * t + phi) - nu * math.cos(nu * t + phi)) / den
        osc_t0 = (-a * math.sin(nu * t0 + phi) - nu * math.cos(nu * t0 + phi)) / den
        return c0 * _expm1_div(a, dt) + c1 * (osc_t - math.exp(a * dt) * osc_t0)
    if f.kind == "exp-ramp":
        c_inf, c0, k = f.params
        if t <= 0:
            return (c_inf + c0) * _expm1_div(a, dt)
        total = c_inf * _expm1_div(a, dt)
        lo = max(t0, 0.0)
        if t0 < 0:
            # frozen region contributes a plain constant c0 on [t0, 0)
            total += c0 * (math.exp(a * (t - lo)) * _expm1_div(a, lo - t0))
        # decaying region on [lo, t]: c0 * e^{at} int e^{-(a+k)s} ds
        if a + k == 0:
            total += c0 * math.exp(-k * t) * (t - lo)
        else:
            total += (
                c0
                * (math.exp(-k * lo + a * (t - lo)) - math.exp(-k * t))
                / (a + k)
            )
        return total
    # table: quadrature with knots as breakpoints
    times = [kt for kt in f.params[0] if t0 < kt < t]
    val, _ = quad(
        lambda s: math.exp(a * (t - s)) * f(s),
        t0,
        t,
        points=times or None,
        limit=200,
        epsabs=1e-12,
        epsrel=1e-12,
    )
    return val


def pullback_integral(a: float, f: TimeFnSpec, t: float) -> float:
    """int_{-inf}^{t} e^{a(t-s)} f(s) ds for a < 0."""
    if a >= 0:
        raise UnsupportedModel("pullback integral needs negative drift")
    if f.kind == "constant":
        return f.params[0] / (-a)
    if f.kind == "linear":
        c0, c1 = f.params
        return (c0 + c1 * t) / (-a) - c1 / (a * a)
    if f.kind == "sinusoidal":
        c0, c1, nu, phi = f.params
        den = a * a + nu * nu
        return c0 / (-a) + c1 * (-a * math.sin(nu * t + phi) - nu * math.cos(nu * t + phi)) / den
    if f.kind == "exp-ramp":
        c_inf, c0, k = f.params
        if t <= 0:
            return (c_inf + c0) / (-a)
        # constant history up to 0, then the ramp on [0, t]
        return (c_inf + c0) * math.exp(a * t) / (-a) + voc_integral(a, f, 0.0, t)
    raise UnsupportedModel("pullback integral undefined for tabulated forcing")


# ---------------------------------------------------------------------------
# linear scalar model


@dataclass(frozen=True)
class LinearModel:
    """dy/dt = drift*y + forcing(t), drift < 0."""

    drift: float
    forcing: TimeFnSpec
    model_id: str = "linear-scalar"

    def __post_init__(self):
        if self.drift >= 0:
            raise UnsupportedModel("linear model needs strictly negative drift")


def linear_solution(m: LinearModel, t: float, t0: float, y0: float) -> float:
    if t < t0:
        raise ContractViolation("linear_solution needs t >= t0")
    return math.exp(m.drift * (t - t0)) * y0 + voc_integral(m.drift, m.forcing, t0, t)


def linear_pullback_trajectory(m: LinearModel, t) -> np.ndarray:
    """xi(t): the unique entire bounded solution (pullback attractor section)."""
    t = np.asarray(t, dtype=float)
    vals = np.array([pullback_integral(m.drift, m.forcing, float(tt)) for tt in np.atleast_1d(t)])
    return vals if t.ndim else float(vals[0])


def linear_invariant_family(m: LinearModel, offset: float, times) -> SetFamily:
    """Singleton family t -> {xi(t) + offset * e^{drift*t}} (entire solution)."""
    times = np.asarray(times, dtype=float)
    secs = [
        singleton(pullback_integral(m.drift, m.forcing, float(t)) + offset * math.exp(m.drift * t))
        for t in times
    ]
    return SetFamily(times, secs)


def linear_handle(m: LinearModel) -> ProcessHandle:
    def evaluator(t, t0, x, budget):
        y = linear_solution(m, t, t0, x.scalar())
        return [(UNIQUE, StatePoint(np.array([y])))]

    return ProcessHandle(
        model_id=m.model_id,
        evaluator=evaluator,
        is_multivalued=False,
        is_autonomous=m.forcing.kind == "constant",
        forcing_period=m.forcing.period,
    )


# ---------------------------------------------------------------------------
# scalar differential inclusion


@dataclass(frozen=True)
class InclusionModel:
    """du/dt in -lam*u + b(t)*Sgn(u), b bounded with positive lower bound."""

    lam: float
    b: TimeFnSpec
    model_id: str = "ode-inclusion"

    def __post_init__(self):
        if self.lam <= 0:
            raise UnsupportedModel("inclusion needs lam > 0")
        lo, hi = self.b.bounds()
        if not (0 < lo <= hi < math.inf):
            raise UnsupportedModel("inclusion needs 0 < inf b <= sup b < inf")


def _departed(m: InclusionModel, r: float, t: float) -> float:
    """u_r^+(t): departs upward from rest at time r (0 for t <= r)."""
    if t <= r:
        return 0.0
    return voc_integral(-m.lam, m.b, r, t)


def inclusion_solution_set(m: InclusionModel, t: float, t0: float, u0: float, budget: int = 9):
    """All selected solutions at t from (t0, u0) as (BranchLabel, value) pairs.

    Nonzero u0 never reaches zero (b > 0 repels from it), so the solution is
    unique. From u0 = 0 the set is {rest} plus up/down departures; departure
    times are sampled on a uniform grid of (budget-1)//2 instants starting
    at t0.
    """
    if t < t0:
        raise ContractViolation("inclusion_solution_set needs t >= t0")
    if u0 > 0:
        val = math.exp(-m.lam * (t - t0)) * u0 + voc_integral(-m.lam, m.b, t0, t)
        return [(UNIQUE, val)]
    if u0 < 0:
        val = math.exp(-m.lam * (t - t0)) * u0 - voc_integral(-m.lam, m.b, t0, t)
        return [(UNIQUE, val)]
    out = [(BranchLabel("zero"), 0.0)]
    n_dep = max((budget - 1) // 2, 1)
    if t == t0:
        departures = [t0]
    else:
        departures = np.linspace(t0, t, n_dep) if n_dep > 1 else np.array([t0])
    for r in departures:
        up = _departed(m, float(r), t)
        out.append((BranchLabel("plus", float(r)), up))
        out.append((BranchLabel("minus", float(r)), -up))
    return out


def inclusion_xi_M(m: InclusionModel, t: float, sign: int = +1) -> float:
    """Extreme entire bounded solutions: xi_M^{+-}(t) bounding the attractor."""
    if sign not in (+1, -1):
        raise ContractViolation("sign must be +1 or -1")
    return sign * pullback_integral(-m.lam, m.b, t)


def inclusion_attractor(m: InclusionModel, t: float, n_points: int = 201) -> CompactSetSample:
    """A(t) = [xi_M^-(t), xi_M^+(t)] as a uniform scalar sample.

    The section always contains the zero entire solution, and the solution
    set through a point is discontinuous exactly at zero data, so the grid
    midpoint is snapped to 0.0 rather than left at linspace roundoff.
    """
    hi = inclusion_xi_M(m, t, +1)
    vals = np.linspace(-hi, hi, max(n_points, 1))
    vals[np.abs(vals) <= 1e-12 * hi] = 0.0
    return CompactSetSample(scalar_points(vals), merge_eps=0.0)


def inclusion_autonomous_limit(m: InclusionModel) -> dict:
    """Limiting autonomous system data when b(t) -> b_inf.

    Returns the fixed points {0, +-b_inf/lam}, a sampler for the limit
    attractor [-b_inf/lam, b_inf/lam], and the upward heteroclinic
    phi_r^+(t) = (b_inf/lam)(1 - e^{-lam(t-r)}) connecting 0 to b_inf/lam.
    """
    b_inf = m.b.declared_limit()
    if b_inf is None:
        raise UnsupportedModel("b(t) declares no limit at t -> +inf")
    top = b_inf / m.lam

    def heteroclinic(r, t, sign=+1):
        if t <= r:
            return 0.0
        return sign * top * -math.expm1(-m.lam * (t - r))

    return {
        "fixed_points": [-top, 0.0, top],
        "attractor_sample": lambda n=201: interval_sample(-top, top, n),
        "heteroclinic": heteroclinic,
        "radius": top,
    }


def inclusion_handle(m: InclusionModel) -> ProcessHandle:
    def evaluator(t, t0, x, budget):
        pairs = inclusion_solution_set(m, t, t0, x.scalar(), budget)
        return [(lbl, StatePoint(np.array([v]))) for lbl, v in pairs]

    return ProcessHandle(
        model_id=m.model_id,
        evaluator=evaluator,
        is_multivalued=True,
        is_autonomous=m.b.kind == "constant",
        forcing_period=m.b.period,
    )
