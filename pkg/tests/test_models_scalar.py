"""Closed-form scalar models checked against direct quadrature."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from attractorlab.errors import ContractViolation
from attractorlab.models_scalar import (
    InclusionModel,
    LinearModel,
    TimeFnSpec,
    inclusion_attractor,
    inclusion_autonomous_limit,
    inclusion_solution_set,
    inclusion_xi_M,
    linear_invariant_family,
    linear_pullback_trajectory,
    linear_solution,
    pullback_integral,
    voc_integral,
)
from attractorlab.process import evolve
from attractorlab.setcalc import StatePoint, interval_hull


SPECS = [
    TimeFnSpec.constant(1.5),
    TimeFnSpec.linear_in_t(0.0, 1.0),
    TimeFnSpec.sinusoidal(2.0, 1.0),
    TimeFnSpec.sinusoidal(0.0, 1.0, nu=3.0, phi=0.7),
    TimeFnSpec.exp_ramp(2.0, 1.0, 1.0),
    TimeFnSpec.table([0.0, 1.0, 2.5], [2.0, 3.0, 2.5]),
]


@pytest.mark.parametrize("spec", SPECS, ids=[s.kind + str(i) for i, s in enumerate(SPECS)])
@pytest.mark.parametrize("a,b", [(0.0, 2.0), (0.3, 2.2), (1.0, 1.0)])
def test_timefn_integral_matches_quadrature(spec, a, b):
    ref, err = quad(spec, a, b, limit=200)
    assert abs(spec.integral(a, b) - ref) <= max(1e-10, 10 * err)


def test_exp_ramp_frozen_for_nonpositive_time():
    r = TimeFnSpec.exp_ramp(2.0, 1.0, 1.0)
    assert r(-5.0) == r(0.0) == 3.0
    assert r(1.0) == pytest.approx(2.0 + math.exp(-1.0), abs=1e-15)
    assert r.declared_limit() == 2.0


def test_timefn_roundtrip_and_validation():
    for spec in SPECS:
        back = TimeFnSpec.from_dict(spec.to_dict())
        assert back == spec
    with pytest.raises(ContractViolation):
        TimeFnSpec("nonsense", ())
    with pytest.raises(ContractViolation):
        TimeFnSpec.table([1.0, 0.0], [1.0, 2.0])
    assert TimeFnSpec.sinusoidal(2.0, 1.0, nu=2.0).period == pytest.approx(math.pi)
    assert TimeFnSpec.constant(1.0).period is None


@pytest.mark.parametrize("spec", [TimeFnSpec.sinusoidal(0.0, 1.0), TimeFnSpec.exp_ramp(2.0, 1.0, 1.0)])
@pytest.mark.parametrize("lam", [0.5, 1.0])
def test_voc_integral_matches_quadrature(spec, lam, subtests=None):
    for t0, t in [(0.0, 3.0), (-2.0, 1.5)]:
        ref, err = quad(lambda s: math.exp(-lam * (t - s)) * spec(s), t0, t, limit=200)
        assert abs(voc_integral(-lam, spec, t0, t) - ref) <= max(1e-9, 10 * err)


def test_pullback_integral_matches_truncated_quadrature():
    spec = TimeFnSpec.sinusoidal(2.0, 1.0)
    lam, t = 1.0, 1.2
    ref, _ = quad(lambda s: math.exp(-lam * (t - s)) * spec(s), t - 60.0, t, limit=400)
    assert abs(pullback_integral(-lam, spec, t) - ref) <= 1e-9


def test_linear_drifting_solution_closed_form():
    m = LinearModel(-1.0, TimeFnSpec.linear_in_t(0.0, 1.0))
    for t0, y0, t in [(0.0, 0.0, 1.0), (-3.0, 2.0, 4.0)]:
        ref = t - 1.0 + (y0 - (t0 - 1.0)) * math.exp(-(t - t0))
        assert abs(linear_solution(m, t, t0, y0) - ref) <= 1e-12
    # the t-1 line is the unique bounded complete trajectory
    assert linear_solution(m, 7.0, -40.0, -41.0) == pytest.approx(6.0, abs=1e-12)


def test_linear_sin_entire_solution_is_invariant(linear_sin_model):
    a = lambda t: 0.5 * (math.sin(t) - math.cos(t))
    for t0, t in [(0.0, 1.0), (2.0, 9.5), (-4.0, 4.0)]:
        assert abs(linear_solution(linear_sin_model, t, t0, a(t0)) - a(t)) <= 1e-12


def test_linear_pullback_trajectory_converges(linear_t_model, linear_sin_model):
    ts = np.array([0.0, 5.0])
    vals = linear_pullback_trajectory(linear_t_model, ts)
    assert np.max(np.abs(vals - (ts - 1.0))) <= 1e-8
    ts = np.linspace(0.0, 4.0, 9)
    vals = linear_pullback_trajectory(linear_sin_model, ts)
    ref = 0.5 * (np.sin(ts) - np.cos(ts))
    assert np.max(np.abs(vals - ref)) <= 1e-8


def test_linear_invariant_family_is_strictly_invariant(linear_t_handle, linear_t_model):
    times = np.linspace(0.0, 6.0, 7)
    fam = linear_invariant_family(linear_t_model, 3.0, times)
    for t1, t2 in zip(times[:-1], times[1:]):
        x = fam.section_at(t1).points[0]
        y = evolve(linear_t_handle, float(t2), float(t1), x)[0][1]
        assert abs(y.scalar() - fam.section_at(t2).points[0].scalar()) <= 1e-9


def test_xi_m_sinusoidal_formula(inclusion_model):
    for t in np.linspace(0.0, 12.0, 25):
        ref = 2.0 + 0.5 * math.sin(t) - 0.5 * math.cos(t)
        assert abs(inclusion_xi_M(inclusion_model, float(t)) - ref) <= 1e-8
        assert abs(inclusion_xi_M(inclusion_model, float(t), sign=-1) + ref) <= 1e-8


def test_xi_m_exp_ramp_formula(inclusion_aa_model):
    for t in np.linspace(0.0, 20.0, 11):
        ref = 2.0 + (1.0 + t) * math.exp(-t)
        assert abs(inclusion_xi_M(inclusion_aa_model, float(t)) - ref) <= 1e-8


@pytest.mark.parametrize("name", ["ode-inclusion", "ode-inclusion-aa"])
def test_xi_m_is_a_complete_trajectory(name):
    from attractorlab import scenarios

    m = scenarios.build_model(name)
    for s, t in [(0.0, 2.0), (1.5, 7.0), (3.0, 3.5)]:
        propagated = math.exp(-m.lam * (t - s)) * inclusion_xi_M(m, s) + voc_integral(-m.lam, m.b, s, t)
        assert abs(propagated - inclusion_xi_M(m, t)) <= 1e-9


def test_branches_stay_inside_the_attractor_bounds(inclusion_model):
    t = 6.0
    xi_hi = inclusion_xi_M(inclusion_model, t)
    for label, v in inclusion_solution_set(inclusion_model, t, 0.0, 0.0, budget=21):
        assert -xi_hi - 1e-9 <= v <= xi_hi + 1e-9
        if label.kind == "plus":
            assert v >= -1e-9
        if label.kind == "minus":
            assert v <= 1e-9


def test_heteroclinic_gap_decays_at_rate_lambda(inclusion_model):
    # gap to xi_M+ after departing at r is exp(-lam (t - r)) * xi_M+(r)
    ts = np.linspace(3.0, 9.0, 13)
    gaps = []
    for t in ts:
        branches = inclusion_solution_set(inclusion_model, float(t), 0.0, 0.0, budget=3)
        plus_r = [v for lbl, v in branches
                  if lbl.kind == "plus" and lbl.departure_time == 0.0]
        gaps.append(inclusion_xi_M(inclusion_model, float(t)) - plus_r[0])
    slope = np.polyfit(ts, np.log(gaps), 1)[0]
    assert abs(slope + inclusion_model.lam) <= 0.05 * inclusion_model.lam


def test_xi_m_converges_to_autonomous_fixed_points(inclusion_aa_model):
    lim = inclusion_autonomous_limit(inclusion_aa_model)
    hi = lim["fixed_points"][-1]
    assert abs(inclusion_xi_M(inclusion_aa_model, 30.0) - hi) <= 1e-9
    assert abs(inclusion_xi_M(inclusion_aa_model, 30.0, sign=-1) + hi) <= 1e-9


def test_inclusion_attractor_hull_is_xi_interval(inclusion_model):
    t = 4.0
    A = inclusion_attractor(inclusion_model, t, n_points=51)
    lo, hi = interval_hull(A)
    assert hi == pytest.approx(inclusion_xi_M(inclusion_model, t), abs=1e-12)
    assert lo == pytest.approx(inclusion_xi_M(inclusion_model, t, sign=-1), abs=1e-12)
    assert len(A) == 51


def test_autonomous_limit_sample_hull(inclusion_aa_model):
    lim = inclusion_autonomous_limit(inclusion_aa_model)
    assert lim["fixed_points"] == [-2.0, 0.0, 2.0]
    assert lim["radius"] == 2.0
    sample = lim["attractor_sample"](21)
    assert interval_hull(sample) == [-2.0, 2.0]
