"""Verifier verdicts, determinism, and theorem-level cross-implications."""

import json
import math

import numpy as np
import pytest

from attractorlab.errors import ContractViolation
from attractorlab.limits import forward_omega, omega_liminf, omega_limsup
from attractorlab.models_scalar import inclusion_attractor, inclusion_handle, linear_invariant_family
from attractorlab.setcalc import SetFamily, interval_sample, semidist, singleton
from attractorlab.verify import (
    ToleranceSchedule,
    VerifierReport,
    tends_to_zero,
    verify_aa_convergence,
    verify_amin,
    verify_asymptotic_equivalence,
    verify_cond_omega0,
    verify_cond_omega_pair,
    verify_forward_attraction,
    verify_invariance,
    verify_pullback_attraction,
)

TWO_PI = 2.0 * math.pi


def _sin_family(times):
    return SetFamily(np.asarray(times, dtype=float),
                     [singleton(0.5 * (math.sin(t) - math.cos(t))) for t in np.asarray(times)])


@pytest.fixture(scope="module")
def aa_bundle(inclusion_aa_model):
    """Shared attractor family, limits, and forward omegas for the AA inclusion."""
    p = inclusion_handle(inclusion_aa_model)
    times = np.linspace(0.0, 28.0, 129)
    fam = SetFamily(times, [inclusion_attractor(inclusion_aa_model, float(t), 1087)
                            for t in times])
    window = 7.0
    sched = ToleranceSchedule(1e-2, np.linspace(7.0, 28.0, 7), budget=5601, eps=5e-3)
    lim_sup = omega_limsup(fam, window, sched.eps)
    lim_inf = omega_liminf(fam, window, sched.eps)
    test_sets = [(interval_sample(-3.0, 3.0, 31), 0.0)]
    fwd = [forward_omega(p, B, t0, 28.0, window, sched.eps, 25, sched.budget)
           for B, t0 in test_sets]
    return dict(p=p, fam=fam, window=window, sched=sched, lim_sup=lim_sup,
                lim_inf=lim_inf, test_sets=test_sets, fwd=fwd)


def test_tends_to_zero_verdicts():
    ok, why = tends_to_zero([1.0, 0.1, 0.01, 1e-4], 1e-3)
    assert ok and why == "converged"
    ok, why = tends_to_zero([1.0, 0.9, 0.8, 0.7], 1e-3)
    assert not ok and "above tol" in why
    # sub-tolerance wiggle in the tail is forgiven by the tolerance floor
    ok, _ = tends_to_zero([1.0, 0.1, 1e-5, 2e-5, 1e-5, 3e-5], 1e-3)
    assert ok
    # a genuine rise inside the settling tail is not
    curve = [1.0, 0.5, 0.3, 0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 1e-4, 0.3, 1e-4]
    ok, why = tends_to_zero(curve, 1e-3)
    assert not ok
    with pytest.raises(ContractViolation):
        tends_to_zero([1.0, 0.5], 1e-3)
    ok, why = tends_to_zero([1.0, 0.1, np.nan, 1e-4], 1e-3)
    assert not ok and "non-finite" in why


def test_schedule_validation():
    with pytest.raises(ContractViolation):
        ToleranceSchedule(1e-3, [1.0])
    with pytest.raises(ContractViolation):
        ToleranceSchedule(1e-3, [1.0, 1.0])
    with pytest.raises(ContractViolation):
        ToleranceSchedule(0.0, [1.0, 2.0])


def test_pullback_and_forward_attraction_on_linear(linear_t_handle, linear_t_model):
    durations = np.linspace(3.0, 30.0, 10)
    fam = linear_invariant_family(linear_t_model, 0.0, np.concatenate(([0.0], durations)))
    sched = ToleranceSchedule(1e-8, durations)
    B = interval_sample(-2.0, 2.0, 9)
    rep = verify_forward_attraction(linear_t_handle, fam, B, 0.0, sched)
    assert rep.passed and rep.margin >= 0.0
    fam5 = linear_invariant_family(linear_t_model, 0.0, [5.0])
    rep = verify_pullback_attraction(linear_t_handle, fam5, B, 5.0, sched)
    assert rep.passed
    assert rep.curve["values"][-1] <= 1e-8


def test_invariance_strict_and_negative(linear_t_handle, linear_t_model,
                                        inclusion_handle_fix, inclusion_model):
    times = np.linspace(0.0, 5.0, 6)
    fam = linear_invariant_family(linear_t_model, 2.0, times)
    sched = ToleranceSchedule(1e-9, times)
    assert verify_invariance(linear_t_handle, fam, "strict", sched).passed
    fam_inc = SetFamily(times, [inclusion_attractor(inclusion_model, float(t), 201)
                                for t in times])
    sched_inc = ToleranceSchedule(2e-2, times, budget=201)
    assert verify_invariance(inclusion_handle_fix, fam_inc, "negative", sched_inc).passed
    with pytest.raises(ContractViolation):
        verify_invariance(linear_t_handle, fam, "sideways", sched)


def test_asymptotic_equivalence_of_forward_attractors(linear_t_model):
    times = np.linspace(2.0, 14.0, 7)
    fam0 = linear_invariant_family(linear_t_model, 0.0, times)
    fam3 = linear_invariant_family(linear_t_model, 3.0, times)
    rep = verify_asymptotic_equivalence(fam0, fam3, ToleranceSchedule(1e-3, times))
    assert rep.passed
    # the section gap is exactly 3 e^{-t}
    for t, v in zip(rep.curve["params"], rep.curve["values"]):
        assert v == pytest.approx(3.0 * math.exp(-t), rel=1e-6)


def test_reports_are_deterministic(linear_t_handle, linear_t_model):
    durations = np.linspace(3.0, 30.0, 10)
    fam = linear_invariant_family(linear_t_model, 0.0, np.concatenate(([0.0], durations)))
    sched = ToleranceSchedule(1e-8, durations)
    B = interval_sample(-2.0, 2.0, 9)
    r1 = verify_forward_attraction(linear_t_handle, fam, B, 0.0, sched)
    r2 = verify_forward_attraction(linear_t_handle, fam, B, 0.0, sched)
    assert r1.to_json() == r2.to_json()


def test_report_json_file(tmp_path):
    rep = VerifierReport("demo", True, {"params": [0.0], "values": [0.5]}, 1.0, 0.5, "n")
    path = tmp_path / "rep.json"
    rep.to_json(path)
    payload = json.loads(path.read_text())
    assert payload["check_id"] == "demo"
    assert payload["margin"] == 0.5


def test_empty_liminf_fails_cond_omega0_and_amin(linear_sin_handle, linear_sin_model):
    # non-necessity example: forward attraction holds, liminf condition fails
    times = np.linspace(0.0, 16.0 * TWO_PI, 1024)
    fam = _sin_family(times)
    sched = ToleranceSchedule(1e-2, np.linspace(2.0, 30.0, 8), eps=5e-3)
    window = 8.0 * TWO_PI
    rep0 = verify_cond_omega0(linear_sin_handle, fam, [(interval_sample(-1.0, 1.0, 9), 0.0)],
                              sched, window=window, n_times=255)
    assert not rep0.passed
    assert "empty" in rep0.notes
    rep_min = verify_amin(linear_sin_handle, fam, [interval_sample(-1.0, 1.0, 9)], [0.0],
                          sched, window=window, n_times=255)
    assert rep_min.passed == rep0.passed
    # while plain forward attraction of the same family passes
    d_times = np.concatenate(([0.0], sched.grid))
    fam_att = _sin_family(d_times)
    rep_fwd = verify_forward_attraction(linear_sin_handle, fam_att,
                                        interval_sample(-1.0, 1.0, 9), 0.0,
                                        ToleranceSchedule(1e-6, sched.grid))
    assert rep_fwd.passed


def test_aa_inclusion_positive_conditions(aa_bundle):
    b = aa_bundle
    limits = (b["lim_sup"], b["lim_inf"], b["window"])
    rep0 = verify_cond_omega0(b["p"], b["fam"], b["test_sets"], b["sched"],
                              limits=limits, forward_results=b["fwd"])
    assert rep0.passed, rep0.notes
    rep_min = verify_amin(b["p"], b["fam"], None, None, b["sched"],
                          limits=limits, forward_results=b["fwd"])
    assert rep_min.passed == rep0.passed
    rep_pair = verify_cond_omega_pair(b["p"], b["fam"], b["test_sets"], b["sched"],
                                      limits=limits, forward_results=b["fwd"])
    assert rep_pair.passed, rep_pair.notes


def test_cross_implications_on_the_aa_inclusion(aa_bundle):
    # liminf condition holding forces forward attraction of the family
    b = aa_bundle
    sched_att = ToleranceSchedule(1e-2, b["sched"].grid, budget=41)
    rep_fwd = verify_forward_attraction(b["p"], b["fam"], b["test_sets"][0][0],
                                        b["test_sets"][0][1], sched_att)
    assert rep_fwd.passed, rep_fwd.notes
    # forward attraction in turn forces the forward-omega inclusion sub-check
    worst = max(semidist(res.sample, b["lim_sup"].sample) for res in b["fwd"])
    assert worst <= b["sched"].tol
