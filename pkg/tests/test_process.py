"""Process axioms: identity, cocycle, budget monotonicity, branch labels."""

import numpy as np
import pytest

from attractorlab.errors import ContractViolation, NumericalFailure
from attractorlab.models_scalar import InclusionModel, TimeFnSpec, inclusion_handle
from attractorlab.process import (
    UNIQUE,
    BranchLabel,
    ProcessHandle,
    TrajectorySample,
    check_axioms_K,
    check_cocycle,
    evolve,
    evolve_set,
    sample_trajectory,
)
from attractorlab.setcalc import CompactSetSample, StatePoint, interval_hull, singleton


def _state(v):
    return StatePoint(np.array([float(v)]))


def test_identity_is_bitwise(linear_t_handle, inclusion_handle_fix, chafee_handle_fix,
                             parabolic_handle_fix, chafee_model):
    x = _state(0.37)
    for p in (linear_t_handle, inclusion_handle_fix):
        out = evolve(p, 2.0, 2.0, x, budget=7)
        assert len(out) == 1
        assert out[0][0] == UNIQUE
        assert out[0][1] is x
    u = StatePoint(0.3 * np.sin(chafee_model.grid.x), "l2", chafee_model.grid.h)
    for p in (chafee_handle_fix, parabolic_handle_fix):
        out = evolve(p, 1.0, 1.0, u, budget=5)
        assert out[0][1] is u


def test_evolve_argument_validation(linear_t_handle):
    with pytest.raises(ContractViolation):
        evolve(linear_t_handle, 0.0, 1.0, _state(0.0))
    with pytest.raises(ContractViolation):
        evolve(linear_t_handle, 1.0, 0.0, _state(0.0), budget=0)


def test_single_valued_contract_enforced():
    bad = ProcessHandle(
        model_id="two-faced",
        evaluator=lambda t, t0, x, budget: [(UNIQUE, x), (UNIQUE, x)],
    )
    with pytest.raises(ContractViolation):
        evolve(bad, 1.0, 0.0, _state(0.0))


def test_non_finite_branch_fails():
    inf_state = StatePoint(np.array([1.0]))
    object.__setattr__(inf_state, "values", np.array([np.inf]))
    bad = ProcessHandle(
        model_id="exploder",
        evaluator=lambda t, t0, x, budget: [(UNIQUE, inf_state)],
    )
    with pytest.raises(NumericalFailure):
        evolve(bad, 1.0, 0.0, _state(0.0))


def test_budget_growth_never_shrinks_hull(inclusion_handle_fix):
    # larger budgets refine the branch set; the image hull only widens
    x = _state(0.0)
    hulls = []
    for budget in (3, 5, 9, 17, 33):
        img = CompactSetSample([s for _, s in evolve(inclusion_handle_fix, 4.0, 0.0, x, budget)])
        hulls.append(interval_hull(img))
    for (lo1, hi1), (lo2, hi2) in zip(hulls[:-1], hulls[1:]):
        assert lo2 <= lo1 + 1e-12
        assert hi2 >= hi1 - 1e-12
    # extreme departures (t0 and t, both signs) survive every budget
    for budget in (3, 5, 9, 17, 33):
        labels = {b.serialize() for b, _ in evolve(inclusion_handle_fix, 4.0, 0.0, x, budget)}
        assert {"zero", "plus:0.0", "minus:0.0"} <= labels


def test_positive_data_is_single_valued(inclusion_handle_fix):
    for budget in (1, 5, 33):
        out = evolve(inclusion_handle_fix, 5.0, 0.0, _state(0.5), budget)
        assert len(out) == 1 and out[0][0] == UNIQUE
        out = evolve(inclusion_handle_fix, 5.0, 0.0, _state(-0.5), budget)
        assert len(out) == 1 and out[0][0] == UNIQUE


def test_autonomous_shift_invariance(chafee_model, parabolic_model):
    from attractorlab.models_pde import chafee_handle, parabolic_handle
    from attractorlab.models_scalar import inclusion_handle as ih

    pc = chafee_handle(chafee_model)
    pp = parabolic_handle(parabolic_model)
    pi = ih(InclusionModel(1.0, TimeFnSpec.constant(2.0)))
    assert pc.is_autonomous and pp.is_autonomous and pi.is_autonomous
    u = StatePoint(0.4 * np.sin(chafee_model.grid.x), "l2", chafee_model.grid.h)
    a = evolve(pc, 1.5, 0.0, u)[0][1]
    b = evolve(pc, 4.5, 3.0, u)[0][1]
    assert np.max(np.abs(a.values - b.values)) <= 1e-9
    xa = evolve(pi, 2.0, 0.0, _state(0.7))[0][1].scalar()
    xb = evolve(pi, 9.0, 7.0, _state(0.7))[0][1].scalar()
    assert abs(xa - xb) <= 1e-9


def test_cocycle_linear(linear_t_handle, linear_sin_handle):
    B = CompactSetSample([_state(v) for v in (-1.0, 0.0, 2.0)])
    for p in (linear_t_handle, linear_sin_handle):
        res = check_cocycle(p, 3.0, 1.2, 0.0, B, tol=1e-9)
        assert res["passed"], res


def test_cocycle_chafee(chafee_handle_fix, chafee_model):
    g = chafee_model.grid
    B = CompactSetSample([StatePoint(0.5 * np.sin(g.x), "l2", g.h),
                          StatePoint(-0.2 * np.sin(2 * g.x), "l2", g.h)])
    # dt-aligned hop times keep the discrete stepping an exact cocycle
    res = check_cocycle(chafee_handle_fix, 1.0, 0.5, 0.0, B, tol=1e-9)
    assert res["passed"], res


def test_cocycle_inclusion(inclusion_handle_fix):
    # odd departure-grid size nests the [t0, tau] grid inside [t0, t]
    B = CompactSetSample([_state(0.0)])
    res = check_cocycle(inclusion_handle_fix, 2.0, 1.0, 0.0, B, budget=9, tol=1e-9)
    assert res["passed"], res


def test_cocycle_parabolic(parabolic_handle_fix, parabolic_model):
    g = parabolic_model.grid
    B = CompactSetSample([StatePoint(np.zeros(g.n_interior), "l2", g.h)])
    res = check_cocycle(parabolic_handle_fix, 0.64, 0.32, 0.0, B, budget=3, tol=1e-9)
    assert res["passed"], res


def test_cocycle_rejects_bad_times(linear_t_handle):
    B = CompactSetSample([_state(0.0)])
    with pytest.raises(ContractViolation):
        check_cocycle(linear_t_handle, 1.0, 2.0, 0.0, B)


def test_axioms_k_on_trajectories(linear_sin_handle, inclusion_handle_fix):
    times = np.linspace(0.0, 6.0, 13)
    tr1 = sample_trajectory(linear_sin_handle, times, _state(1.0))
    res = check_axioms_K(linear_sin_handle, [tr1], tol=1e-9)
    assert res["passed"], res
    tr2 = sample_trajectory(inclusion_handle_fix, times, _state(0.25))
    res = check_axioms_K(inclusion_handle_fix, [tr2], tol=1e-9)
    assert res["passed"], res


def test_evolve_set_merges_at_sample_eps(linear_sin_handle):
    B = CompactSetSample([_state(v) for v in np.linspace(-0.001, 0.001, 7)],
                         merge_eps=0.5)
    img = evolve_set(linear_sin_handle, 8.0, 0.0, B)
    assert len(img) == 1   # contraction pulls everything inside one merge ball
    assert img.merge_eps == 0.5


def test_evolve_set_rejects_empty(linear_sin_handle):
    with pytest.raises(ContractViolation):
        evolve_set(linear_sin_handle, 1.0, 0.0, CompactSetSample([]))


def test_branch_label_roundtrip():
    for lbl in (UNIQUE, BranchLabel("plus", 0.0), BranchLabel("minus", 2.718281828459045)):
        assert BranchLabel.parse(lbl.serialize()) == lbl


def test_trajectory_sample_validation():
    with pytest.raises(ContractViolation):
        TrajectorySample(np.array([0.0, 1.0]), [_state(0.0)])


def test_trajectory_csv_header(tmp_path, linear_t_handle):
    tr = sample_trajectory(linear_t_handle, np.linspace(0.0, 1.0, 5), _state(0.0))
    path = tmp_path / "tr.csv"
    tr.save_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "# branch=unique"
    assert lines[3] == "t,x_0"
    assert len(lines) == 4 + 5
