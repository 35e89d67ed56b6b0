"""Dissipative PDE models: schemes, equilibria, extremal solutions, estimates."""

import math

import numpy as np
import pytest

from attractorlab.errors import ContractViolation, NumericalFailure, UnsupportedModel
from attractorlab.models_pde import (
    ChafeeModel,
    Grid1D,
    ParabolicInclusionModel,
    chafee_attractor_sample,
    chafee_autonomous_equilibria,
    chafee_energy_check,
    chafee_heteroclinic_rate,
    chafee_ic_bank,
    chafee_order_check,
    chafee_solve,
    chafee_xi_M,
    parabolic_autonomous_attractor,
    parabolic_decay_check,
    parabolic_march_snapshots,
    parabolic_solve,
    parabolic_solver_matching,
    parabolic_stationary,
    parabolic_xi_M,
)
from attractorlab.models_scalar import TimeFnSpec
from attractorlab.process import BranchLabel
from attractorlab.setcalc import hausdorff, semidist, singleton


def _l2(m, u):
    return math.sqrt(m.grid.l2_norm_sq(u))


@pytest.fixture(scope="module")
def chafee_eq(chafee_model):
    return chafee_autonomous_equilibria(chafee_model)


# ---------------------------------------------------------------------------
# grids and model validation


def test_grid_eigenvalues_and_validation():
    g = Grid1D(math.pi, 127)
    assert abs(g.lambda1 - 1.0) < 2e-4
    assert abs(g.eigenvalue(2) - 4.0) < 1e-2
    gu = Grid1D(1.0, 127)
    assert 0 < gu.lambda1 < math.pi**2
    with pytest.raises(ContractViolation):
        Grid1D(math.pi, 10)
    with pytest.raises(ContractViolation):
        Grid1D(0.0, 127)


@pytest.mark.parametrize("lam", [0.5, 5.0])
def test_chafee_rejects_lambda_outside_spectral_gap(lam):
    with pytest.raises(UnsupportedModel):
        ChafeeModel(lam, TimeFnSpec.constant(1.0), Grid1D(math.pi, 127))


@pytest.mark.parametrize(
    "bad",
    [
        dict(b=TimeFnSpec.constant(0.0)),
        dict(b=TimeFnSpec.constant(-1.0)),
        dict(dt=0.02),
    ],
)
def test_chafee_rejects_bad_forcing_or_step(bad):
    kw = dict(lam=2.0, b=TimeFnSpec.constant(1.0), grid=Grid1D(math.pi, 127))
    kw.update(bad)
    with pytest.raises(UnsupportedModel):
        ChafeeModel(**kw)


@pytest.mark.parametrize(
    "bad",
    [
        dict(omega=TimeFnSpec.constant(10.0)),
        dict(omega=TimeFnSpec.constant(-0.5)),
        dict(b=TimeFnSpec.constant(0.0)),
        dict(dt=0.02),
    ],
)
def test_parabolic_rejects_bad_coefficients(bad):
    kw = dict(b=TimeFnSpec.constant(2.0), omega=TimeFnSpec.constant(0.0),
              grid=Grid1D(1.0, 127))
    kw.update(bad)
    with pytest.raises(UnsupportedModel):
        ParabolicInclusionModel(**kw)


def test_span_and_snapshot_grid_checks(chafee_model):
    m = chafee_model
    zero = np.zeros(m.grid.n_interior)
    with pytest.raises(ContractViolation):
        chafee_solve(m, 0.0012, 0.0, zero)
    with pytest.raises(ContractViolation):
        chafee_solve(m, -1.0, 0.0, zero)
    with pytest.raises(ContractViolation):
        chafee_solve(m, 1.0, 0.0, zero, snapshot_times=[0.0012])
    with pytest.raises(ContractViolation):
        chafee_solve(m, 1.0, 0.0, zero, snapshot_times=[2.0])
    with pytest.raises(ContractViolation):
        chafee_solve(m, 1.0, 0.0, np.zeros(5))


# ---------------------------------------------------------------------------
# Chafee: equilibria and linearized dynamics


def test_equilibria_solve_stationary_equation(chafee_model, chafee_eq):
    eq = chafee_eq
    assert eq["residual"] <= 1e-10
    assert np.all(eq["plus"] > 0)
    assert np.array_equal(eq["minus"], -eq["plus"])
    assert not eq["zero"].any()
    # fixed point of the march, not just of the continuous equation
    drift = _l2(chafee_model, chafee_solve(chafee_model, 1.0, 0.0, eq["plus"])
                - eq["plus"])
    assert drift <= 1e-10


def test_equilibrium_amplitude_scales_inversely_with_sqrt_b(chafee_model, chafee_eq):
    m4 = ChafeeModel(2.0, TimeFnSpec.constant(4.0), chafee_model.grid)
    eq4 = chafee_autonomous_equilibria(m4)
    assert _l2(chafee_model, eq4["plus"] - 0.5 * chafee_eq["plus"]) <= 1e-8


def test_equilibrium_norm_converges_at_second_order():
    norms = {}
    for n in (63, 127, 255):
        g = Grid1D(math.pi, n)
        m = ChafeeModel(2.0, TimeFnSpec.constant(1.0), g)
        norms[n] = math.sqrt(g.l2_norm_sq(chafee_autonomous_equilibria(m)["plus"]))
    rich = (4.0 * norms[255] - norms[127]) / 3.0
    ratio = abs(norms[63] - rich) / abs(norms[127] - rich)
    assert 3.5 <= ratio <= 4.5


@pytest.mark.parametrize("lam", [2.0, 1.5])
def test_escape_rate_matches_linearization(lam):
    m = ChafeeModel(lam, TimeFnSpec.constant(1.0), Grid1D(math.pi, 127))
    rate = chafee_heteroclinic_rate(m)
    assert abs(rate - (lam - 1.0)) <= 0.1 * (lam - 1.0)
    # per-step growth factor of the scheme linearized at zero
    discrete = -math.log(1.0 - m.dt * (lam - m.grid.lambda1)) / m.dt
    assert abs(rate - discrete) <= 1e-3


def test_escape_rate_independent_of_seed_amplitude(chafee_model):
    r6 = chafee_heteroclinic_rate(chafee_model, eps0=1e-6)
    r7 = chafee_heteroclinic_rate(chafee_model, eps0=1e-7)
    assert abs(r6 - r7) <= 0.02 * abs(r7)


def test_zero_initial_field_stays_at_rest(chafee_model):
    out = chafee_solve(chafee_model, 2.0, 0.0, np.zeros(chafee_model.grid.n_interior))
    assert not out.any()


def test_small_data_grows_then_saturates(chafee_model, chafee_eq):
    m = chafee_model
    u0 = 0.1 * np.sin(m.grid.x)
    run = chafee_solve(m, 10.0, 0.0, u0, snapshot_times=np.arange(0.0, 10.01, 0.25))
    norms = np.sqrt(run["l2_sq"])
    early = (norms >= 0.2) & (norms <= 0.5)
    slope = np.polyfit(run["times"][early], np.log(norms[early]), 1)[0]
    assert abs(slope - (m.lam - 1.0)) <= 0.1 * (m.lam - 1.0)
    assert abs(norms[-1] - _l2(m, chafee_eq["plus"])) <= 1e-3
    assert abs(norms[-1] - norms[-5]) <= 1e-4


# ---------------------------------------------------------------------------
# Chafee: energy and order estimates


def test_energy_inequality_holds_per_step_on_ic_bank(chafee_model):
    for u0 in chafee_ic_bank(chafee_model, 12):
        res = chafee_energy_check(chafee_model, u0, 0.0, 10.0)
        assert res["passed"], res["worst_margin"]
        assert res["n_steps"] == 2000


def test_vnorm_ball_absorbs_and_persists(chafee_model):
    m = chafee_model
    _, r1sq = m.absorbing_radii()
    step_times = np.arange(0.0, 10.0 + 1e-12, m.dt)
    for u0 in chafee_ic_bank(m, 12):
        run = chafee_solve(m, 10.0, 0.0, u0, snapshot_times=step_times)
        inside = np.nonzero(run["v_sq"] <= r1sq)[0]
        assert inside.size and run["times"][inside[0]] <= 1.0
        assert float(run["v_sq"][inside[0]:].max()) <= r1sq


def test_order_interval_at_extremal_solutions_persists(chafee_model):
    m = chafee_model
    xi = chafee_xi_M(m, 0.0)
    u0 = 0.57 * np.sin(2 * m.grid.x)
    for lo, hi in ((u0, xi), (-xi, u0)):
        res = chafee_order_check(m, lo, hi, 0.0, 10.0)
        assert res["min_gap"] >= -1e-8
        assert res["in_monotone_regime"]
    with pytest.raises(ContractViolation):
        chafee_order_check(m, xi, u0, 0.0, 1.0)


def test_ic_bank_is_deterministic(chafee_model):
    a = chafee_ic_bank(chafee_model, 20)
    b = chafee_ic_bank(chafee_model, 20)
    assert len(a) == 20
    assert all(np.array_equal(u, v) for u, v in zip(a, b))


# ---------------------------------------------------------------------------
# Chafee: extremal bounded solutions and attractor sections


def test_xi_m_of_autonomous_model_is_the_equilibrium(chafee_model, chafee_eq):
    xi = chafee_xi_M(chafee_model, 3.0)
    assert _l2(chafee_model, xi - chafee_eq["plus"]) <= 1e-6
    assert np.all(xi > 0)
    assert _l2(chafee_model, chafee_xi_M(chafee_model, 3.0, -1) + xi) <= 1e-9
    with pytest.raises(ContractViolation):
        chafee_xi_M(chafee_model, 3.0, sign=0)


def test_xi_m_converges_to_limit_equilibrium(chafee_aa_model):
    m = chafee_aa_model
    m_inf = ChafeeModel(m.lam, TimeFnSpec.constant(m.b.declared_limit()), m.grid)
    eq = chafee_autonomous_equilibria(m_inf)
    assert _l2(m, chafee_xi_M(m, 30.0) - eq["plus"]) <= 1e-3


def test_attractor_sample_lies_in_the_order_interval(chafee_model):
    m = chafee_model
    samp = chafee_attractor_sample(m, 0.0, 25.0, 16, merge_eps=1e-3)
    xi = chafee_xi_M(m, 0.0)
    for p in samp.points:
        assert float((p.values - xi).max()) <= 1e-6
        assert float((-xi - p.values).max()) <= 1e-6
    h = m.grid.h
    for marker in (np.zeros(m.grid.n_interior), xi, -xi):
        assert semidist(singleton(marker, "l2", h), samp) <= 1e-3


def test_attractor_sample_shift_invariant_under_constant_forcing(chafee_model):
    s0 = chafee_attractor_sample(chafee_model, 0.0, 25.0, 16, merge_eps=1e-3)
    s7 = chafee_attractor_sample(chafee_model, 7.0, 25.0, 16, merge_eps=1e-3)
    assert hausdorff(s0, s7) <= 1e-12


def test_chafee_blowup_reports_step_and_last_good_time(chafee_model):
    m = chafee_model
    with pytest.raises(NumericalFailure) as exc:
        chafee_solve(m, 1.0, 0.0, 5000.0 * np.ones(m.grid.n_interior))
    assert "blow-up at step 1" in str(exc.value)
    assert exc.value.last_good_time == 0.0


# ---------------------------------------------------------------------------
# parabolic inclusion: stationary state, positivity, comparison


def test_stationary_state_is_the_parabola(parabolic_model):
    m = parabolic_model
    v1 = parabolic_stationary(m, 2.0, 0.0)
    x = m.grid.x
    # second differences are exact on quadratics, so the profile is exact
    assert float(np.abs(v1 - x * (1.0 - x)).max()) <= 1e-12
    assert abs(v1.max() - 0.25) <= 1e-12
    assert abs(m.grid.l2_norm_sq(v1) - 1.0 / 30.0) <= 1e-9


def test_long_march_reaches_the_stationary_state(parabolic_model):
    m = parabolic_model
    x = m.grid.x
    pairs = parabolic_solve(m, 8.0, 0.0, np.sin(math.pi * x))
    assert len(pairs) == 1 and pairs[0][0].kind == "unique"
    assert float(np.abs(pairs[0][1] - x * (1.0 - x)).max()) <= 1e-4


def test_positive_data_stay_strictly_positive(parabolic_model):
    m = parabolic_model
    u0 = np.maximum(np.sin(3 * math.pi * m.grid.x), 0.0)
    run = parabolic_march_snapshots(m, 0.0, u0, [m.dt, 0.1, 1.0])
    assert float(run["states"].min()) > 0.0


def test_positivity_on_random_bank(parabolic_model, rng):
    m = parabolic_model
    fields = rng.uniform(0.0, 1.0, size=(10, m.grid.n_interior))
    times = np.arange(0.0, 1.0 + 1e-12, 0.1)
    for u0 in fields:
        run = parabolic_march_snapshots(m, 0.0, u0, times)
        assert float(run["states"].min()) >= 0.0


def test_comparison_principle_nodewise(parabolic_model, rng):
    m = parabolic_model
    u0b = rng.uniform(0.0, 1.0, m.grid.n_interior)
    u0a = u0b + rng.uniform(0.0, 0.5, m.grid.n_interior)
    times = np.arange(0.0, 2.0 + 1e-9, 0.1)
    ta = parabolic_march_snapshots(m, 0.0, u0a, times)
    tb = parabolic_march_snapshots(m, 0.0, u0b, times)
    assert float((ta["states"] - tb["states"]).min()) >= -1e-10


def test_negative_data_rejected(parabolic_model):
    with pytest.raises(ContractViolation):
        parabolic_solve(parabolic_model, 1.0, 0.0,
                        -np.ones(parabolic_model.grid.n_interior))


def test_decay_check_rates_and_trivial_pair(parabolic_model, rng):
    m = parabolic_model
    # independent rough fields: their difference is sign-mixed, so high-mode
    # surplus decay covers the slight mode-1 deficit of the discrete scheme
    u0a, u0b = rng.uniform(0.0, 1.0, size=(2, m.grid.n_interior))
    res = parabolic_decay_check(m, u0a, u0b, 1.5, 0.0)
    assert res["passed"]
    assert abs(res["rate"] - 2.0 * math.pi**2) <= 1e-12
    # identical fields give w == 0 throughout, trivially inside the bound
    trivial = parabolic_decay_check(m, u0a, u0a, 0.5, 0.0)
    assert trivial["passed"] and trivial["worst_ratio"] == 0.0
    m5 = ParabolicInclusionModel(TimeFnSpec.constant(2.0), TimeFnSpec.constant(5.0),
                                 m.grid)
    res5 = parabolic_decay_check(m5, u0a, u0b, 1.5, 0.0)
    assert res5["passed"]
    assert abs(res5["rate"] - 2.0 * (math.pi**2 - 5.0)) <= 1e-12


# ---------------------------------------------------------------------------
# parabolic inclusion: rest-state catalogue and the autonomous limit


def test_rest_state_catalogue_at_start_time(parabolic_model):
    m = parabolic_model
    pairs = parabolic_solve(m, 0.0, 0.0, np.zeros(m.grid.n_interior), budget=7)
    assert [p[0].kind for p in pairs] == ["zero", "plus"]
    assert all(not field.any() for _, field in pairs)


def test_departure_branches_are_ordered_and_bounded(parabolic_model):
    m = parabolic_model
    v1 = parabolic_stationary(m, 2.0, 0.0)
    pairs = parabolic_solve(m, 2.0, 0.0, np.zeros(m.grid.n_interior), budget=5)
    assert pairs[0][0] == BranchLabel("zero")
    deps = [p[0].departure_time for p in pairs[1:]]
    assert deps == sorted(deps)
    norms = [_l2(m, field) for _, field in pairs[1:]]
    # an earlier departure has had longer to grow toward the stationary state
    assert norms == sorted(norms, reverse=True)
    for _, field in pairs:
        assert float(field.min()) >= 0.0
        assert float((field - v1).max()) <= 1e-9


def test_autonomous_attractor_spans_rest_to_stationary(parabolic_model):
    m = parabolic_model
    auto = parabolic_autonomous_attractor(m, durations=[0.0, 0.5, 1.0, 8.0])
    assert np.array_equal(auto["v_plus"], parabolic_stationary(m, 2.0, 0.0))
    assert not auto["zero"].any()
    assert auto["model"].b.kind == "constant"
    for p in auto["sample"].points:
        assert float(p.values.min()) >= 0.0
        assert float((p.values - auto["v_plus"]).max()) <= 1e-12
    # the longest departure branch has essentially closed the heteroclinic
    end = auto["sample"].points[-2].values
    assert _l2(m, end - auto["v_plus"]) <= 1e-3


def test_parabolic_xi_m_equals_stationary_for_autonomous(parabolic_model):
    xi = parabolic_xi_M(parabolic_model, 2.0)
    v1 = parabolic_stationary(parabolic_model, 2.0, 0.0)
    assert _l2(parabolic_model, xi - v1) <= 1e-8


# ---------------------------------------------------------------------------
# asymptotically autonomous coefficients


def test_nonautonomous_run_matches_autonomous_within_coefficient_gap(parabolic_aa_model):
    m = parabolic_aa_model
    x = m.grid.x
    u0 = x * (1.0 - x)
    span = 2.0
    b_inf, w_inf = m.b.declared_limit(), m.omega.declared_limit()
    m_inf = ParabolicInclusionModel(TimeFnSpec.constant(b_inf),
                                    TimeFnSpec.constant(w_inf), m.grid)
    auto = parabolic_march_snapshots(m_inf, 0.0, u0,
                                     np.arange(0.0, span + 1e-9, m.dt))
    # discrete Duhamel bound: per step the defect gains at most
    # dt*(|b - b_inf| + |omega - omega_inf|*||u||) before a contraction
    sup_u = math.sqrt(float(auto["l2_sq"].max()))
    ones = math.sqrt(m.grid.h * m.grid.n_interior)
    c_bound = (ones + sup_u) * m.dt / (1.0 - math.exp(-m.dt)) \
        * (1.0 - math.exp(-span))
    gaps = {}
    for tau in (8.0, 12.0):
        run = parabolic_march_snapshots(m, tau, u0, [tau + span])
        gaps[tau] = _l2(m, run["states"][-1] - auto["states"][-1])
        delta = max(abs(m.b(tau) - b_inf), abs(m.omega(tau) - w_inf))
        assert gaps[tau] <= c_bound * delta
    assert gaps[12.0] < gaps[8.0]


def test_march_error_constant_is_first_order(parabolic_aa_model):
    m = parabolic_aa_model
    x = m.grid.x
    u0 = x * (1.0 - x) * (1.0 + 0.3 * np.sin(3.0 * math.pi * x))
    res = parabolic_solver_matching(m, u0, 5.0, 0.0)
    assert res["C"] <= 10.0
    assert res["C_half"] <= 10.0
    assert res["err_half"] < res["err"]
