"""Numerical laboratory for pullback and forward attractors.

Approximates pullback attractors, forward omega-limit sets, and set-valued
Liminf/Limsup limits of nonautonomous processes (single- and multivalued),
and mechanically checks when a pullback attractor is also a forward
attractor. Ships four model families: a scalar linear ODE, a scalar
differential inclusion, a Chafee-Infante equation, and a parabolic
inclusion, each with a reproduction battery behind the ``attractorlab``
command.
"""

from ._kernels import IMPLEMENTATION as KERNEL_IMPLEMENTATION
from .errors import (
    ContractViolation,
    EmptySetError,
    NumericalFailure,
    UnsupportedModel,
)
from .limits import (
    LimitSetResult,
    a_min,
    forward_boundedness_diagnostic,
    forward_omega,
    omega_liminf,
    omega_limsup,
)
from .models_pde import (
    ChafeeModel,
    Grid1D,
    ParabolicInclusionModel,
    chafee_attractor_sample,
    chafee_autonomous_equilibria,
    chafee_energy_check,
    chafee_handle,
    chafee_heteroclinic_rate,
    chafee_ic_bank,
    chafee_order_check,
    chafee_solve,
    chafee_xi_M,
    parabolic_attractor_sample,
    parabolic_autonomous_attractor,
    parabolic_decay_check,
    parabolic_handle,
    parabolic_reference_solution,
    parabolic_solve,
    parabolic_solver_matching,
    parabolic_stationary,
    parabolic_xi_M,
)
from .models_scalar import (
    InclusionModel,
    LinearModel,
    TimeFnSpec,
    inclusion_attractor,
    inclusion_autonomous_limit,
    inclusion_handle,
    inclusion_solution_set,
    inclusion_xi_M,
    linear_handle,
    linear_invariant_family,
    linear_pullback_trajectory,
    linear_solution,
    pullback_integral,
    voc_integral,
)
from .process import (
    BranchLabel,
    ProcessHandle,
    TrajectorySample,
    check_axioms_K,
    check_cocycle,
    evolve,
    evolve_set,
    sample_trajectory,
)
from .scenarios import REPRODUCE_IDS, SCENARIO_NAMES, build_handle, build_model, run_battery
from .setcalc import (
    CompactSetSample,
    SetFamily,
    StatePoint,
    eps_merge,
    hausdorff,
    interval_hull,
    interval_sample,
    load_family,
    load_set_csv,
    point_distance,
    save_family,
    save_set_csv,
    semidist,
    singleton,
)
from .verify import (
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

__version__ = "0.1.0"

__all__ = [
    "KERNEL_IMPLEMENTATION",
    "ContractViolation",
    "EmptySetError",
    "NumericalFailure",
    "UnsupportedModel",
    "LimitSetResult",
    "a_min",
    "forward_boundedness_diagnostic",
    "forward_omega",
    "omega_liminf",
    "omega_limsup",
    "ChafeeModel",
    "Grid1D",
    "ParabolicInclusionModel",
    "chafee_attractor_sample",
    "chafee_autonomous_equilibria",
    "chafee_energy_check",
    "chafee_handle",
    "chafee_heteroclinic_rate",
    "chafee_ic_bank",
    "chafee_order_check",
    "chafee_solve",
    "chafee_xi_M",
    "parabolic_attractor_sample",
    "parabolic_autonomous_attractor",
    "parabolic_decay_check",
    "parabolic_handle",
    "parabolic_reference_solution",
    "parabolic_solve",
    "parabolic_solver_matching",
    "parabolic_stationary",
    "parabolic_xi_M",
    "InclusionModel",
    "LinearModel",
    "TimeFnSpec",
    "inclusion_attractor",
    "inclusion_autonomous_limit",
    "inclusion_handle",
    "inclusion_solution_set",
    "inclusion_xi_M",
    "linear_handle",
    "linear_invariant_family",
    "linear_pullback_trajectory",
    "linear_solution",
    "pullback_integral",
    "voc_integral",
    "BranchLabel",
    "ProcessHandle",
    "TrajectorySample",
    "check_axioms_K",
    "check_cocycle",
    "evolve",
    "evolve_set",
    "sample_trajectory",
    "REPRODUCE_IDS",
    "SCENARIO_NAMES",
    "build_handle",
    "build_model",
    "run_battery",
    "CompactSetSample",
    "SetFamily",
    "StatePoint",
    "eps_merge",
    "hausdorff",
    "interval_hull",
    "interval_sample",
    "load_family",
    "load_set_csv",
    "point_distance",
    "save_family",
    "save_set_csv",
    "semidist",
    "singleton",
    "ToleranceSchedule",
    "VerifierReport",
    "tends_to_zero",
    "verify_aa_convergence",
    "verify_amin",
    "verify_asymptotic_equivalence",
    "verify_cond_omega0",
    "verify_cond_omega_pair",
    "verify_forward_attraction",
    "verify_invariance",
    "verify_pullback_attraction",
    "__version__",
]
