"""Risk preference design toolkit.

Coherent risk measures with dual envelope densities, order-1 transport
distances on ordered type spaces, principal-agent contract solvers, and
moral-hazard intensity diagnostics, backed by the C++ core.
"""

from ._core import (
    InfeasibleError,
    NumericalError,
    RiskMeasure,
    Scenario,
    UnsupportedError,
    agent_best_response,
    agent_objective,
    case_study_report,
    case_study_scenario,
    check_mlr,
    check_monotone_contract,
    density,
    density_dx,
    design_step,
    envelope_density,
    envelope_lp_objective,
    evaluate_risk,
    imh,
    imh_gradient,
    mitigating_direction,
    mixture_risk,
    project_simplex,
    smooth_sensitivity_scenario,
    solve_full_info,
    solve_hidden_action,
    w1,
    w1_dual,
)

__all__ = [
    "InfeasibleError",
    "NumericalError",
    "RiskMeasure",
    "Scenario",
    "UnsupportedError",
    "agent_best_response",
    "agent_objective",
    "case_study_report",
    "case_study_scenario",
    "check_mlr",
    "check_monotone_contract",
    "density",
    "density_dx",
    "design_step",
    "envelope_density",
    "envelope_lp_objective",
    "evaluate_risk",
    "imh",
    "imh_gradient",
    "mitigating_direction",
    "mixture_risk",
    "project_simplex",
    "smooth_sensitivity_scenario",
    "solve_full_info",
    "solve_hidden_action",
    "w1",
    "w1_dual",
]
