"""Visco-energetic evolutions of rate-independent systems.

Python bindings for the C++ core: model constructors, the viscous
incremental minimization scheme, stability residuals, jump costs and the
analytic 1D oracles.
"""

from ._core import (
    ConfigError,
    DiscreteTrajectory,
    EvaluationError,
    RisModel,
    StepRecord,
    WrongRegimeError,
    allen_cahn_model,
    analytic_ve_solution_1d,
    check_discrete_energy_identity,
    check_discrete_stability,
    construct_viscous_transition,
    convex_quadratic_model,
    double_well_model,
    energetic_maxwell_jump,
    is_quasi_stable,
    jump_cost,
    marginal_model,
    modified_maxwell_jump,
    moreau_yosida,
    residual,
    solve_incremental,
    subcritical_onset,
)

__all__ = [
    "ConfigError",
    "DiscreteTrajectory",
    "EvaluationError",
    "RisModel",
    "StepRecord",
    "WrongRegimeError",
    "allen_cahn_model",
    "analytic_ve_solution_1d",
    "check_discrete_energy_identity",
    "check_discrete_stability",
    "construct_viscous_transition",
    "convex_quadratic_model",
    "double_well_model",
    "energetic_maxwell_jump",
    "is_quasi_stable",
    "jump_cost",
    "marginal_model",
    "modified_maxwell_jump",
    "moreau_yosida",
    "residual",
    "solve_incremental",
    "subcritical_onset",
]

__version__ = getattr(__import__("veris._core", fromlist=["__version__"]), "__version__", "dev")
