"""Pseudospectral simulator and diagnostic laboratory for a coupled
short-wave/long-wave dispersive system (a Schrödinger equation coupled to a
Korteweg–de Vries equation).

Public API re-exports the main types and entry points of each module:
grids and spectral calculus, the model tendencies, split-step integration,
conserved quantities, solitary waves, weighted virial functionals and
budgets, region monitors, binary snapshots, configuration and the run
orchestrator.
"""

from .grid import Grid, GridError, make_grid, quadrature, spectral_derivative
from .model import (
    FieldState,
    ModelError,
    ModelParams,
    dealias_mask,
    nonlinear_phase_potential,
    rhs,
)
from .integrate import (
    ConvergenceResult,
    IntegrationError,
    IntegratorOptions,
    Trajectory,
    convergence_probe,
    evolve,
    step,
)
from .conserved import (
    ConservedTriple,
    conserved_triple,
    drift_report,
    velocity_l2_bound,
)
from .waves import (
    GroundStateError,
    SolitaryWaveParams,
    analytic_tendency,
    explicit_profile,
    ground_state_solve,
    sech,
    solitary_initial_data,
    solitary_speed,
    track_peak,
    validated_model_params,
)
from .virial import (
    BudgetI,
    BudgetJ,
    VirialConfig,
    VirialConfigError,
    budget_I,
    budget_J,
    budget_terms_I,
    budget_terms_J,
    functional_I,
    functional_J,
    weight,
    weight_comparability_check,
    weight_phi,
)
from .monitor import (
    MassRecord,
    RegionError,
    RegionSpec,
    accumulate_weighted_integrals,
    liminf_tracker,
    region_mass,
    weighted_integrands,
)
from .snapshots import (
    SnapshotError,
    read_checkpoint,
    read_snapshot,
    write_checkpoint,
    write_snapshot,
)
from .config import ConfigError, RunConfig, parse_config, serialize_config
from .runner import RunError, build_initial_state, read_csv, run, write_csv

__version__ = "0.1.0"

__all__ = [
    "Grid", "GridError", "make_grid", "quadrature", "spectral_derivative",
    "FieldState", "ModelError", "ModelParams", "dealias_mask",
    "nonlinear_phase_potential", "rhs",
    "ConvergenceResult", "IntegrationError", "IntegratorOptions",
    "Trajectory", "convergence_probe", "evolve", "step",
    "ConservedTriple", "conserved_triple", "drift_report",
    "velocity_l2_bound",
    "GroundStateError", "SolitaryWaveParams", "analytic_tendency",
    "explicit_profile", "ground_state_solve", "sech",
    "solitary_initial_data", "solitary_speed", "track_peak",
    "validated_model_params",
    "BudgetI", "BudgetJ", "VirialConfig", "VirialConfigError",
    "budget_I", "budget_J", "budget_terms_I", "budget_terms_J",
    "functional_I", "functional_J", "weight",
    "weight_comparability_check", "weight_phi",
    "MassRecord", "RegionError", "RegionSpec",
    "accumulate_weighted_integrals", "liminf_tracker", "region_mass",
    "weighted_integrands",
    "SnapshotError", "read_checkpoint", "read_snapshot",
    "write_checkpoint", "write_snapshot",
    "ConfigError", "RunConfig", "parse_config", "serialize_config",
    "RunError", "build_initial_state", "read_csv", "run", "write_csv",
]
