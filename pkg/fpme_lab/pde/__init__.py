from fpme_lab.pde.field import (
    DensityField,
    grid_positions,
    range_check,
    sample_profile,
    write_fields_csv,
)
from fpme_lab.pde.solver import INTEGRATORS, SolverConfig, exact_linear_solution, solve_fpme
from fpme_lab.pde.weak import EnergyNorms, energy_norms, is_ordered, sup_distance, weak_residual_F

__all__ = [
    "DensityField",
    "grid_positions",
    "range_check",
    "sample_profile",
    "write_fields_csv",
    "INTEGRATORS",
    "SolverConfig",
    "solve_fpme",
    "exact_linear_solution",
    "weak_residual_F",
    "EnergyNorms",
    "energy_norms",
    "sup_distance",
    "is_ordered",
]
