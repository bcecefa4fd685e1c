from fpme_lab.rates.audit import (
    AuditResult,
    audit_decomposition,
    audit_nearest_neighbour_floor,
    audit_symmetry,
    audit_window_equivalence,
)
from fpme_lab.rates.occupancy import Occupancy
from fpme_lab.rates.rate_model import RateModel

__all__ = [
    "RateModel",
    "Occupancy",
    "AuditResult",
    "audit_decomposition",
    "audit_nearest_neighbour_floor",
    "audit_symmetry",
    "audit_window_equivalence",
]
