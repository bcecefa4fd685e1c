from fpme_lab.measures.measure import (
    AssociationResult,
    MeasureSpec,
    association_check,
    relative_entropy,
    relative_entropy_direct,
    sample_initial,
)
from fpme_lab.measures.profiles import PROFILE_KINDS, ProfileSpec, profile_integral

__all__ = [
    "PROFILE_KINDS",
    "ProfileSpec",
    "profile_integral",
    "MeasureSpec",
    "AssociationResult",
    "sample_initial",
    "relative_entropy",
    "relative_entropy_direct",
    "association_check",
]
