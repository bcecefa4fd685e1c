from fpme_lab.errors import (
    CapacityError,
    ConfigurationError,
    DomainError,
    EnvelopeViolationError,
    FpmeError,
    InvalidArgumentError,
    ReportIOError,
    SolverInstabilityError,
    StageError,
)
from fpme_lab.kernel import JumpKernel
from fpme_lab.lattice import LatticeConfig
from fpme_lab.rates import RateModel

__version__ = "0.3.0"

__all__ = [
    "LatticeConfig",
    "JumpKernel",
    "RateModel",
    "FpmeError",
    "InvalidArgumentError",
    "DomainError",
    "EnvelopeViolationError",
    "SolverInstabilityError",
    "CapacityError",
    "ConfigurationError",
    "StageError",
    "ReportIOError",
]
