__all__ = [
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


class FpmeError(Exception):
    """
    Base class of every error raised by fpme_lab.
    """


class InvalidArgumentError(FpmeError, ValueError):
    """
    An argument violates an operation's precondition, for example exchanging a
    site with itself.
    """


class DomainError(FpmeError, ValueError):
    """
    A model parameter lies outside its admissible range, for example gamma
    outside (0, 2).
    """


class EnvelopeViolationError(FpmeError):
    """
    A thinning proposal had acceptance probability above one.

    Only a bug in the rate evaluators can trigger this.
    """


class SolverInstabilityError(FpmeError):
    """
    The PDE solution left the admissible band, ||rho||_inf > 1.5.
    """

    def __init__(self, time: float, sup_norm: float):
        super().__init__(
            f"solver unstable at t={time:.6g}: sup norm {sup_norm:.6g} exceeds 1.5"
        )
        self.time = time
        self.sup_norm = sup_norm


class CapacityError(FpmeError):
    """
    An exact computation was asked for a system too large to enumerate.
    """


class ConfigurationError(FpmeError):
    """
    An experiment configuration value is missing or invalid.
    """

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


class StageError(FpmeError):
    """
    A stage of an experiment failed. Wraps the original exception.
    """

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause


class ReportIOError(FpmeError):
    """
    A report could not be written.
    """

    def __init__(self, path, cause: BaseException):
        super().__init__(f"cannot write report to {path}: {cause}")
        self.path = path
        self.cause = cause
