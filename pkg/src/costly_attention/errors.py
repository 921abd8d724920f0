"""Exception types shared across the package."""


class CostlyAttentionError(Exception):
    """Base class for all package errors."""


class ValidationError(CostlyAttentionError, ValueError):
    """Input violates a structural requirement (shape, feasibility, normalization)."""

    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where


class DomainError(ValidationError):
    """Argument outside the domain of an operation."""


class PreconditionError(CostlyAttentionError):
    """The hypotheses an operation relies on do not hold for this input."""


class NumericError(CostlyAttentionError, ArithmeticError):
    """A numerical routine failed to reach its tolerance."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace or [])
