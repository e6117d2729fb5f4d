"""Exception types shared across the package.

The split mirrors how callers are expected to react: ``ParameterError`` is
a caller bug (bad argument), ``DomainError`` means the data left the
mathematical domain of an operation (a nonpositive value where a root or
logarithm is required), ``EvaluationError`` flags a user callback that
returned a non-finite value, and ``ConsistencyError`` means two internal
computation paths that must agree did not.
"""


class LabError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(LabError, ValueError):
    """An argument is outside its documented range."""


class DomainError(LabError, ValueError):
    """A value violates the mathematical domain of an operation."""


class EvaluationError(LabError, ArithmeticError):
    """A user-supplied callback produced a non-finite value."""


class ConsistencyError(LabError, RuntimeError):
    """Two independent computation paths disagree beyond tolerance."""
