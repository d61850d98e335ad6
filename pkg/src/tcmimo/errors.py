"""Exception types raised across the package."""


class FormatError(ValueError):
    """Input could not be parsed into the expected shape."""


class ValidationError(ValueError):
    """Input parsed but violates a physical or structural invariant."""


class NotPSDError(ValueError):
    """Matrix has an eigenvalue materially below zero."""


class SolveError(ArithmeticError):
    """Linear system singular to working precision.

    ``condition`` carries the 1-norm condition estimate when one could be
    formed (``inf`` otherwise).
    """

    def __init__(self, message, condition=float("inf")):
        super().__init__(message)
        self.condition = condition


class InternalConsistencyError(RuntimeError):
    """A computed quantity failed its own structural check."""
