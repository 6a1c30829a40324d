"""Exception hierarchy shared across the package."""


class FermimiError(Exception):
    """Base class for all package errors."""


class ValidationError(FermimiError, ValueError):
    """Invalid parameters or malformed inputs, detected before any heavy compute."""


class NumericalError(FermimiError, RuntimeError):
    """A numerical routine produced an untrustworthy result (pathology, not misuse)."""


class ConvergenceError(NumericalError):
    """An iterative refinement hit its ceiling before reaching the requested tolerance."""

    def __init__(self, message, last_delta=None):
        super().__init__(message)
        self.last_delta = last_delta
