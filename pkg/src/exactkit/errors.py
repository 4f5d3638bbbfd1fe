"""Exception types shared across the package."""


class ExactKitError(Exception):
    """Base class for all package errors."""


class InputError(ExactKitError, ValueError):
    """Caller passed structurally invalid or mismatched data."""


class ValidationError(ExactKitError, ValueError):
    """Constructed object violates a defining invariant."""


class BudgetError(ExactKitError, RuntimeError):
    """An enumeration guard refused to run; carries the offending count."""

    def __init__(self, message: str, count: int):
        super().__init__(message)
        self.count = count
