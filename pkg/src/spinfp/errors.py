"""Exception types shared across the package."""


class DomainError(ValueError):
    """Raised when an input lies outside the physically valid domain."""


class NumericError(RuntimeError):
    """Raised when a numerical routine fails an internal consistency check."""
