"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the region where a quantity is defined."""


class AccuracyError(ArithmeticError):
    """A numerical routine could not reach its accuracy target.

    The best available estimate is kept on the exception so callers can
    decide whether to fall back to another method or accept it.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class UnsupportedError(NotImplementedError):
    """A valid request that this implementation deliberately does not cover."""


class CapacityError(ValueError):
    """A problem size exceeds an enumeration guard."""
