"""Exception types shared across the package."""


class OhnoError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(OhnoError):
    """Input lies outside the domain certified for the requested operation.

    The message always names the violated precondition.
    """


class RegionError(DomainError):
    """Evaluation point lies outside the region of absolute convergence."""

    def __init__(self, message, abscissa):
        super().__init__(message)
        self.abscissa = abscissa


class PoleError(DomainError):
    """Evaluation at a pole of the requested function."""


class DivergentSeriesError(DomainError):
    """The requested nested series does not converge absolutely."""
