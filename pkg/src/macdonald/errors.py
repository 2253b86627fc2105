"""Exception hierarchy shared by all modules."""


class MacdonaldError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(MacdonaldError, ValueError):
    """An input is outside the mathematical domain of the operation."""


class RangeError(MacdonaldError, ValueError):
    """An input is outside the range supported by the chosen algorithm."""


class NearDiagonalError(MacdonaldError, ValueError):
    """Order pair too close to nu == nu'; use the diagonal limit instead."""


class ConvergenceError(MacdonaldError, RuntimeError):
    """An iterative scheme failed to reach the requested tolerance.

    Carries the best available estimate in ``estimate``.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate
