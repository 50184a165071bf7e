"""Exception types shared across the package."""


class EnvelopeError(ValueError):
    """Bessel arguments outside the supported (order, argument) envelope."""


class DomainError(ValueError):
    """Mathematically invalid input (parameter interval, injectivity, ...)."""


class SolvabilityError(ValueError):
    """Boundary data violates a solvability condition (nonzero mean)."""


class ConsistencyError(ValueError):
    """Inputs that must share parameters disagree, or an internal sign
    check failed (the latter signals a bug in the Bessel layer)."""


class RootSearchError(RuntimeError):
    """A root scan failed to bracket the requested root."""


class NonConvergenceError(RuntimeError):
    """An iterative solve stopped above its tolerance.

    Carries the last residual and, for continuation runs, the branch
    points accepted before the failure.
    """

    def __init__(self, message, residual=None, points=None, last_iterate=None):
        super().__init__(message)
        self.residual = residual
        self.points = points if points is not None else []
        self.last_iterate = last_iterate


class DegenerateDataError(ValueError):
    """Data unfit for the requested fit (too few points, noise-dominated)."""


class IllConditionedWarning(UserWarning):
    """Least-squares system condition estimate exceeded the safe threshold."""
