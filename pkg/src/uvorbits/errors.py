"""Exception types raised across the package."""


class UVOrbitsError(Exception):
    """Base class for package errors."""


class DivisionByZeroPoly(UVOrbitsError, ZeroDivisionError):
    """Division by the zero polynomial."""


class PoleError(UVOrbitsError, ArithmeticError):
    """A rational function was evaluated at (or numerically at) a pole."""


class SingularPoint(UVOrbitsError, ArithmeticError):
    """A (u, v) point with u = 0, where the map and the coordinate change blow up."""


class DepthExceeded(UVOrbitsError, ValueError):
    """Requested iterate depth exceeds the configured maximum."""


class ValidationFailed(UVOrbitsError):
    """A derived period curve produced samples of the wrong minimal period."""


class NoConvergence(UVOrbitsError):
    """Root iteration did not converge; ``best`` holds the last iterate."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class SingularJacobian(UVOrbitsError, ArithmeticError):
    """Newton's method hit an (almost) singular Jacobian."""


class Diverged(UVOrbitsError):
    """Newton steps kept growing."""


class NotPeriodic(UVOrbitsError, ValueError):
    """The point does not return to itself after the stated number of steps."""


class PlaneMismatch(UVOrbitsError, ValueError):
    """Arithmetic between points tagged with different planes."""
