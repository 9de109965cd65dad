"""Exception types raised across the package."""


class NullwaveError(Exception):
    """Base class for all package errors."""


class NoConvergence(NullwaveError):
    """A Newton inversion did not reach its tolerance."""


class SingularJacobian(NullwaveError):
    pass


class NotSPD(NullwaveError):
    """Matrix is not symmetric positive definite."""


class DomainError(NullwaveError, ValueError):
    """A scalar function was evaluated outside its domain."""


class ParseError(NullwaveError, ValueError):
    pass


class NonPositiveModulus(NullwaveError, ValueError):
    """Bulk modulus or squared shear speed is not positive on the interval."""


class RouteMismatch(NullwaveError):
    """Closed-form and finite-difference tensors disagree."""


class AsymmetryTooLarge(NullwaveError):
    pass


class DirectionMismatch(NullwaveError, ValueError):
    pass


class SingularPoint(NullwaveError, ValueError):
    pass


class NeedsTimeDerivative(NullwaveError):
    """A discrete state lacks the time derivatives an operator needs."""


class NonFinite(NullwaveError):
    """The simulation produced NaN or infinite values."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class NoBlowup(NullwaveError):
    """Characteristic derivatives stay bounded over the horizon."""


class ConfigError(NullwaveError, ValueError):
    pass
