"""Exception hierarchy shared by every logimath module."""


class LogimathError(Exception):
    """Base class for all errors raised by this package."""


class SeriesConvergenceError(LogimathError, ArithmeticError):
    """A series hit its term cap before reaching the requested tolerance."""


class PoleError(LogimathError, ValueError):
    """Function evaluated at a pole (e.g. Gamma at a non-positive integer)."""


class DomainError(LogimathError, ValueError):
    """Model evaluated outside its admissible domain."""


class StepUnderflowError(LogimathError, ArithmeticError):
    """Finite-difference or integrator step fell below the safe floor."""


class SingularGridError(LogimathError, ValueError):
    """A grid touches a singular point of the equation being checked."""


class IntegrationError(LogimathError, ArithmeticError):
    """ODE integration failed (NaN, overflow, or too many steps)."""


class QuadratureError(LogimathError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""


class UnsupportedVariantError(LogimathError, TypeError):
    """Operation is not defined for the given model variant."""


class InstabilityError(LogimathError, ArithmeticError):
    """A time-stepping scheme blew up."""


class PoleCrossingError(LogimathError, ValueError):
    """A logistic map denominator came too close to zero."""


class ParseError(LogimathError, ValueError):
    """Malformed CLI argument or configuration file."""
