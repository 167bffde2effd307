"""Exception hierarchy for the package."""

from __future__ import annotations


class RPMError(Exception):
    """Base class for every error raised by rpmbounds."""


class ParameterDomainError(RPMError, ValueError):
    """Potential parameters or quantum numbers outside their allowed domain."""


class EmptyRequestError(RPMError, ValueError):
    """A request for zero items (coefficients, terms, ...)."""


class CoefficientLengthError(RPMError, ValueError):
    """Not enough series coefficients for the requested Hankel matrix."""


class SizeError(RPMError, ValueError):
    """Requested dimension exceeds a cost guard."""


class DerivativeUnavailableError(RPMError, ArithmeticError):
    """Both the Jacobi-formula and the column-replacement derivative failed."""


class ConvergenceError(RPMError, ArithmeticError):
    """Root iteration did not converge. ``last`` holds the final iterate."""

    def __init__(self, message, last=None):
        super().__init__(message)
        self.last = last


class BranchLossError(RPMError, ArithmeticError):
    """The refined root left the acceptance window around its seed."""

    def __init__(self, message, root=None):
        super().__init__(message)
        self.root = root


class SequenceError(RPMError):
    """No dimension of a root sequence could be computed."""


class InsufficientDataError(RPMError, ValueError):
    """Too few sequence entries for the requested analysis."""


class EmptyDataError(RPMError, ValueError):
    """Two sequences share no dimension."""


class AccelerationUnavailableError(RPMError, ArithmeticError):
    """The interpolation parameter is undefined or non-positive.

    ``bounds`` carries the partial result (bounds without an accelerated value).
    """

    def __init__(self, message, bounds=None):
        super().__init__(message)
        self.bounds = bounds


class RangeError(RPMError, ValueError):
    """The shooting oracle could not reach the requested node count."""


class BracketingError(RPMError, ArithmeticError):
    """The shooting mismatch function has no sign change in its bracket."""
