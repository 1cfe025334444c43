"""Exception hierarchy.

Each class maps to a distinct CLI exit code (see ``relcond.cli``).
"""


class RelcondError(Exception):
    """Base class for all errors raised by relcond."""

    exit_code = 1


class InputError(RelcondError, ValueError):
    """Malformed or out-of-domain input (non-finite entries, zero vectors, ...)."""

    exit_code = 2


class UnsupportedStructureError(RelcondError):
    """Eigenstructure outside what the eigendecomposition path can handle.

    Raised for non-generic spectral levels without user-supplied Jordan data,
    and for degenerate geometry such as V1 == 1.
    """

    exit_code = 3


class RLGEError(RelcondError):
    """The input has no component along the rightmost (last generalized) eigenvectors.

    The asymptotic condition numbers for such inputs grow exponentially and
    are not computed here.
    """

    exit_code = 4

    def __init__(self, message, margin=None):
        super().__init__(message)
        self.margin = margin


class RangeError(RelcondError, ArithmeticError):
    """Overflow or underflow while evaluating exponentials."""

    exit_code = 5
