"""Exception types raised across the package."""


class NormcayError(Exception):
    """Base class for all package errors."""


class UnsupportedFamily(NormcayError, ValueError):
    pass


class SizeExceeded(NormcayError, ValueError):
    pass


class NotADivisor(NormcayError, ValueError):
    pass


class BadResidue(NormcayError, ValueError):
    pass


class IdentityElement(NormcayError, ValueError):
    pass


class NotInGamma3(NormcayError, ValueError):
    pass


class IdentityInSet(NormcayError, ValueError):
    pass


class NotNormal(NormcayError, ValueError):
    """Connection set is not a union of conjugacy classes."""


class DegenerateCombination(NormcayError, ArithmeticError):
    """Random combination of class matrices had (numerically) repeated eigenvalues."""


class OrthogonalityFailure(NormcayError, ArithmeticError):
    pass


class ConvergenceFailure(NormcayError, ArithmeticError):
    pass


class EnumerationTooLarge(NormcayError, ValueError):
    pass


class HypothesisFailed(NormcayError):
    """A T_y(j)/3 value was found to be non-integral."""


class InvariantViolation(NormcayError, AssertionError):
    """Two routes that must agree by theorem disagreed.

    ``reproducer`` holds a CLI command line that re-runs the failing case.
    """

    def __init__(self, message, reproducer=None):
        super().__init__(message)
        self.reproducer = reproducer
