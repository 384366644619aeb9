"""Exception hierarchy.

``InputError`` subclasses signal malformed or invalid inputs (CLI exit code 2);
``CheckFailure`` subclasses signal that a mathematical property does not hold
(CLI exit code 1).
"""


class BranchfolError(Exception):
    """Base class for all package errors."""


class InputError(BranchfolError):
    """Invalid input data or parameters."""


class CheckFailure(BranchfolError):
    """A verified mathematical property turned out to be false."""


class ArityError(InputError, ValueError):
    """Variable-count or length mismatch."""


class ParseError(InputError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class ZeroForm(InputError):
    """The zero form does not define a foliation."""


class MixedDegrees(InputError):
    """Coefficients are not homogeneous of one common degree."""


class EulerViolation(CheckFailure):
    """Contraction with the radial field is not identically zero."""


class NotIntegrable(CheckFailure):
    """The form fails the Frobenius condition."""


class DegreeMismatch(InputError):
    """A polynomial does not have the degree its role requires."""


class DegreeRelationViolated(InputError):
    """The degree relations of a branched map do not hold."""


class CommonFactor(InputError):
    """Map components share a nonconstant factor."""


class BadExponents(InputError):
    """Branching exponents or map degree out of range."""


class NonIntegerDegree(InputError):
    """The expected-degree formula is not an integer for these parameters."""


class PointNotOnLocus(CheckFailure):
    """A supplied point does not lie on the indeterminacy locus."""


class PointNotSingular(CheckFailure):
    """A supplied point is not a singular point of the foliation."""


class CertificationInconclusive(CheckFailure):
    """The Groebner certification hit its resource cap."""


class SolverNonConvergence(CheckFailure):
    """A numeric root finder failed to reach the residual tolerance."""

    def __init__(self, message: str, residuals=()):
        super().__init__(message)
        self.residuals = list(residuals)
