"""Exception hierarchy shared by all multisurf modules.

Two intermediate bases exist so that callers (notably the CLI) can map
whole failure classes to exit codes: ``NumericError`` for breakdowns of a
numerical procedure, ``DataFormatError`` for malformed or inconsistent
input data.
"""


class MultisurfError(Exception):
    """Base class for all library-specific errors."""


class NumericError(MultisurfError):
    """A numerical procedure failed or its preconditions were violated."""


class DataFormatError(MultisurfError):
    """Input data is malformed or structurally inconsistent."""


# --- numeric failures -------------------------------------------------------

class ZeroDivisor(NumericError):
    """Polynomial division by a (numerically) zero divisor."""


class DegenerateLeading(NumericError):
    """Leading coefficient too small to normalize against."""


class DomainViolation(NumericError):
    """1D evaluation point outside [-1, 1] beyond tolerance."""


class EmptyInput(NumericError):
    """An operation received an empty value vector."""


class NoConvergence(NumericError):
    """An iterative eigenvalue solver exceeded its iteration cap."""


class NegativeOffdiagonal(NumericError):
    """Tridiagonal companion construction produced a negative squared
    off-diagonal entry beyond the clamping tolerance; the polynomial's
    roots have likely been perturbed off the real line."""


class DegreeTooSmall(NumericError):
    """Matrix construction needs a higher polynomial degree."""


class DegenerateDerivative(NumericError):
    """Derivative magnitude too small for a conditioning bound."""


class RankDeficient(NumericError):
    """Least-squares design matrix is numerically rank deficient."""


class PointOutsideDomain(NumericError):
    """Evaluation point lies outside the model's domain box."""


class ComplexRootsRejected(NumericError):
    """Eigenvalues had imaginary parts above threshold while the complex
    projection policy was set to reject."""


class ZeroAxis(NumericError):
    """A generator received a zero axis parameter."""


# --- data format failures ---------------------------------------------------

class ShapeMismatch(DataFormatError):
    """Two data structures that must align (points, surface counts) do not."""


class DimensionMismatch(DataFormatError):
    """File or dataset dimensions disagree with what was expected."""


class ParseError(DataFormatError):
    """A file could not be parsed. Carries the offending line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnknownGenerator(MultisurfError):
    """Requested problem generator does not exist."""
