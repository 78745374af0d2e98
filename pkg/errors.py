"""Exception hierarchy shared by every module.

Domain failures derive from ValueError, the same as bad inputs anywhere
else in the package. Verification routines report failed properties in
their result dicts; these exceptions are for broken preconditions only.
"""


class CoherentError(ValueError):
    """Base class for all domain errors raised by the workbench."""


# ---------------------------------------------------------------------------
# Spaces and kernels
# ---------------------------------------------------------------------------

class DomainError(CoherentError):
    """A point lies outside the domain of its space."""


class SingularityError(CoherentError):
    """A kernel formula hit a zero denominator."""


class KernelSymmetryError(CoherentError):
    """A sampled kernel is not Hermitian within tolerance."""


class NotProjectiveError(CoherentError):
    """The space carries no scalar multiplication of the required degree."""


class NotPositiveError(CoherentError):
    """A Gram matrix has a significantly negative eigenvalue."""


# ---------------------------------------------------------------------------
# Quantum spaces and operators
# ---------------------------------------------------------------------------

class NotAdmissibleError(CoherentError):
    """A function is not orthogonal to the null space of the Gram matrix."""


class NotShadowError(CoherentError):
    """A kernel cannot be written as the shadow of an operator on the span."""


class MissingAdjointError(CoherentError):
    """A map was used where an adjoint is needed but none was supplied."""


class OrbitNotClosedError(CoherentError):
    """An orbit sample does not contain the images a computation needs."""


class IllConditionedError(CoherentError):
    """A Gram matrix is rank deficient without a parallel pair to explain it."""


class InvalidMapError(CoherentError):
    """A map specification violates the constraints of its family."""


# ---------------------------------------------------------------------------
# Algebra and Fock space
# ---------------------------------------------------------------------------

class DimensionError(CoherentError):
    """Operands have incompatible shapes."""


class SingularError(CoherentError):
    """A matrix that must be inverted is numerically singular."""


class NotUnitaryError(CoherentError):
    """A matrix that must be unitary is not."""


class QuadratureError(CoherentError):
    """A quadrature rule did not converge."""


class DegreeError(CoherentError):
    """A requested degree does not fit below the truncation cutoff."""


# ---------------------------------------------------------------------------
# Input files and configuration
# ---------------------------------------------------------------------------

class ConfigError(CoherentError):
    """A suite configuration is invalid. `field` is the dotted path."""

    def __init__(self, message, field=None):
        self.field = field
        if field:
            message = f"{field}: {message}"
        super().__init__(message)


class ParseError(CoherentError):
    """A JSON document could not be decoded. Positions are 1-based."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class IoError(OSError):
    """Reading or writing an artifact file failed."""


class TruncationWarning(UserWarning):
    """A coherent argument is large enough that the Fock cutoff loses accuracy."""
