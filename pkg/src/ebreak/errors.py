"""Exception types shared across the package.

Everything derives from ValueError so callers that only care about
"bad input" can catch one base class; the service layer maps these to
HTTP 400 responses.
"""


class EbreakError(ValueError):
    """Base class for all domain errors raised by this package."""


class DomainError(EbreakError):
    """A numeric parameter is outside its mathematical domain."""


class NonSymmetricError(EbreakError):
    """A matrix that must be symmetric is not (beyond tolerance)."""


class ComplexSpectrumError(EbreakError):
    """The closed-form symplectic spectrum is complex: non-physical input."""


class NotSymplecticError(EbreakError):
    """A transformation matrix does not preserve the symplectic form."""


class NotSpecialFamilyError(EbreakError):
    """Closed-form correlation budgets exist only for g' = g or g' = -g."""


class UnphysicalEnvError(EbreakError):
    """Environment parameters violate the bona-fide conditions."""


class SingularConditioningError(EbreakError):
    """Measurement conditioning matrix is singular (internal error)."""


class BadProbabilitiesError(EbreakError):
    """A probability vector is negative or does not sum to one."""


class BadSubsystemError(EbreakError):
    """Subsystem index is not 0 or 1."""


class ParamOutOfRangeError(EbreakError):
    """A state-family parameter lies outside its physical interval."""


class DimensionMismatchError(EbreakError):
    """Operator dimensions are incompatible with the requested operation."""


class DesignUnavailableError(EbreakError):
    """No built-in unitary 2-design exists for the requested dimension."""


class NotRandomUnitaryError(EbreakError):
    """A channel is not a valid random-unitary (weights + unitaries) mixture."""


class NotInvariantError(EbreakError):
    """A covariance matrix is not invariant under the required rotations."""
