"""Exception hierarchy.

The CLI maps these onto exit codes: domain errors exit 2, capability
errors exit 3 and invariant violations exit 4.
"""


class SolenoidLabError(Exception):
    pass


class DomainError(SolenoidLabError, ValueError):
    """An argument lies outside the domain of the operation."""


class ValidationError(DomainError):
    """A solenoid system is inconsistent with its characteristic sequence."""

    def __init__(self, message, prime=None):
        super().__init__(message)
        self.prime = prime


class CapabilityError(SolenoidLabError):
    """A requested size exceeds a documented computational cap."""


class InvariantViolation(SolenoidLabError):
    """A computed quantity broke an invariant that must always hold."""


class ReconstructionError(SolenoidLabError):
    """No rational function within the order bound reproduced the data."""


class InconsistencyError(SolenoidLabError):
    """A round-trip check failed (usually a bound was chosen too small)."""


class ConstructionError(SolenoidLabError):
    """The growth construction needed a negative multiplicity."""
