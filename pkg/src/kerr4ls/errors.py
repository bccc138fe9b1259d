"""Exception hierarchy.

Physics guards (Raman violation, degeneracies, small denominators) derive
from :class:`PhysicsGuardError`; the CLI maps each family to an exit code.
"""


class Kerr4lsError(Exception):
    """Base class for all package errors."""


class InvalidInputError(Kerr4lsError, ValueError):
    """Malformed call arguments (schedules, sweep specs, shapes)."""


class ConfigError(InvalidInputError):
    """Invalid CLI run configuration."""


class PhysicsGuardError(Kerr4lsError, ValueError):
    """Parameters fall outside the regime where the analysis is defined."""


class RamanResonanceError(PhysicsGuardError):
    pass


class DegenerateSubspaceError(PhysicsGuardError):
    pass


class DegenerateLambdaError(PhysicsGuardError):
    pass


class NearDegeneracyError(PhysicsGuardError):
    """Unperturbed levels too close for nondegenerate perturbation theory."""

    def __init__(self, message, pair=None, gap=None):
        super().__init__(message)
        self.pair = pair
        self.gap = gap


class KerrDomainError(PhysicsGuardError):
    pass


class AmbiguousMatchError(PhysicsGuardError):
    pass


class NonHermitianError(Kerr4lsError, ValueError):
    pass


class SolverError(Kerr4lsError, RuntimeError):
    """The eigensolver did not converge within its sweep budget."""
