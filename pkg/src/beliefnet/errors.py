"""Exception hierarchy shared across the package."""


class BeliefNetError(Exception):
    """Base class for all package errors."""


class NetworkFormatError(BeliefNetError):
    """Document is not well-formed (syntax, missing/unknown keys, bad types)."""


class NetworkValidationError(BeliefNetError):
    """Network violates a model invariant. Carries the full violation list."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid network: {lines}")


class EvidenceError(BeliefNetError):
    """Unknown variable/value, or contradictory re-instantiation."""


class ImpossibleEvidenceError(BeliefNetError):
    """Propagation found zero total mass: the evidence has probability 0."""


class StateSpaceCapError(BeliefNetError):
    """Exhaustive enumeration would exceed the configured cell cap."""
