"""Exception types shared across the package."""


class EquicatError(Exception):
    pass


class BoundExceeded(EquicatError, ValueError):
    """An enumeration would exceed its configured size bound."""


class ContextError(EquicatError, ValueError):
    """Objects built over different groups/actions were combined."""


class InvariantError(EquicatError, ValueError):
    """Input data violates a structural invariant (group axioms, functoriality, ...)."""


class DescentError(EquicatError):
    """Composition does not descend to orbits; carries the offending pair."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class VerificationError(EquicatError, AssertionError):
    """A brute-force verification failed; ``witness`` holds the offending data."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
