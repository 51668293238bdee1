"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""


class NormalizationError(DomainError):
    """Weights, amplitudes or a trace fail to sum to one."""


class BracketError(DomainError):
    """A root-finding bracket does not straddle a sign change."""


class StateFileError(ValueError):
    """A state file could not be parsed into a valid state."""
