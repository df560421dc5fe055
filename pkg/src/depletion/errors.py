"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ValidationError(ValueError):
    """Input data violates a structural invariant (positivity, lengths)."""


class ConvergenceError(RuntimeError):
    """An iterative kernel exhausted its iteration budget."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ConfigError(ValueError):
    """An experiment configuration is malformed or inconsistent."""
