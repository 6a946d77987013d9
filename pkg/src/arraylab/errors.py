"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised when an operation receives non-finite or mis-shaped data."""


class ConfigError(ValueError):
    """Raised for invalid configuration values or unreadable config files."""


class NoContactError(RuntimeError):
    """Raised when tactile estimation is asked to run on an empty contact map."""


class ProtocolError(RuntimeError):
    """Raised when the episode API is driven out of order (e.g. step after done)."""


class TrainingDivergenceError(RuntimeError):
    """Raised when a PPO update produces non-finite losses or gradients."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
