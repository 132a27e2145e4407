"""Exception types shared across the package."""


class BbgkzError(Exception):
    """Base class for errors raised by this package."""


class ConfigurationError(BbgkzError, ValueError):
    """Invalid input data (bad configuration, fan, matrix shape...)."""


class BoundInsufficient(BbgkzError):
    """A bounded search was inconclusive; raising the bound may help."""


class ResourceLimit(BbgkzError):
    """A computation exceeded its step budget."""

    def __init__(self, message, progress=None):
        super().__init__(message)
        self.progress = progress
