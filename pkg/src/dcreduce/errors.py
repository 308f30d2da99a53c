"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Input dimensions do not match."""


class FormatError(ValueError):
    """Malformed input data (files, tables, matrices)."""


class DomainError(ValueError):
    """Input is outside an operation's mathematical domain."""


class ParameterError(ValueError):
    """Invalid configuration or generator parameters."""


class ResourceError(RuntimeError):
    """The request exceeds a configured resource ceiling."""


class InternalError(RuntimeError):
    """Invariant violation that indicates a bug rather than bad input."""
