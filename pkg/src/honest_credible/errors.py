"""Exception types raised by the package."""


class InvalidInputError(ValueError):
    """Non-finite or malformed input data."""


class DomainError(ValueError):
    """A parameter lies outside the region where an operation is defined."""


class TruncationError(ValueError):
    """A finite truncation is too short to hold the requested coefficients."""


class PrecisionError(ValueError):
    """Too few Monte-Carlo draws for the requested quantile."""


class ConfigError(ValueError):
    """Invalid experiment configuration."""


class ResourceError(RuntimeError):
    """A requested truncation exceeds the memory budget."""
