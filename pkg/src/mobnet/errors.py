"""Exception types shared across the package."""


class MobnetError(ValueError):
    """Base class for all mobnet input errors."""


class ParseError(MobnetError):
    """A file could not be parsed; the message names line and column."""


class ValidationError(MobnetError):
    """Parsed input violates a domain invariant."""
