"""Exception hierarchy shared by the whole package."""


class GFrameError(Exception):
    """Base class for all library errors."""


class InputError(GFrameError):
    """Malformed or incompatible input (shape, descriptor, file schema)."""


class DomainError(GFrameError):
    """Input outside an operation's mathematical domain (singular, non-positive)."""


class UnsupportedConfigurationError(GFrameError):
    """Configuration the method cannot certify, e.g. non-commuting controls."""
