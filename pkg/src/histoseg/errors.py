"""Exception types shared across the toolkit."""


class HistosegError(Exception):
    """Base class for all toolkit errors."""


class DecodeError(HistosegError):
    """Raised when an input byte stream cannot be decoded as an image."""


class DomainError(HistosegError, ValueError):
    """Raised when an argument is outside an operation's domain."""
