"""Exception hierarchy shared by all modules."""


class KnotShrinkError(Exception):
    """Base class for every error raised by this package."""


class DomainError(KnotShrinkError, ValueError):
    """A mathematical precondition is violated (zero input, non-divisor, root at 1, ...)."""


class EndpointRootError(DomainError):
    """A Sturm count was requested on an interval whose endpoint is a root."""

    def __init__(self, message, endpoint=None):
        super().__init__(message)
        self.endpoint = endpoint


class ParseError(KnotShrinkError, ValueError):
    """Malformed polynomial or matrix text. ``position`` is a 0-based column."""

    def __init__(self, message, text="", position=None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} (at column {position + 1})"
        super().__init__(message)

    def caret(self):
        if self.position is None:
            return ""
        return f"{self.text}\n{' ' * self.position}^"


class PrecisionError(KnotShrinkError, ArithmeticError):
    """Certified enclosure too wide and no refinement is available."""


class ResourceError(KnotShrinkError, RuntimeError):
    """A configured size cap would be exceeded."""


class InputError(KnotShrinkError, OSError):
    """An input source could not be read."""
