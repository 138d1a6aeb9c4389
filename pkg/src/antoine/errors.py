"""Exception types shared across the package."""

from __future__ import annotations


class AntoineError(Exception):
    """Base class for all errors raised by this package."""


class PathError(AntoineError, LookupError):
    """A slot path does not resolve inside a defining sequence."""


class AddressError(AntoineError, LookupError):
    """A point address does not name a point of the Cantor set."""


class TruncationError(AntoineError):
    """An analysis that needs a full tower met a truncated slot."""


class ShapeError(AntoineError, ValueError):
    """A node has the wrong chain shape for the requested operation."""


class NestingError(AntoineError, ValueError):
    """Index declarations do not form a nested chain."""


class HypothesisError(AntoineError, ValueError):
    """The input does not satisfy the precondition of a computation that relies on it."""


class DomainError(AntoineError, ValueError):
    """A numeric argument is outside its allowed range."""


class SerializationError(AntoineError, ValueError):
    """A serialized defining sequence is malformed."""


class ParseError(AntoineError, ValueError):
    """A group specification string could not be parsed."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")
