"""Exception hierarchy shared across the package."""


class WeavecraftError(Exception):
    """Base class for all package errors."""


class DomainError(WeavecraftError):
    """An argument is outside its mathematical domain (bad rule number, zero width...)."""


class ValidationError(WeavecraftError):
    """A composite value violates a structural invariant (table size, color lengths...)."""


class ParseError(WeavecraftError):
    """A byte stream could not be decoded.

    ``offset`` carries the byte position where decoding failed, when known.
    """

    def __init__(self, message, offset=None):
        super().__init__(message)
        self.offset = offset


class CapacityError(WeavecraftError):
    """A draft needs more shafts than the loom provides."""

    def __init__(self, required, capacity):
        super().__init__(f"draft needs {required} shafts, loom capacity is {capacity}")
        self.required = required
        self.capacity = capacity


class RepairError(WeavecraftError):
    """Float repair failed to converge within its iteration bound."""
