"""Exception hierarchy shared by every module."""

from __future__ import annotations


class CyclicFlatsError(Exception):
    """Base class for all library errors."""


class DimensionMismatchError(CyclicFlatsError, ValueError):
    pass


class FieldMismatchError(CyclicFlatsError, ValueError):
    pass


class ResourceLimitError(CyclicFlatsError):
    """Raised instead of attempting an enumeration beyond the desk-scale caps."""


class NotCoordinateError(CyclicFlatsError, ValueError):
    pass


class BlockMismatchError(CyclicFlatsError, ValueError):
    pass


class AxiomViolationError(CyclicFlatsError, ValueError):
    """A rank table failed a (q-)matroid axiom; ``witness`` names the offending instance."""

    def __init__(self, axiom: str, witness: tuple, message: str | None = None):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"{axiom}: {message}" if message else f"{axiom} violated at {witness!r}")


class InvalidCyclicFlatsError(CyclicFlatsError, ValueError):
    pass


class NotAChainError(CyclicFlatsError, ValueError):
    pass


class FormatError(CyclicFlatsError, ValueError):
    """Malformed text literal or file."""
