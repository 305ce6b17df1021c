"""Domain exceptions shared across the package.

Every error carries a machine-readable ``code`` (its class name) so the CLI
can surface failures uniformly with exit status 1.
"""

from __future__ import annotations


class DomainError(Exception):
    """Base class for all domain-level failures."""

    @property
    def code(self) -> str:
        return type(self).__name__


class InvalidRank(DomainError):
    pass


class SpecMismatch(DomainError):
    pass


class BlockViolation(DomainError):
    pass


class NotClosed(DomainError):
    pass


class UnknownLetter(DomainError):
    pass


class OddRank(DomainError):
    pass


class OrientationError(DomainError):
    pass


class NotInvertible(DomainError):
    pass


class NotUnit(DomainError):
    pass


class RankMismatch(DomainError):
    pass


class NotACocycle(DomainError):
    pass


class NotSolvable(DomainError):
    pass


class FreeActionLost(DomainError):
    pass


class NumericalDrift(DomainError):
    pass


class NotRegularSemisimple(DomainError):
    pass


class NotComparable(DomainError):
    pass


class NonPolynomialFlow(DomainError):
    pass


class NotInR(DomainError):
    pass


class BadFiberPoint(DomainError):
    pass


class NodesCollide(DomainError):
    pass


class RegularizationFailed(DomainError):
    pass


class NotConnectedAtRank1(DomainError):
    pass


class ParseError(DomainError):
    def __init__(self, message: str, pos: int = -1):
        super().__init__(message)
        self.pos = pos
