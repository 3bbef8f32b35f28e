"""Exception hierarchy. Every error carries the witnessing indices or labels."""

from __future__ import annotations


class FreelipError(Exception):
    """Base class for all library errors."""


class MetricError(FreelipError, ValueError):
    pass


class BadShape(MetricError):
    pass


class NonZeroDiagonal(MetricError):
    def __init__(self, i):
        self.i = i
        super().__init__(f"dist[{i}][{i}] is not zero")


class NotSymmetric(MetricError):
    def __init__(self, i, j):
        self.i, self.j = i, j
        super().__init__(f"dist[{i}][{j}] != dist[{j}][{i}]")


class NegativeOrZeroOffDiagonal(MetricError):
    def __init__(self, i, j):
        self.i, self.j = i, j
        super().__init__(f"dist[{i}][{j}] must be strictly positive")


class TriangleViolation(MetricError):
    """``dist[x][z] > dist[x][via] + dist[via][z]``."""

    def __init__(self, x, z, via):
        self.x, self.z, self.via = x, z, via
        super().__init__(f"triangle inequality fails: d({x},{z}) > d({x},{via}) + d({via},{z})")

    @property
    def triple(self):
        return (self.x, self.z, self.via)


class EmptySet(FreelipError, ValueError):
    pass


class InvalidPermutation(FreelipError, ValueError):
    pass


class ClosureExceedsLimit(FreelipError):
    def __init__(self, limit: int):
        self.limit = limit
        super().__init__(f"group closure exceeds {limit} elements")


class ActionNotIsometric(FreelipError):
    def __init__(self, g: int, x: int, y: int):
        self.g, self.x, self.y = g, x, y
        super().__init__(f"element {g} does not preserve d({x},{y})")


class QuotientMismatch(FreelipError):
    pass


class NotInvariant(FreelipError):
    def __init__(self, g: int, x: int):
        self.g, self.x = g, x
        super().__init__(f"function differs at point {x} and its image under element {g}")


class ParseError(FreelipError, ValueError):
    def __init__(self, where: str, message: str):
        self.where = where
        super().__init__(f"{where}: {message}")
