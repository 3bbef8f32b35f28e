"""Finite pointed metric spaces and set distances between point subsets."""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any

from .errors import (
    BadShape,
    EmptySet,
    NegativeOrZeroOffDiagonal,
    NonZeroDiagonal,
    NotSymmetric,
    TriangleViolation,
)
from .scalar import EXACT, Field


@dataclass(frozen=True)
class PointedMetricSpace:
    """Points are labelled ``0..n-1`` internally; ``labels`` are opaque strings.

    Build instances through :func:`validate_metric`; the constructor itself
    does not check the metric axioms.
    """

    labels: tuple[str, ...]
    base: int
    dist: tuple[tuple[Any, ...], ...]
    field: Field = EXACT
    _index: dict = dc_field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(self.labels)})

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label: str | int) -> int:
        if isinstance(label, int):
            if not 0 <= label < self.n:
                raise KeyError(label)
            return label
        return self._index[label]

    def d(self, i: int, j: int):
        return self.dist[i][j]

    @property
    def non_base(self) -> list[int]:
        return [i for i in range(self.n) if i != self.base]

    def with_metric(self, matrix) -> PointedMetricSpace:
        """Same points and base with a new (validated) distance matrix."""
        return validate_metric(self.labels, self.labels[self.base], matrix, self.field)


def validate_metric(
    labels: Sequence[str],
    base: str | int,
    matrix: Sequence[Sequence[Any]],
    field: Field = EXACT,
) -> PointedMetricSpace:
    """Check the metric axioms and return the space.

    The first violated axiom raises, in the order: shape, diagonal, symmetry,
    positivity, triangle inequality. Triangle violations report ``(x, z, via)``
    as labels, scanning ``x``, then ``z``, then ``via`` in index order.
    """
    labels = tuple(str(lab) for lab in labels)
    n = len(labels)
    if n < 1:
        raise BadShape("a pointed metric space needs at least one point")
    if len(set(labels)) != n:
        raise BadShape("point labels must be distinct")
    if len(matrix) != n or any(len(row) != n for row in matrix):
        raise BadShape(f"distance matrix must be {n}x{n}")
    if isinstance(base, int) and not isinstance(base, bool):
        if not 0 <= base < n:
            raise BadShape(f"base index {base} out of range")
        b = base
    else:
        if base not in labels:
            raise BadShape(f"base {base!r} is not a point label")
        b = labels.index(base)

    dist = tuple(tuple(field.convert(x) for x in row) for row in matrix)
    for i in range(n):
        if not field.is_zero(dist[i][i]):
            raise NonZeroDiagonal(labels[i])
    for i in range(n):
        for j in range(i + 1, n):
            if not field.eq(dist[i][j], dist[j][i]):
                raise NotSymmetric(labels[i], labels[j])
    for i in range(n):
        for j in range(n):
            if i != j and not field.is_pos(dist[i][j]):
                raise NegativeOrZeroOffDiagonal(labels[i], labels[j])
    if not field.exact:
        # tolerance-equal halves collapse onto the upper triangle
        dist = tuple(tuple(dist[min(i, j)][max(i, j)] for j in range(n)) for i in range(n))
    witness = first_triangle_violation(dist, field)
    if witness is not None:
        x, z, via = witness
        raise TriangleViolation(labels[x], labels[z], labels[via])
    return PointedMetricSpace(labels, b, dist, field)


def first_triangle_violation(dist, field: Field) -> tuple[int, int, int] | None:
    n = len(dist)
    for x in range(n):
        dx = dist[x]
        for z in range(n):
            for via in range(n):
                if not field.le(dx[z], dx[via] + dist[via][z]):
                    return (x, z, via)
    return None


def _nonempty(points: Iterable[int], what: str) -> list[int]:
    pts = list(points)
    if not pts:
        raise EmptySet(f"{what} is empty")
    return pts


def min_set_distance(space: PointedMetricSpace, A: Iterable[int], B: Iterable[int]):
    """Smallest distance between a point of ``A`` and a point of ``B``."""
    A = _nonempty(A, "A")
    B = _nonempty(B, "B")
    return min(space.dist[a][b] for a in A for b in B)


def hausdorff_distance(space: PointedMetricSpace, A: Iterable[int], B: Iterable[int]):
    A = _nonempty(A, "A")
    B = _nonempty(B, "B")
    d = space.dist
    forward = max(min(d[a][b] for b in B) for a in A)
    backward = max(min(d[a][b] for a in A) for b in B)
    return max(forward, backward)


def metric_from_coords(coords: Sequence[Sequence[Any]], p, field: Field = EXACT) -> list[list[Any]]:
    """Distance matrix of points under the l_p norm, ``p`` in ``{1, 2, "inf"}``.

    In the exact backend, ``p=2`` distances that are not rational square roots
    are approximated in double precision and then taken as exact rationals.
    """
    pts = [[field.convert(c) for c in row] for row in coords]
    if len({len(row) for row in pts}) > 1:
        raise BadShape("coordinate rows must have equal length")
    n = len(pts)
    out = [[field.zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            diffs = [abs(a - b) for a, b in zip(pts[i], pts[j])]
            if p == 1:
                v = sum(diffs, field.zero)
            elif p in ("inf", "Infinity", float("inf")):
                v = max(diffs, default=field.zero)
            elif p == 2:
                v = _sqrt(sum((t * t for t in diffs), field.zero), field)
            else:
                raise BadShape(f"unsupported norm p={p!r}")
            out[i][j] = out[j][i] = v
    return out


def _sqrt(x, field: Field):
    if not field.exact:
        return math.sqrt(x)
    num, den = int(x.numerator), int(x.denominator)
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return field.convert(rn) / rd
    return field.convert(Fraction(math.sqrt(num / den)))
