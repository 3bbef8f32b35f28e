"""Finite permutation groups acting on the points of a metric space.

A group is stored as its image in the bijections of ``{0, ..., n-1}``:
``elements[k][x]`` is the image of point ``x`` under the ``k``-th element.
Element 0 is always the identity.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Any

from .errors import ClosureExceedsLimit, InvalidPermutation, QuotientMismatch
from .metric import PointedMetricSpace

Perm = tuple[int, ...]

DEFAULT_CLOSURE_LIMIT = 10_000


def check_perm(perm: Sequence[int], n: int) -> Perm:
    p = tuple(int(x) for x in perm)
    if len(p) != n or sorted(p) != list(range(n)):
        raise InvalidPermutation(f"{list(perm)} is not a permutation of 0..{n - 1}")
    return p


def identity(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Perm, q: Perm) -> Perm:
    """``p o q``: apply ``q`` first, then ``p``."""
    return tuple(p[i] for i in q)


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


@dataclass(frozen=True)
class ActingGroup:
    n: int
    elements: tuple[Perm, ...]
    generators: tuple[Perm, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity_index(self) -> int:
        return 0

    def index_of(self, perm: Perm) -> int:
        return self.elements.index(perm)

    @property
    def is_trivial(self) -> bool:
        return self.order == 1


def close_generators(
    generators: Iterable[Sequence[int]],
    n: int,
    limit: int = DEFAULT_CLOSURE_LIMIT,
) -> ActingGroup:
    """Breadth-first closure of ``generators`` under composition.

    For a finite set of permutations, closing under composition also closes
    under inverses (every element has finite order). The identity comes
    first, then elements in BFS discovery order.
    """
    gens: list[Perm] = []
    for g in generators:
        p = check_perm(g, n)
        if p not in gens:
            gens.append(p)
    e = identity(n)
    seen = {e}
    order = [e]
    queue = deque([e])
    while queue:
        u = queue.popleft()
        for g in gens:
            w = compose(g, u)
            if w not in seen:
                if len(order) >= limit:
                    raise ClosureExceedsLimit(limit)
                seen.add(w)
                order.append(w)
                queue.append(w)
    return ActingGroup(n, tuple(order), tuple(gens))


def group_defect(group: ActingGroup) -> tuple[str, int, int] | None:
    """First failure of the group axioms, or None. Exhaustive check."""
    members = set(group.elements)
    if len(members) != group.order:
        return ("duplicate", 0, 0)
    if group.elements[0] != identity(group.n):
        return ("identity", 0, 0)
    for a, u in enumerate(group.elements):
        if inverse(u) not in members:
            return ("inverse", a, a)
        for b, v in enumerate(group.elements):
            if compose(u, v) not in members:
                return ("composition", a, b)
    return None


def orbit(space: PointedMetricSpace, group: ActingGroup, x: int | str) -> tuple[int, ...]:
    """Sorted orbit ``{g(x) : g in G}``; ``x`` is an index or a label."""
    _check_sizes(space, group)
    return _orbit(group, space.index(x))


def _orbit(group: ActingGroup, x: int) -> tuple[int, ...]:
    return tuple(sorted({g[x] for g in group.elements}))


def orbits(group: ActingGroup) -> list[tuple[int, ...]]:
    """All orbits, ordered by their smallest point."""
    seen: set[int] = set()
    out = []
    for x in range(group.n):
        if x not in seen:
            o = _orbit(group, x)
            seen.update(o)
            out.append(o)
    return out


@dataclass(frozen=True)
class DistortionBounds:
    """``r * d(gx, gy) <= d(x, y) <= R * d(gx, gy)`` over all elements and pairs.

    Witnesses are ``(element index, x, y)`` of the lexicographically first
    pair attaining each bound; None for spaces with fewer than two points.
    """

    r: Any
    R: Any
    r_witness: tuple[int, int, int] | None
    R_witness: tuple[int, int, int] | None

    @property
    def isometric(self) -> bool:
        return self.r == 1 and self.R == 1


def distortion_bounds(space: PointedMetricSpace, group: ActingGroup) -> DistortionBounds:
    _check_sizes(space, group)
    F = space.field
    d = space.dist
    r = R = F.one
    rw = Rw = None
    for k, g in enumerate(group.elements):
        for x in range(space.n):
            for y in range(space.n):
                if x == y:
                    continue
                ratio = d[x][y] / d[g[x]][g[y]]
                if rw is None or ratio < r:
                    r, rw = ratio, (k, x, y)
                if Rw is None or ratio > R:
                    R, Rw = ratio, (k, x, y)
    if not F.exact:
        # snap tolerance-level noise so that isometric float actions report exactly 1
        r = F.one if F.eq(r, F.one) else r
        R = F.one if F.eq(R, F.one) else R
    return DistortionBounds(r, R, rw, Rw)


def isometry_defect(space: PointedMetricSpace, group: ActingGroup) -> tuple[int, int, int] | None:
    """First ``(element index, x, y)`` with ``d(gx, gy) != d(x, y)``, else None."""
    _check_sizes(space, group)
    F = space.field
    d = space.dist
    for k, g in enumerate(group.elements):
        for x in range(space.n):
            for y in range(x + 1, space.n):
                if not F.eq(d[g[x]][g[y]], d[x][y]):
                    return (k, x, y)
    return None


def average_metric(space: PointedMetricSpace, group: ActingGroup) -> PointedMetricSpace:
    """Uniform average of the pulled-back metrics ``(x, y) -> d(gx, gy)``.

    The group acts by isometries on the result; if it already did, the metric
    is unchanged.
    """
    _check_sizes(space, group)
    F = space.field
    d = space.dist
    n = space.n
    matrix = [[F.zero] * n for _ in range(n)]
    for x in range(n):
        for y in range(x + 1, n):
            avg = F.mean(d[g[x]][g[y]] for g in group.elements)
            matrix[x][y] = matrix[y][x] = avg
    return space.with_metric(matrix)


def _check_sizes(space: PointedMetricSpace, group: ActingGroup) -> None:
    if space.n != group.n:
        raise QuotientMismatch(f"group acts on {group.n} points, space has {space.n}")
