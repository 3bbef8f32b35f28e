"""Orbit spaces ``M/G`` of isometric actions."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ActionNotIsometric, QuotientMismatch
from .group import ActingGroup, isometry_defect, orbits
from .metric import PointedMetricSpace, min_set_distance, validate_metric


@dataclass(frozen=True)
class QuotientSpace:
    """Orbits of ``group`` on ``source`` with the min-over-representatives metric.

    Orbit ids follow the smallest point each orbit contains; the
    representative of an orbit is that smallest point.
    """

    source: PointedMetricSpace
    group: ActingGroup
    orbit_of: tuple[int, ...]
    orbits: tuple[tuple[int, ...], ...]
    space: PointedMetricSpace

    def rep(self, o: int) -> int:
        return self.orbits[o][0]

    @property
    def base_orbit(self) -> int:
        return self.space.base


def orbit_label(space: PointedMetricSpace, members) -> str:
    return "[" + ",".join(space.labels[x] for x in members) + "]"


def build_quotient(space: PointedMetricSpace, group: ActingGroup) -> QuotientSpace:
    """Quotient by an isometric action.

    Raises :class:`ActionNotIsometric` with the first witness otherwise; average
    the metric first for bi-Lipschitz actions.
    """
    bad = isometry_defect(space, group)
    if bad is not None:
        raise ActionNotIsometric(*bad)
    orbs = tuple(orbits(group))
    orbit_of = [0] * space.n
    for o, members in enumerate(orbs):
        for x in members:
            orbit_of[x] = o
    k = len(orbs)
    F = space.field
    matrix = [[F.zero] * k for _ in range(k)]
    for a in range(k):
        for b in range(a + 1, k):
            v = min_set_distance(space, orbs[a], orbs[b])
            if not F.is_pos(v):
                # impossible for disjoint finite orbits of a genuine metric
                raise QuotientMismatch(f"orbits {a} and {b} are at distance zero")
            matrix[a][b] = matrix[b][a] = v
    labels = [orbit_label(space, members) for members in orbs]
    qspace = validate_metric(labels, orbit_of[space.base], matrix, F)
    return QuotientSpace(space, group, tuple(orbit_of), orbs, qspace)


def quotient_map(qspace: QuotientSpace, x: int) -> int:
    """Orbit id of point ``x``."""
    return qspace.orbit_of[x]
