"""Seeded generators for test instances, vectors and functions.

Everything here takes an explicit ``random.Random`` so results depend only
on the seed.
"""

from __future__ import annotations

import random
from itertools import combinations

from .errors import ClosureExceedsLimit, MetricError
from .free_space import FreeVector, LipFunction
from .group import ActingGroup, close_generators, isometry_defect
from .metric import PointedMetricSpace, metric_from_coords, validate_metric
from .quotient import QuotientSpace
from .scalar import EXACT, Field


def labels_for(n: int) -> list[str]:
    return ["0"] + [f"p{i}" for i in range(1, n)]


def random_point_cloud(rng: random.Random, n: int, p, field: Field = EXACT, dim: int = 2) -> PointedMetricSpace:
    """``n`` distinct random points under the l_p metric, base at the first point.

    Integer coordinates for ``p`` in ``{1, "inf"}``; for ``p = 2`` coordinates
    are random decimals so that exact collinear triples (where rounded square
    roots could break the triangle inequality) essentially never occur.
    """
    for _ in range(100):
        if p == 2:
            pts = [[f"{rng.randint(0, 10**4)}/1000" for _ in range(dim)] for _ in range(n)]
        else:
            pts = [[rng.randint(0, 12) for _ in range(dim)] for _ in range(n)]
        if len({tuple(pt) for pt in pts}) < n:
            continue
        try:
            return validate_metric(labels_for(n), "0", metric_from_coords(pts, p, field), field)
        except MetricError:
            continue
    raise RuntimeError("could not sample a valid point cloud")


def invariant_metric(
    rng: random.Random,
    group: ActingGroup,
    labels: list[str],
    base: str,
    field: Field = EXACT,
    max_weight: int = 9,
) -> PointedMetricSpace:
    """Random G-invariant metric: weights constant on pair-orbits, then shortest paths.

    The shortest-path closure of a G-invariant weighted complete graph is a
    G-invariant metric.
    """
    n = group.n
    weight: dict[tuple[int, int], int] = {}
    for x, y in combinations(range(n), 2):
        if (x, y) in weight:
            continue
        w = rng.randint(1, max_weight)
        for g in group.elements:
            a, b = sorted((g[x], g[y]))
            weight[(a, b)] = w
    D = [[0 if i == j else weight[(min(i, j), max(i, j))] for j in range(n)] for i in range(n)]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if D[i][k] + D[k][j] < D[i][j]:
                    D[i][j] = D[i][k] + D[k][j]
    return validate_metric(labels, base, D, field)


def polygon_layers(k: int, layers: int = 1, center: bool = False, dihedral: bool = False) -> tuple[list[str], ActingGroup]:
    """Points ``(layer, i)`` for ``i`` in ``Z_k`` plus an optional fixed center.

    The group is generated by the rotation ``i -> i + 1`` and, if
    ``dihedral``, the reflection ``i -> -i`` applied to every layer at once.
    """
    labels = [f"L{l}v{i}" for l in range(layers) for i in range(k)]
    if center:
        labels.append("c")
    n = len(labels)

    def layered(fn):
        perm = list(range(n))
        for l in range(layers):
            for i in range(k):
                perm[l * k + i] = l * k + fn(i) % k
        return perm

    gens = [layered(lambda i: i + 1)]
    if dihedral:
        gens.append(layered(lambda i: -i))
    return labels, close_generators(gens, n)


def random_symmetric_instance(rng: random.Random, field: Field = EXACT, max_n: int = 12, max_order: int = 24):
    """Cyclic or dihedral symmetry of polygon layers with a random invariant metric.

    The base point is a random point, so the action need not fix it.
    """
    while True:
        k = rng.randint(3, max_n)
        layers = rng.randint(1, 2)
        center = rng.random() < 0.3
        dihedral = rng.random() < 0.5
        n = k * layers + int(center)
        if n > max_n or (2 * k if dihedral else k) > max_order:
            continue
        labels, group = polygon_layers(k, layers, center, dihedral)
        base = rng.choice(labels)
        return invariant_metric(rng, group, labels, base, field), group


def random_bijection_group(rng: random.Random, n: int, max_order: int = 24) -> ActingGroup:
    """Group generated by one or two random permutations, with a bounded order.

    Two random permutations usually generate the full symmetric group, so
    oversized closures are abandoned early and resampled.
    """
    while True:
        gens = []
        for _ in range(rng.randint(1, 2)):
            perm = list(range(n))
            rng.shuffle(perm)
            gens.append(perm)
        try:
            group = close_generators(gens, n, limit=max_order)
        except ClosureExceedsLimit:
            continue
        if group.order > 1:
            return group


def random_nonisometric_instance(rng: random.Random, field: Field = EXACT):
    """Random metric with a random bijection group that is not isometric."""
    while True:
        n = rng.randint(3, 8)
        space = random_point_cloud(rng, n, rng.choice([1, 2, "inf"]), field)
        group = random_bijection_group(rng, n)
        if isometry_defect(space, group) is not None:
            return space, group


def random_free_vector(rng: random.Random, space: PointedMetricSpace) -> FreeVector:
    """Integer coefficients in [-3, 3] on a uniformly random subset of non-base points."""
    F = space.field
    c = [F.zero] * space.n
    for x in space.non_base:
        if rng.random() < 0.5:
            c[x] = F.convert(rng.randint(-3, 3))
    return FreeVector(tuple(c), space.base)


def random_lip_function(rng: random.Random, space: PointedMetricSpace) -> LipFunction:
    """Random integers rescaled by a random denominator, shifted to vanish at the base."""
    F = space.field
    raw = [F.convert(rng.randint(-6, 6)) for _ in range(space.n)]
    scale = rng.randint(1, 4)
    vals = [(r - raw[space.base]) / scale for r in raw]
    vals[space.base] = F.zero
    return LipFunction(tuple(vals), space.base)


def random_quotient_function(rng: random.Random, qspace: QuotientSpace) -> LipFunction:
    return random_lip_function(rng, qspace.space)


def random_quotient_vector(rng: random.Random, qspace: QuotientSpace) -> FreeVector:
    return random_free_vector(rng, qspace.space)


def random_subset(rng: random.Random, n: int) -> list[int]:
    size = rng.randint(1, n)
    return sorted(rng.sample(range(n), size))


# documents for the bundled examples (instance-file format)
NAMED_EXAMPLES: dict[str, dict] = {
    "trivial": {
        "points": ["0", "a", "b", "c"],
        "base": "0",
        "metric": [[0, 1, 3, 2], [1, 0, 2, 2], [3, 2, 0, 2], [2, 2, 2, 0]],
        "generators": [],
        "mode": "exact",
        "seed": 7,
        "trials": 20,
    },
    "swap": {
        "points": ["0", "a", "b"],
        "base": "0",
        "metric": [[0, 1, 1], [1, 0, 2], [1, 2, 0]],
        "generators": [["0", "b", "a"]],
        "mode": "exact",
        "seed": 7,
        "trials": 20,
    },
    "c4_square": {
        "points": ["a", "b", "c", "d"],
        "base": "a",
        "metric": {"coords": [[0, 0], [1, 0], [1, 1], [0, 1]], "p": 1},
        "generators": [["b", "c", "d", "a"]],
        "mode": "exact",
        "seed": 7,
        "trials": 20,
    },
    "dihedral_hexagon": {
        "points": ["v0", "v1", "v2", "v3", "v4", "v5", "c"],
        "base": "v0",
        "metric": [
            [0, 1, 2, 3, 2, 1, "3/2"],
            [1, 0, 1, 2, 3, 2, "3/2"],
            [2, 1, 0, 1, 2, 3, "3/2"],
            [3, 2, 1, 0, 1, 2, "3/2"],
            [2, 3, 2, 1, 0, 1, "3/2"],
            [1, 2, 3, 2, 1, 0, "3/2"],
            ["3/2", "3/2", "3/2", "3/2", "3/2", "3/2", 0],
        ],
        "generators": [
            ["v1", "v2", "v3", "v4", "v5", "v0", "c"],
            ["v0", "v5", "v4", "v3", "v2", "v1", "c"],
        ],
        "mode": "exact",
        "seed": 7,
        "trials": 20,
    },
}
