import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from freelip.errors import ClosureExceedsLimit, InvalidPermutation, QuotientMismatch
from freelip.group import (
    average_metric,
    close_generators,
    compose,
    distortion_bounds,
    group_defect,
    identity,
    inverse,
    isometry_defect,
    orbit,
    orbits,
)
from freelip.instances import polygon_layers, random_bijection_group, random_point_cloud
from freelip.metric import validate_metric
from freelip.scalar import EXACT


def test_compose_applies_right_factor_first():
    p, q = (1, 2, 0), (0, 2, 1)
    assert compose(p, q) == tuple(p[q[i]] for i in range(3)) == (1, 0, 2)
    assert compose(p, inverse(p)) == identity(3)


def test_closure_orders():
    assert close_generators([], 3).order == 1
    assert close_generators([[1, 2, 3, 0]], 4).order == 4
    _, dihedral = polygon_layers(6, center=True, dihedral=True)
    assert dihedral.order == 12
    # a transposition and a 5-cycle generate S_5
    assert close_generators([[1, 0, 2, 3, 4], [1, 2, 3, 4, 0]], 5).order == 120


def test_closure_identity_first_and_group_axioms():
    g = close_generators([[1, 2, 0, 4, 3]], 5)
    assert g.elements[0] == identity(5)
    assert g.order == 6
    assert group_defect(g) is None


def test_closure_limit():
    with pytest.raises(ClosureExceedsLimit):
        close_generators([[1, 0, 2, 3, 4], [1, 2, 3, 4, 0]], 5, limit=50)


@pytest.mark.parametrize("perm", [[0, 0, 1], [0, 1], [0, 1, 3]])
def test_invalid_permutations(perm):
    with pytest.raises(InvalidPermutation):
        close_generators([perm], 3)


def test_orbits_of_two_layers():
    labels, g = polygon_layers(3, layers=2, center=True)
    assert orbits(g) == [(0, 1, 2), (3, 4, 5), (6,)]
    sp = validate_metric(labels, "c", [[0 if i == j else 1 for j in range(7)] for i in range(7)])
    assert orbit(sp, g, 4) == orbit(sp, g, "L1v2") == (3, 4, 5)
    assert orbit(sp, g, "c") == (6,)


def test_distortion_and_average_hand_example():
    # points 0, 1, 3 on a line; swapping the last two is not an isometry
    sp = validate_metric(["0", "a", "b"], "0", [[0, 1, 3], [1, 0, 2], [3, 2, 0]])
    g = close_generators([[0, 2, 1]], 3)
    b = distortion_bounds(sp, g)
    assert (b.r, b.R) == (Fraction(1, 3), 3)
    assert b.r_witness == (1, 0, 1) and b.R_witness == (1, 0, 2)
    assert not b.isometric
    assert isometry_defect(sp, g) == (1, 0, 1)
    D = average_metric(sp, g)
    assert [list(r) for r in D.dist] == [[0, 2, 2], [2, 0, 2], [2, 2, 0]]
    assert isometry_defect(D, g) is None


def test_average_of_isometric_action_is_unchanged():
    labels, g = polygon_layers(4)
    sp = validate_metric(labels, labels[0], [[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]])
    assert distortion_bounds(sp, g).isometric
    assert average_metric(sp, g).dist == sp.dist


def test_size_mismatch():
    sp = validate_metric(["0", "a"], "0", [[0, 1], [1, 0]])
    with pytest.raises(QuotientMismatch):
        distortion_bounds(sp, close_generators([], 3))


@given(seed=st.integers(0, 10**6))
def test_averaging_properties(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 8)
    sp = random_point_cloud(rng, n, rng.choice([1, 2, "inf"]), EXACT)
    g = random_bijection_group(rng, n)
    assert group_defect(g) is None
    covered = sorted(x for o in orbits(g) for x in o)
    assert covered == list(range(n))
    b = distortion_bounds(sp, g)
    D = average_metric(sp, g)
    validate_metric(D.labels, D.labels[D.base], [list(r) for r in D.dist])
    assert isometry_defect(D, g) is None
    for x in range(n):
        for y in range(n):
            assert b.r * D.dist[x][y] <= sp.dist[x][y] <= b.R * D.dist[x][y]
            # pulled-back metrics averaged by brute force
            assert D.dist[x][y] == sum(Fraction(str(sp.dist[h[x]][h[y]])) for h in g.elements) / g.order
