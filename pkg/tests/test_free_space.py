import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from freelip.duality import dual_lp_value, lipschitz_polytope_vertices
from freelip.errors import ActionNotIsometric, QuotientMismatch
from freelip.free_space import (
    FreeVector,
    LipFunction,
    delta,
    dual_witness,
    kr_norm,
    lip_norm,
    pairing,
    pushforward,
    quotient_norm,
)
from freelip.group import close_generators
from freelip.instances import (
    random_free_vector,
    random_lip_function,
    random_point_cloud,
    random_symmetric_instance,
)
from freelip.metric import validate_metric
from freelip.quotient import build_quotient
from freelip.scalar import EXACT, FLOAT
from freelip.verify import load_instance


def line_space(field=EXACT):
    # points 0, 1, 3 on the real line
    return validate_metric(["0", "a", "b"], "0", [[0, 1, 3], [1, 0, 2], [3, 2, 0]], field)


def transport_oracle(space, v):
    """Independent float oracle: min-cost flow LP over all ordered pairs via HiGHS."""
    n = space.n
    pairs = [(x, y) for x in range(n) for y in range(n) if x != y]
    if not pairs:
        return 0.0
    A = np.zeros((n - 1, len(pairs)))
    rows = {x: r for r, x in enumerate(space.non_base)}
    for col, (x, y) in enumerate(pairs):
        if x in rows:
            A[rows[x], col] += 1
        if y in rows:
            A[rows[y], col] -= 1
    b = [float(v.coeffs[x]) for x in space.non_base]
    c = [float(space.dist[x][y]) for x, y in pairs]
    res = linprog(c, A_eq=A, b_eq=b, bounds=(0, None), method="highs")
    assert res.status == 0
    return res.fun


def test_hand_norms():
    sp = line_space()
    a, b = delta(sp, 1), delta(sp, 2)
    assert kr_norm(sp, a)[0] == 1
    assert kr_norm(sp, b - a)[0] == 2
    # 2 units leave a: one to b (cost 2), one to the base (cost 1)
    value, plan = kr_norm(sp, a * 2 - b)
    assert value == 3
    assert plan.flows == ((1, 0, 1), (1, 2, 1))
    assert kr_norm(sp, FreeVector.zero(sp))[0] == 0
    assert delta(sp, 0).is_zero(EXACT)


def test_hand_dual_witness():
    sp = line_space()
    v = delta(sp, 1) * 2 - delta(sp, 2)
    f = dual_witness(sp, v)
    assert pairing(f, v) == 3
    assert lip_norm(sp, f) <= 1
    assert f(0) == 0


def test_hand_lip_norm():
    sp = line_space()
    f = LipFunction.from_mapping(sp, {"a": "1/2", "b": 3})
    # slopes 1/2, 1 and 5/4
    assert lip_norm(sp, f) == Fraction(5, 4)
    with pytest.raises(ValueError):
        LipFunction.from_mapping(sp, {"0": 1})


def test_vertices_of_line_polytope():
    # f(a) in [-1, 1], f(b) in [-3, 3], |f(a) - f(b)| <= 2
    verts = {tuple(int(x) for x in v) for v in lipschitz_polytope_vertices(line_space())}
    assert verts == {(0, 1, 3), (0, 1, -1), (0, -1, 1), (0, -1, -3)}


def test_swap_quotient_norm(instance_path):
    inst = load_instance(instance_path("swap"))
    sp, g = inst.space, inst.group
    a, b = delta(sp, 1), delta(sp, 2)
    assert quotient_norm(sp, g, a) == 1
    assert quotient_norm(sp, g, a - b) == 0
    assert quotient_norm(sp, g, a + b) == 2
    q = build_quotient(sp, g)
    assert pushforward(q, a - b).is_zero(EXACT)


def test_quotient_norm_refuses_non_isometric():
    sp = line_space()
    with pytest.raises(ActionNotIsometric):
        quotient_norm(sp, close_generators([[0, 2, 1]], 3), delta(sp, 1))


def test_mismatched_spaces():
    sp = line_space()
    other = validate_metric(["0", "a"], "0", [[0, 1], [1, 0]])
    with pytest.raises(QuotientMismatch):
        kr_norm(sp, delta(other, 1))
    with pytest.raises(QuotientMismatch):
        pairing(LipFunction.zero(sp), delta(other, 1))


@given(seed=st.integers(0, 10**6), p=st.sampled_from([1, 2, "inf"]))
def test_duality_three_ways(seed, p):
    rng = random.Random(seed)
    sp = random_point_cloud(rng, rng.randint(2, 7), p, EXACT)
    for _ in range(5):
        v = random_free_vector(rng, sp)
        value, plan = kr_norm(sp, v)
        assert value == dual_lp_value(sp, v, "simplex")
        if sp.n <= 6:
            assert value == dual_lp_value(sp, v, "vertices")
        assert float(value) == pytest.approx(transport_oracle(sp, v), rel=1e-9, abs=1e-9)
        f = dual_witness(sp, v)
        assert pairing(f, v) == value and lip_norm(sp, f) <= 1
        div = plan.divergence(sp)
        assert all(div[x] == v.coeffs[x] for x in sp.non_base)


@given(seed=st.integers(0, 10**6))
def test_float_backend_matches_oracle(seed):
    rng = random.Random(seed)
    sp = random_point_cloud(rng, rng.randint(3, 10), rng.choice([1, 2, "inf"]), FLOAT)
    for _ in range(5):
        v = random_free_vector(rng, sp)
        value = kr_norm(sp, v)[0]
        assert value == pytest.approx(transport_oracle(sp, v), rel=1e-9, abs=1e-9)
        assert FLOAT.eq(value, dual_lp_value(sp, v, "simplex"))


@given(seed=st.integers(0, 10**6))
def test_norm_axioms(seed):
    rng = random.Random(seed)
    sp = random_point_cloud(rng, rng.randint(2, 10), rng.choice([1, 2, "inf"]), EXACT)
    v, w = random_free_vector(rng, sp), random_free_vector(rng, sp)
    alpha = EXACT.convert(Fraction(rng.randint(-5, 5), rng.randint(1, 4)))
    nv = kr_norm(sp, v)[0]
    assert kr_norm(sp, v * alpha)[0] == abs(alpha) * nv
    assert kr_norm(sp, v + w)[0] <= nv + kr_norm(sp, w)[0]
    assert (nv == 0) == v.is_zero(EXACT)
    for x in range(sp.n):
        for y in range(sp.n):
            assert kr_norm(sp, delta(sp, x) - delta(sp, y))[0] == sp.dist[x][y]


@given(seed=st.integers(0, 10**6))
def test_lip_norm_is_max_over_molecules(seed):
    rng = random.Random(seed)
    sp = random_point_cloud(rng, rng.randint(2, 8), rng.choice([1, 2, "inf"]), EXACT)
    f = random_lip_function(rng, sp)
    best = max(
        (abs(pairing(f, delta(sp, x) - delta(sp, y))) / sp.dist[x][y] for x in range(sp.n) for y in range(sp.n) if x != y),
        default=0,
    )
    assert lip_norm(sp, f) == best
    v = random_free_vector(rng, sp)
    assert abs(pairing(f, v)) <= lip_norm(sp, f) * kr_norm(sp, v)[0]


@given(seed=st.integers(0, 10**6))
def test_quotient_norm_equals_pushforward_norm(seed):
    rng = random.Random(seed)
    sp, g = random_symmetric_instance(rng, EXACT, max_n=8, max_order=16)
    q = build_quotient(sp, g)
    for _ in range(3):
        v = random_free_vector(rng, sp)
        pv = pushforward(q, v)
        assert quotient_norm(sp, g, v) == kr_norm(q.space, pv)[0]
        assert kr_norm(q.space, pv)[0] <= kr_norm(sp, v)[0]
