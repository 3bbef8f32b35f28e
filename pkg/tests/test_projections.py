import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from freelip.errors import ActionNotIsometric, NotInvariant, QuotientMismatch
from freelip.free_space import LipFunction, delta, kr_norm, lip_norm, pairing, pushforward
from freelip.group import close_generators, compose
from freelip.instances import (
    random_free_vector,
    random_lip_function,
    random_quotient_function,
    random_quotient_vector,
    random_symmetric_instance,
)
from freelip.linalg import matmul, matrices_equal, nullspace, rank, same_span, transpose
from freelip.metric import validate_metric
from freelip.projections import (
    apply_affine,
    apply_induced,
    dual_action,
    fixed_space_basis,
    induced_matrix,
    kernel_basis,
    operator_norm_certificate,
    project_free,
    project_lip,
    projection_matrix,
    psi,
    psi_inverse,
    t_embed,
)
from freelip.quotient import build_quotient
from freelip.scalar import EXACT
from freelip.verify import load_instance

HALF = Fraction(1, 2)


def load(instance_path, name):
    inst = load_instance(instance_path(name))
    return inst.space, inst.group, build_quotient(inst.space, inst.group)


def test_swap_projection(instance_path):
    sp, g, q = load(instance_path, "swap")
    assert projection_matrix(sp, g) == [[HALF, HALF], [HALF, HALF]]
    assert project_free(sp, g, delta(sp, 1)).coeffs == (0, HALF, HALF)
    assert len(fixed_space_basis(sp, g)) == 1
    assert len(kernel_basis(sp, g)) == 1
    assert operator_norm_certificate(sp, g)[0] == 1


def test_transitive_action_projects_to_zero(instance_path):
    sp, g, q = load(instance_path, "c4_square")
    # the base point moves, yet every R(delta x) vanishes
    assert all(all(v == 0 for v in row) for row in projection_matrix(sp, g))
    assert fixed_space_basis(sp, g) == []
    assert len(kernel_basis(sp, g)) == 3


def test_hexagon_center_image(instance_path):
    sp, g, q = load(instance_path, "dihedral_hexagon")
    c = sp.index("c")
    Rc = project_free(sp, g, delta(sp, c))
    sixth = Fraction(-1, 6)
    assert Rc.coeffs == (0, sixth, sixth, sixth, sixth, sixth, 1)
    # one sixth of a unit travels from c to each vertex
    assert kr_norm(sp, Rc)[0] == Fraction(3, 2)
    w = delta(q.space, 1)
    assert t_embed(sp, g, q, w) == Rc
    assert len(fixed_space_basis(sp, g)) == 1 and len(kernel_basis(sp, g)) == 5


def test_dual_action_hand_example(instance_path):
    sp, g, _ = load(instance_path, "swap")
    swap = g.elements[1]
    f = LipFunction.from_mapping(sp, {"a": 1})
    assert dual_action(sp, swap, f).values == (0, 0, 1)


def test_affine_action_extends_points(instance_path):
    sp, g, _ = load(instance_path, "c4_square")
    for h in g.elements:
        for x in range(sp.n):
            assert apply_affine(sp, h, delta(sp, x)) == delta(sp, h[x])


def test_psi_inverse_rejects_non_invariant(instance_path):
    sp, g, q = load(instance_path, "swap")
    with pytest.raises(NotInvariant):
        psi_inverse(q, LipFunction.from_mapping(sp, {"a": 1}))


def test_t_embed_checks_its_inputs(instance_path):
    sp, g, q = load(instance_path, "swap")
    with pytest.raises(QuotientMismatch):
        t_embed(sp, g, q, delta(sp, 1))
    other, og, oq = load(instance_path, "trivial")
    with pytest.raises(QuotientMismatch):
        t_embed(sp, g, oq, delta(oq.space, 1))


def test_non_isometric_action_is_refused():
    sp = validate_metric(["0", "a", "b"], "0", [[0, 1, 3], [1, 0, 2], [3, 2, 0]])
    g = close_generators([[0, 2, 1]], 3)
    with pytest.raises(ActionNotIsometric):
        project_free(sp, g, delta(sp, 1))
    with pytest.raises(ActionNotIsometric):
        project_lip(sp, g, LipFunction.zero(sp))


def symmetric(seed, max_n=9):
    sp, g = random_symmetric_instance(random.Random(seed), EXACT, max_n=max_n, max_order=18)
    return sp, g, build_quotient(sp, g)


@given(seed=st.integers(0, 10**6))
def test_induced_isometries(seed):
    sp, g, _ = symmetric(seed)
    mats = {h: induced_matrix(sp, h) for h in g.elements}
    for h in g.elements:
        for k in g.generators:
            assert matrices_equal(matmul(mats[k], mats[h], EXACT), mats[compose(k, h)], EXACT)
        for x in range(sp.n):
            for y in range(sp.n):
                m = delta(sp, x) - delta(sp, y)
                assert kr_norm(sp, apply_induced(sp, h, m))[0] == sp.dist[x][y]


@given(seed=st.integers(0, 10**6))
def test_projection_structure(seed):
    sp, g, q = symmetric(seed)
    k = sp.n - 1
    R = projection_matrix(sp, g)
    assert matrices_equal(matmul(R, R, EXACT), R, EXACT)
    fixed = [v.nonbase() for v in fixed_space_basis(sp, g)]
    ker = [v.nonbase() for v in kernel_basis(sp, g)]
    assert len(fixed) + len(ker) == k
    assert len(fixed) == q.space.n - 1
    assert same_span(transpose(R), fixed, k, EXACT)
    assert same_span(ker, nullspace(R, k, EXACT), k, EXACT)
    assert rank(R, k, EXACT) == len(fixed)
    value, _ = operator_norm_certificate(sp, g)
    assert value <= 1


@given(seed=st.integers(0, 10**6))
def test_invariance_and_adjoint(seed):
    sp, g, _ = symmetric(seed)
    rng = random.Random(seed + 1)
    v = random_free_vector(rng, sp)
    f = random_lip_function(rng, sp)
    Rv = project_free(sp, g, v)
    for h in g.elements:
        assert apply_induced(sp, h, Rv) == Rv
        assert project_free(sp, g, apply_induced(sp, h, v)) == Rv
        assert project_free(sp, g, apply_affine(sp, h, v)) == Rv
        assert lip_norm(sp, dual_action(sp, h, f)) == lip_norm(sp, f)
    assert pairing(project_lip(sp, g, f), v) == pairing(f, Rv)
    Pf = project_lip(sp, g, f)
    assert lip_norm(sp, Pf) <= lip_norm(sp, f)
    assert all(Pf(h[x]) == Pf(x) for h in g.elements for x in range(sp.n))


@given(seed=st.integers(0, 10**6))
def test_quotient_isometries(seed):
    sp, g, q = symmetric(seed)
    rng = random.Random(seed + 2)
    fq = random_quotient_function(rng, q)
    f = psi(q, fq)
    assert lip_norm(sp, f) == lip_norm(q.space, fq)
    assert psi_inverse(q, f) == fq
    for x in range(sp.n):
        assert pairing(f, project_free(sp, g, delta(sp, x))) == f(x)
    w = random_quotient_vector(rng, q)
    tw = t_embed(sp, g, q, w)
    assert kr_norm(sp, tw)[0] == kr_norm(q.space, w)[0]
    assert pushforward(q, tw) == w
    assert project_free(sp, g, tw) == tw
