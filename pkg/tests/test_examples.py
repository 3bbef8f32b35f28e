"""Worked examples for each operation, on the small bundled instances."""

from fractions import Fraction

import pytest

from freelip.duality import dual_lp_value
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
from freelip.group import close_generators, distortion_bounds, orbit
from freelip.linalg import same_span
from freelip.projections import (
    fixed_space_basis,
    kernel_basis,
    project_free,
    project_lip,
    psi,
    psi_inverse,
    t_embed,
)
from freelip.quotient import build_quotient
from freelip.scalar import EXACT
from freelip.verify import load_instance

HALF = Fraction(1, 2)


@pytest.fixture
def swap(instance_path):
    inst = load_instance(instance_path("swap"))
    return inst.space, inst.group, build_quotient(inst.space, inst.group)


@pytest.fixture
def square(instance_path):
    inst = load_instance(instance_path("c4_square"))
    return inst.space, inst.group, build_quotient(inst.space, inst.group)


@pytest.fixture
def trivial(instance_path):
    inst = load_instance(instance_path("trivial"))
    return inst.space, inst.group, build_quotient(inst.space, inst.group)


def test_group_examples(swap, square, trivial):
    sp, g, _ = swap
    assert g.order == 2 and close_generators([[0, 2, 1]], 3).order == 2
    assert orbit(sp, g, "a") == (1, 2)
    tsp, tg, _ = trivial
    assert all(orbit(tsp, tg, x) == (x,) for x in range(tsp.n))
    b = distortion_bounds(tsp, tg)
    assert (b.r, b.R, b.isometric) == (1, 1, True)
    ssp, sg, _ = square
    assert orbit(ssp, sg, "c") == (0, 1, 2, 3)
    assert [h for h in sg.elements] == [(0, 1, 2, 3), (1, 2, 3, 0), (2, 3, 0, 1), (3, 0, 1, 2)]


def test_norm_examples(swap):
    sp, _, _ = swap
    a, b = delta(sp, 1), delta(sp, 2)
    v = a * HALF + b * HALF
    assert kr_norm(sp, v)[0] == 1 == dual_lp_value(sp, v, "vertices")
    assert kr_norm(sp, FreeVector.zero(sp))[1].flows == ()
    assert delta(sp, 1).coeffs == (0, 1, 0)
    assert all(kr_norm(sp, delta(sp, x))[0] == sp.d(0, x) for x in range(sp.n))


def test_lip_norm_and_pairing_examples(swap):
    sp, _, _ = swap
    assert lip_norm(sp, LipFunction.zero(sp)) == 0
    dist_to_base = LipFunction(tuple(sp.d(0, x) for x in range(sp.n)), sp.base)
    assert lip_norm(sp, dist_to_base) == 1
    f = LipFunction.from_mapping(sp, {"a": 3, "b": -1})
    assert [pairing(f, delta(sp, x)) for x in range(sp.n)] == [0, 3, -1]
    assert pairing(f, FreeVector.zero(sp)) == 0


def test_dual_witness_examples(swap):
    sp, _, _ = swap
    f = dual_witness(sp, delta(sp, 1))
    assert pairing(f, delta(sp, 1)) == sp.d(0, 1)
    assert pairing(dual_witness(sp, FreeVector.zero(sp)), FreeVector.zero(sp)) == 0


def test_pushforward_and_quotient_norm_examples(swap, trivial):
    sp, g, q = swap
    assert pushforward(q, delta(sp, 2)) == delta(q.space, 1)
    assert pushforward(q, delta(sp, 2) - delta(sp, 1)).is_zero(EXACT)
    assert quotient_norm(sp, g, delta(sp, 2) - delta(sp, 1)) == 0
    assert quotient_norm(sp, g, delta(sp, 1)) == 1 == kr_norm(q.space, pushforward(q, delta(sp, 1)))[0]
    tsp, tg, _ = trivial
    v = FreeVector.from_mapping(tsp, {"a": 2, "b": -1, "c": 3})
    assert quotient_norm(tsp, tg, v) == kr_norm(tsp, v)[0]


def test_projection_examples(swap, square, trivial):
    tsp, tg, _ = trivial
    v = FreeVector.from_mapping(tsp, {"a": 2, "c": -1})
    assert project_free(tsp, tg, v) == v
    sp, g, _ = swap
    f = LipFunction.from_mapping(sp, {"a": 1, "b": -1})
    assert project_lip(sp, g, f) == LipFunction.zero(sp)
    inv = LipFunction.from_mapping(sp, {"a": 2, "b": 2})
    assert project_lip(sp, g, inv) == inv
    ssp, sg, _ = square
    assert all(project_free(ssp, sg, delta(ssp, x)).is_zero(EXACT) for x in range(ssp.n))


def test_psi_examples(swap, square):
    sp, g, q = swap
    assert psi(q, LipFunction.zero(q.space)) == LipFunction.zero(sp)
    assert psi_inverse(q, LipFunction.zero(sp)) == LipFunction.zero(q.space)
    ssp, sg, sq = square
    assert sq.space.n == 1
    assert psi(sq, LipFunction.zero(sq.space)) == LipFunction.zero(ssp)


def test_t_embed_examples(swap):
    sp, g, q = swap
    assert t_embed(sp, g, q, FreeVector.zero(q.space)).is_zero(EXACT)
    image = t_embed(sp, g, q, delta(q.space, 1))
    assert image.coeffs == (0, HALF, HALF)
    assert kr_norm(sp, image)[0] == 1 == dual_lp_value(sp, image, "vertices") == q.space.d(0, 1)


def test_basis_examples(swap, square, trivial):
    tsp, tg, _ = trivial
    assert len(fixed_space_basis(tsp, tg)) == tsp.n - 1
    assert kernel_basis(tsp, tg) == []
    sp, g, _ = swap
    fixed = [v.nonbase() for v in fixed_space_basis(sp, g)]
    kernel = [v.nonbase() for v in kernel_basis(sp, g)]
    assert same_span(fixed, [[1, 1]], 2, EXACT)
    assert same_span(kernel, [[-1, 1]], 2, EXACT)
    ssp, sg, _ = square
    assert fixed_space_basis(ssp, sg) == []
