"""Group averaging on ``F(M)`` and ``Lip0(M)`` and the isometries relating them to ``M/G``.

For a group element ``g`` the induced linear isometry of the free space is
``T_g(delta(x)) = delta(gx) - delta(g0)`` and the affine one is
``A_g(v) = T_g(v) + delta(g0)``. Averaging ``T_g`` over the group gives the
norm-one projection ``R`` onto the fixed vectors; its adjoint averages
functions, ``(P f)(m) = mean_g f(gm) - f(g0)``.

In finite dimensions the free space is reflexive, so the averaging operator
already maps into ``F(M)`` and no bidual projection is needed.

Matrices are dense, in the delta basis of the non-base points (in index order).
"""

from __future__ import annotations

from .errors import ActionNotIsometric, NotInvariant, QuotientMismatch
from .free_space import FreeVector, LipFunction, delta, difference_generators, kr_norm
from .group import ActingGroup, Perm, inverse, isometry_defect
from .linalg import independent_subset, nullspace
from .metric import PointedMetricSpace
from .quotient import QuotientSpace


def require_isometric(space: PointedMetricSpace, group: ActingGroup) -> None:
    bad = isometry_defect(space, group)
    if bad is not None:
        raise ActionNotIsometric(*bad)


def induced_matrix(space: PointedMetricSpace, g: Perm) -> list[list]:
    """Matrix of ``T_g`` in the delta basis."""
    F = space.field
    nb = space.non_base
    pos = {x: i for i, x in enumerate(nb)}
    k = len(nb)
    M = [[F.zero] * k for _ in range(k)]
    g0 = g[space.base]
    for col, x in enumerate(nb):
        if g[x] != space.base:
            M[pos[g[x]]][col] += 1
        if g0 != space.base:
            M[pos[g0]][col] -= 1
    return M


def apply_induced(space: PointedMetricSpace, g: Perm, v: FreeVector) -> FreeVector:
    """``T_g v``."""
    F = space.field
    c = [F.zero] * space.n
    g0 = g[space.base]
    for x, a in enumerate(v.coeffs):
        if a == 0:
            continue
        c[g[x]] += a
        c[g0] -= a
    c[space.base] = F.zero
    return FreeVector(tuple(c), space.base)


def apply_affine(space: PointedMetricSpace, g: Perm, v: FreeVector) -> FreeVector:
    """``A_g v = T_g v + delta(g0)``; extends ``g`` from points to the free space."""
    return apply_induced(space, g, v) + delta(space, g[space.base])


def dual_action(space: PointedMetricSpace, g: Perm, f: LipFunction) -> LipFunction:
    """``(S_g f)(m) = f(g^-1 m) - f(g^-1 0)``."""
    ginv = inverse(g)
    shift = f.values[ginv[space.base]]
    vals = [f.values[ginv[m]] - shift for m in range(space.n)]
    vals[space.base] = space.field.zero
    return LipFunction(tuple(vals), space.base)


def projection_matrix(space: PointedMetricSpace, group: ActingGroup) -> list[list]:
    """Matrix of the averaging projection ``R = mean_g T_g``."""
    require_isometric(space, group)
    F = space.field
    k = space.n - 1
    acc = [[F.zero] * k for _ in range(k)]
    for g in group.elements:
        Tg = induced_matrix(space, g)
        for i in range(k):
            row, trow = acc[i], Tg[i]
            for j in range(k):
                if trow[j]:
                    row[j] += trow[j]
    order = group.order
    return [[v / order for v in row] for row in acc]


def project_free(space: PointedMetricSpace, group: ActingGroup, v: FreeVector) -> FreeVector:
    """Uniform average of ``T_g v`` over the group."""
    require_isometric(space, group)
    return _average_free(space, group, v)


def _average_free(space: PointedMetricSpace, group: ActingGroup, v: FreeVector) -> FreeVector:
    F = space.field
    acc = [F.zero] * space.n
    for g in group.elements:
        for i, a in enumerate(apply_induced(space, g, v).coeffs):
            acc[i] += a
    return FreeVector(tuple(a / group.order for a in acc), space.base)


def project_lip(space: PointedMetricSpace, group: ActingGroup, f: LipFunction) -> LipFunction:
    """``(P f)(m) = mean_g [f(gm) - f(g0)]``; a G-invariant function."""
    require_isometric(space, group)
    F = space.field
    vals = []
    for m in range(space.n):
        total = F.zero
        for g in group.elements:
            total += f.values[g[m]] - f.values[g[space.base]]
        vals.append(total / group.order)
    vals[space.base] = F.zero
    return LipFunction(tuple(vals), space.base)


def psi(qspace: QuotientSpace, fq: LipFunction) -> LipFunction:
    """Lift a function on orbits to the G-invariant function ``x -> fq([Gx])``."""
    if fq.n != qspace.space.n:
        raise QuotientMismatch("function does not live on the quotient space")
    src = qspace.source
    return LipFunction(tuple(fq.values[o] for o in qspace.orbit_of), src.base)


def psi_inverse(qspace: QuotientSpace, f: LipFunction) -> LipFunction:
    """Push a G-invariant function down to orbits: ``[Gx] -> f(x)``."""
    src = qspace.source
    if f.n != src.n:
        raise QuotientMismatch("function does not live on the quotient's source space")
    F = src.field
    for k, g in enumerate(qspace.group.elements):
        for x in range(src.n):
            if not F.eq(f.values[g[x]], f.values[x]):
                raise NotInvariant(k, x)
    vals = [f.values[qspace.rep(o)] for o in range(qspace.space.n)]
    # the base orbit's representative may differ from the base point by rounding
    vals[qspace.base_orbit] = F.zero
    return LipFunction(tuple(vals), qspace.space.base)


def t_embed(
    space: PointedMetricSpace,
    group: ActingGroup,
    qspace: QuotientSpace,
    w: FreeVector,
) -> FreeVector:
    """Linear extension of ``[Gx] -> R(delta(x))`` from ``F(M/G)`` into ``F(M)``."""
    require_isometric(space, group)
    if qspace.source != space or qspace.group != group:
        raise QuotientMismatch("quotient was not built from this space and group")
    if w.n != qspace.space.n:
        raise QuotientMismatch("vector does not live on the quotient space")
    F = space.field
    acc = [F.zero] * space.n
    for o, a in enumerate(w.coeffs):
        if a == 0:
            continue
        img = _average_free(space, group, delta(space, qspace.rep(o)))
        for i, c in enumerate(img.coeffs):
            acc[i] += a * c
    return FreeVector(tuple(acc), space.base)


def fixed_space_basis(space: PointedMetricSpace, group: ActingGroup) -> list[FreeVector]:
    """Basis of ``{v : T_g v = v}`` from the null space of the stacked ``T_g - I``."""
    require_isometric(space, group)
    F = space.field
    k = space.n - 1
    rows = []
    for g in group.generators:
        Tg = induced_matrix(space, g)
        for i in range(k):
            rows.append([Tg[i][j] - (F.one if i == j else F.zero) for j in range(k)])
    return [FreeVector.from_nonbase(space, vec) for vec in nullspace(rows, k, F)]


def kernel_basis(space: PointedMetricSpace, group: ActingGroup, elements=None) -> list[FreeVector]:
    """Independent subset of ``{delta(gx) - delta(x)}``, over generators by default."""
    require_isometric(space, group)
    gens = difference_generators(space, group, elements)
    vecs = [w.nonbase() for w in gens]
    return [gens[i] for i in independent_subset(vecs, space.n - 1, space.field)]


def operator_norm_certificate(space: PointedMetricSpace, group: ActingGroup):
    """``max_{x != y} ||R(delta x - delta y)|| / d(x, y)`` with the maximizing pair.

    The unit ball of ``F(M)`` is the convex hull of the molecules, so this is
    exactly the operator norm of ``R``.
    """
    require_isometric(space, group)
    F = space.field
    best, arg = F.zero, None
    for x in range(space.n):
        for y in range(x + 1, space.n):
            m = delta(space, x) - delta(space, y)
            val = kr_norm(space, _average_free(space, group, m))[0] / space.dist[x][y]
            if arg is None or val > best:
                best, arg = val, (x, y)
    return best, arg
