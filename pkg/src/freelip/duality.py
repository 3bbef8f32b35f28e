"""Dual description of the free-space norm, solved without any transport code.

``kr_norm(v) = max { sum_x v(x) f(x) : f(base) = 0, |f(x) - f(y)| <= d(x, y) }``.

Two independent routes to the right-hand side:

* vertex enumeration of the Lipschitz polytope (small spaces); every vertex
  is pinned by a spanning tree of tight constraints, so vertices are grown
  from the base point one tight edge at a time;
* a simplex solve after the substitution ``u(x) = f(x) + d(base, x) >= 0``,
  which makes the origin feasible.
"""

from __future__ import annotations

from functools import lru_cache

from .free_space import FreeVector
from .lp import maximize_origin_feasible
from .metric import PointedMetricSpace

VERTEX_ENUMERATION_MAX_N = 6


def _key(space: PointedMetricSpace, value):
    return value if space.field.exact else round(value, 9)


@lru_cache(maxsize=64)
def lipschitz_polytope_vertices(space: PointedMetricSpace) -> tuple[tuple, ...]:
    """All vertices of ``{f : f(base) = 0, f 1-Lipschitz}`` as dense value tuples."""
    F = space.field
    d = space.dist
    n = space.n
    vertices: dict[tuple, tuple] = {}
    seen: set[frozenset] = set()
    stack = [{space.base: F.zero}]
    while stack:
        assigned = stack.pop()
        if len(assigned) == n:
            vals = tuple(assigned[i] for i in range(n))
            vertices.setdefault(tuple(_key(space, v) for v in vals), vals)
            continue
        for y in range(n):
            if y in assigned:
                continue
            for x, fx in assigned.items():
                for cand in (fx + d[x][y], fx - d[x][y]):
                    if all(F.le(abs(cand - fz), d[z][y]) for z, fz in assigned.items()):
                        nxt = dict(assigned)
                        nxt[y] = cand
                        key = frozenset((k, _key(space, v)) for k, v in nxt.items())
                        if key not in seen:
                            seen.add(key)
                            stack.append(nxt)
    return tuple(vertices[k] for k in sorted(vertices, key=lambda t: tuple(float(v) for v in t)))


def dual_value_by_vertices(space: PointedMetricSpace, v: FreeVector):
    F = space.field
    best = None
    for vert in lipschitz_polytope_vertices(space):
        val = sum((a * b for a, b in zip(vert, v.coeffs)), F.zero)
        if best is None or val > best:
            best = val
    return best


def dual_value_by_simplex(space: PointedMetricSpace, v: FreeVector):
    F = space.field
    nb = space.non_base
    k = len(nb)
    if k == 0:
        return F.zero
    d = space.dist
    o = space.base
    A, b = [], []
    for i, x in enumerate(nb):
        row = [F.zero] * k
        row[i] = F.one
        A.append(row)
        b.append(2 * d[o][x])
    for i, x in enumerate(nb):
        for j, y in enumerate(nb):
            if i != j:
                row = [F.zero] * k
                row[i] = F.one
                row[j] = -F.one
                A.append(row)
                # nonnegative by the triangle inequality
                b.append(max(F.zero, d[x][y] + d[o][x] - d[o][y]))
    c = [v.coeffs[x] for x in nb]
    value, _ = maximize_origin_feasible(A, b, c, F)
    offset = sum((v.coeffs[x] * d[o][x] for x in nb), F.zero)
    return value - offset


def dual_lp_value(space: PointedMetricSpace, v: FreeVector, method: str = "auto"):
    """``max <f, v>`` over 1-Lipschitz ``f`` vanishing at the base point.

    ``method`` is ``"vertices"``, ``"simplex"`` or ``"auto"`` (vertices for
    ``n <= 6``).
    """
    if method == "auto":
        method = "vertices" if space.n <= VERTEX_ENUMERATION_MAX_N else "simplex"
    if method == "vertices":
        return dual_value_by_vertices(space, v)
    if method == "simplex":
        return dual_value_by_simplex(space, v)
    raise ValueError(f"unknown method {method!r}")
