"""Lipschitz-free space ``F(M)`` and its dual ``Lip0(M)`` over a finite pointed space.

Vectors and functions are dense tuples indexed by point; the base entry of
both is identically zero (``delta(base) = 0`` and ``f(base) = 0``).

The free-space norm is computed as an optimal transport problem: the
balancing mass ``-sum(coeffs)`` is placed at the base point, positive
entries become sources and negative entries sinks, and the minimum-cost
transport is found by successive shortest paths with node potentials.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import Any

from .errors import ActionNotIsometric, QuotientMismatch
from .group import ActingGroup, isometry_defect
from .lp import minimize_equality
from .metric import PointedMetricSpace
from .quotient import QuotientSpace
from .scalar import Field


class _Dense:
    __slots__ = ()

    def _check_base(self, values, base):
        if values[base] != 0:
            raise ValueError(f"entry at base point {base} must be zero, got {values[base]!r}")


@dataclass(frozen=True)
class FreeVector(_Dense):
    """``sum_x coeffs[x] * delta(x)``; ``coeffs[base]`` is always zero."""

    coeffs: tuple
    base: int

    def __post_init__(self):
        self._check_base(self.coeffs, self.base)

    @property
    def n(self) -> int:
        return len(self.coeffs)

    @classmethod
    def zero(cls, space: PointedMetricSpace) -> FreeVector:
        return cls(tuple(space.field.zero for _ in range(space.n)), space.base)

    @classmethod
    def from_mapping(cls, space: PointedMetricSpace, mapping: Mapping) -> FreeVector:
        """Build from ``{label or index: value}``; a base entry must be zero."""
        F = space.field
        c = [F.zero] * space.n
        for key, val in mapping.items():
            c[space.index(key)] += F.convert(val)
        return cls(tuple(c), space.base)

    @classmethod
    def from_nonbase(cls, space: PointedMetricSpace, values: Sequence) -> FreeVector:
        """Inverse of :meth:`nonbase`: coordinates in the delta basis."""
        c = [space.field.zero] * space.n
        for x, val in zip(space.non_base, values):
            c[x] = val
        return cls(tuple(c), space.base)

    def nonbase(self) -> list:
        return [v for i, v in enumerate(self.coeffs) if i != self.base]

    def support(self) -> list[int]:
        return [i for i, v in enumerate(self.coeffs) if v != 0]

    def __add__(self, other: FreeVector) -> FreeVector:
        return FreeVector(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.base)

    def __sub__(self, other: FreeVector) -> FreeVector:
        return FreeVector(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.base)

    def __neg__(self) -> FreeVector:
        return FreeVector(tuple(-a for a in self.coeffs), self.base)

    def __mul__(self, alpha) -> FreeVector:
        return FreeVector(tuple(alpha * a for a in self.coeffs), self.base)

    __rmul__ = __mul__

    def equals(self, other: FreeVector, field: Field) -> bool:
        return self.n == other.n and all(field.eq(a, b) for a, b in zip(self.coeffs, other.coeffs))

    def is_zero(self, field: Field) -> bool:
        return all(field.is_zero(a) for a in self.coeffs)


@dataclass(frozen=True)
class LipFunction(_Dense):
    """Values of a function vanishing at the base point."""

    values: tuple
    base: int

    def __post_init__(self):
        self._check_base(self.values, self.base)

    @property
    def n(self) -> int:
        return len(self.values)

    def __call__(self, x: int):
        return self.values[x]

    @classmethod
    def zero(cls, space: PointedMetricSpace) -> LipFunction:
        return cls(tuple(space.field.zero for _ in range(space.n)), space.base)

    @classmethod
    def from_mapping(cls, space: PointedMetricSpace, mapping: Mapping) -> LipFunction:
        F = space.field
        v = [F.zero] * space.n
        for key, val in mapping.items():
            v[space.index(key)] = F.convert(val)
        return cls(tuple(v), space.base)

    def equals(self, other: LipFunction, field: Field) -> bool:
        return self.n == other.n and all(field.eq(a, b) for a, b in zip(self.values, other.values))


@dataclass(frozen=True)
class TransportPlan:
    """Positive flows ``(source point, sink point, amount)``, sorted by endpoints."""

    flows: tuple[tuple[int, int, Any], ...]

    def cost(self, space: PointedMetricSpace):
        return sum((amt * space.dist[s][t] for s, t, amt in self.flows), space.field.zero)

    def divergence(self, space: PointedMetricSpace) -> list:
        """Net outflow at each point."""
        out = [space.field.zero] * space.n
        for s, t, amt in self.flows:
            out[s] += amt
            out[t] -= amt
        return out


def delta(space: PointedMetricSpace, x: int) -> FreeVector:
    """Evaluation functional at ``x``; the zero vector at the base point."""
    F = space.field
    return FreeVector(
        tuple(F.one if (i == x and x != space.base) else F.zero for i in range(space.n)),
        space.base,
    )


def _balanced_masses(space: PointedMetricSpace, v: FreeVector) -> list:
    F = space.field
    if v.n != space.n or v.base != space.base:
        raise QuotientMismatch("vector does not live on this space")
    b = list(v.coeffs)
    b[space.base] = -sum(v.coeffs, F.zero)
    return b


def _solve_transport(space: PointedMetricSpace, v: FreeVector):
    """Successive shortest paths on the bipartite source/sink graph.

    Returns ``(plan, sources, sinks, potentials)`` where potentials satisfy
    ``p[t] - p[s] <= d(s, t)`` with equality on every arc carrying flow.
    """
    F = space.field
    d = space.dist
    b = _balanced_masses(space, v)
    S = [x for x in range(space.n) if F.is_pos(b[x])]
    T = [x for x in range(space.n) if F.is_pos(-b[x])]
    ns, nt = len(S), len(T)
    supply = [b[x] for x in S]
    demand = [-b[x] for x in T]
    flow = [[F.zero] * nt for _ in range(ns)]
    pot = [F.zero] * (ns + nt)  # sources first, then sinks
    cost = [[d[s][t] for t in T] for s in S]

    def active(q):
        return F.is_pos(q)

    while ns and any(active(q) for q in supply):
        # dense Dijkstra from all sources with remaining supply
        INF = None
        dist = [INF] * (ns + nt)
        prev = [-1] * (ns + nt)
        done = [False] * (ns + nt)
        for i in range(ns):
            if active(supply[i]):
                dist[i] = F.zero
        while True:
            u = -1
            for w in range(ns + nt):
                if not done[w] and dist[w] is not INF and (u < 0 or dist[w] < dist[u]):
                    u = w
            if u < 0:
                break
            done[u] = True
            if u < ns:
                for j in range(nt):
                    w = ns + j
                    if done[w]:
                        continue
                    rc = cost[u][j] + pot[u] - pot[w]
                    nd = dist[u] + rc
                    if dist[w] is INF or nd < dist[w]:
                        dist[w], prev[w] = nd, u
            else:
                j = u - ns
                for i in range(ns):
                    if done[i] or not F.is_pos(flow[i][j]):
                        continue
                    rc = -cost[i][j] + pot[u] - pot[i]
                    nd = dist[u] + rc
                    if dist[i] is INF or nd < dist[i]:
                        dist[i], prev[i] = nd, u
        target = None
        for j in range(nt):
            if active(demand[j]) and dist[ns + j] is not INF:
                if target is None or dist[ns + j] < dist[ns + target]:
                    target = j
        if target is None:
            raise RuntimeError("transport problem unexpectedly infeasible")
        far = max(x for x in dist if x is not INF)
        for w in range(ns + nt):
            pot[w] += dist[w] if dist[w] is not INF else far

        # walk back from the chosen sink to the root source
        path = []
        w = ns + target
        while prev[w] != -1:
            path.append((prev[w], w))
            w = prev[w]
        root = w
        amount = min(supply[root], demand[target])
        for u, w in path:
            if u >= ns:  # reverse arc: sink u -> source w cancels flow[w][u]
                amount = min(amount, flow[w][u - ns])
        for u, w in path:
            if u < ns:
                flow[u][w - ns] += amount
            else:
                flow[w][u - ns] -= amount
        supply[root] -= amount
        demand[target] -= amount

    flows = []
    for i in range(ns):
        for j in range(nt):
            if F.is_pos(flow[i][j]):
                flows.append((S[i], T[j], flow[i][j]))
    flows.sort(key=lambda t: (t[0], t[1]))
    return TransportPlan(tuple(flows)), S, T, pot


def kr_norm(space: PointedMetricSpace, v: FreeVector):
    """Free-space norm of ``v`` with an optimal transport plan."""
    plan, _, _, _ = _solve_transport(space, v)
    return plan.cost(space), plan


def dual_witness(space: PointedMetricSpace, v: FreeVector) -> LipFunction:
    """A 1-Lipschitz function vanishing at the base that attains ``kr_norm(v)``.

    Built from the optimal node potentials of the flow solver, extended from
    the sinks to every point by ``x -> min_t f(t) + d(x, t)`` and shifted to
    vanish at the base.
    """
    F = space.field
    _, S, T, pot = _solve_transport(space, v)
    if not T:
        return LipFunction.zero(space)
    ns = len(S)
    f_sink = [-pot[ns + j] for j in range(len(T))]
    g = [min(f_sink[j] + space.dist[x][t] for j, t in enumerate(T)) for x in range(space.n)]
    shift = g[space.base]
    vals = [gx - shift for gx in g]
    vals[space.base] = F.zero
    return LipFunction(tuple(vals), space.base)


def lip_norm(space: PointedMetricSpace, f: LipFunction):
    """Smallest Lipschitz constant of ``f`` (0 on a one-point space)."""
    F = space.field
    best = F.zero
    vals = f.values
    for x in range(space.n):
        for y in range(x + 1, space.n):
            ratio = abs(vals[x] - vals[y]) / space.dist[x][y]
            if ratio > best:
                best = ratio
    return best


def pairing(f: LipFunction, v: FreeVector):
    if f.n != v.n:
        raise QuotientMismatch("function and vector live on different spaces")
    total = 0
    for a, b in zip(f.values, v.coeffs):
        total = total + a * b
    return total


def pushforward(qspace: QuotientSpace, v: FreeVector) -> FreeVector:
    """Image of ``v`` under the linear extension of the quotient map."""
    Q = qspace.space
    F = Q.field
    if v.n != qspace.source.n:
        raise QuotientMismatch("vector does not live on the quotient's source space")
    c = [F.zero] * Q.n
    for x, a in enumerate(v.coeffs):
        o = qspace.orbit_of[x]
        if o != Q.base:
            c[o] += a
    return FreeVector(tuple(c), Q.base)


def difference_generators(space: PointedMetricSpace, group: ActingGroup, elements=None) -> list[FreeVector]:
    """Nonzero vectors ``delta(gx) - delta(x)`` for ``g`` in ``elements`` (default: the generators)."""
    els = group.generators if elements is None else elements
    out = []
    seen = set()
    for g in els:
        for x in range(space.n):
            w = delta(space, g[x]) - delta(space, x)
            if w.coeffs not in seen and any(c != 0 for c in w.coeffs):
                seen.add(w.coeffs)
                out.append(w)
    return out


def quotient_norm(space: PointedMetricSpace, group: ActingGroup, v: FreeVector):
    """Norm of the class of ``v`` in ``F(M) / span{delta(gx) - delta(x)}``.

    One linear program: a nonnegative flow on every ordered pair of points
    plus free coefficients on the difference generators, minimizing the
    transport cost of ``v + sum(lambda_k w_k)``.
    """
    bad = isometry_defect(space, group)
    if bad is not None:
        raise ActionNotIsometric(*bad)
    F = space.field
    n = space.n
    if n == 1:
        return F.zero
    gens = difference_generators(space, group)
    pairs = [(x, y) for x in range(n) for y in range(n) if x != y]
    rows_of = {x: r for r, x in enumerate(space.non_base)}
    ncols = len(pairs) + 2 * len(gens)
    A = [[F.zero] * ncols for _ in rows_of]
    for col, (x, y) in enumerate(pairs):
        if x in rows_of:
            A[rows_of[x]][col] += 1
        if y in rows_of:
            A[rows_of[y]][col] -= 1
    off = len(pairs)
    for k, w in enumerate(gens):
        for x, r in rows_of.items():
            A[r][off + 2 * k] = -w.coeffs[x]
            A[r][off + 2 * k + 1] = w.coeffs[x]
    b = [v.coeffs[x] for x in space.non_base]
    c = [space.dist[x][y] for x, y in pairs] + [F.zero] * (2 * len(gens))
    value, _ = minimize_equality(A, b, c, F)
    return value
