"""Instance files and the verification suite.

An instance file is a JSON document::

    {"points": ["0", "a", ...], "base": "0",
     "metric": [[0, 1, ...], ...]  or  {"coords": [[x, y], ...], "p": 1 | 2 | "inf"},
     "generators": [["a", "0", ...], ...],   # image of each point, by label
     "mode": "exact" | "float", "seed": 0, "trials": 20}

:func:`run_suite` evaluates every structural identity of the library on one
instance and returns a :class:`CheckReport`. Failures are report entries,
never exceptions. Randomized checks draw from a generator seeded by
``(seed, check name)``, so the report depends only on the instance, the
seed and the trial count.
"""

from __future__ import annotations

import hashlib
import json
import random
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from . import instances as gen
from .duality import dual_lp_value
from .errors import FreelipError, ParseError
from .free_space import (
    FreeVector,
    LipFunction,
    delta,
    difference_generators,
    dual_witness,
    kr_norm,
    lip_norm,
    pairing,
    pushforward,
    quotient_norm,
)
from .group import (
    ActingGroup,
    close_generators,
    compose,
    distortion_bounds,
    group_defect,
    isometry_defect,
    orbits,
    average_metric,
)
from .linalg import matmul, matrices_equal, nullspace, rank, same_span, transpose
from .metric import (
    PointedMetricSpace,
    first_triangle_violation,
    hausdorff_distance,
    metric_from_coords,
    min_set_distance,
    validate_metric,
)
from .projections import (
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
from .quotient import QuotientSpace, build_quotient, quotient_map
from .scalar import DEFAULT_TOL, Field, field_for_mode

DEFAULT_SEED = 0
DEFAULT_TRIALS = 20


@dataclass(frozen=True)
class Instance:
    space: PointedMetricSpace
    group: ActingGroup
    mode: str
    seed: int = DEFAULT_SEED
    trials: int = DEFAULT_TRIALS

    @property
    def field(self) -> Field:
        return self.space.field

    def to_document(self) -> dict:
        """Canonical instance-file form (explicit matrix, labels for generators)."""
        F = self.field
        labs = self.space.labels
        return {
            "points": list(labs),
            "base": labs[self.space.base],
            "metric": [[F.format(v) for v in row] for row in self.space.dist],
            "generators": [[labs[i] for i in g] for g in self.group.generators],
            "mode": self.mode,
            "seed": self.seed,
            "trials": self.trials,
        }

    def digest(self) -> str:
        text = json.dumps(self.to_document(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()


def _parse_document(source) -> dict:
    if isinstance(source, dict):
        return source
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(str(source), f"cannot read file: {exc}") from exc
    else:
        text = source
    try:
        doc = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}", exc.msg) from exc
    if not isinstance(doc, dict):
        raise ParseError("document", "top level must be a JSON object")
    return doc


def load_instance(source, seed: int | None = None, trials: int | None = None) -> Instance:
    """Parse and fully validate an instance from a path, JSON text, or dict.

    ``seed`` and ``trials`` override the values stored in the document.
    """
    doc = _parse_document(source)
    for key in ("points", "base", "metric"):
        if key not in doc:
            raise ParseError(key, "missing required field")
    mode = doc.get("mode", "exact")
    try:
        F = field_for_mode(mode)
    except ValueError as exc:
        raise ParseError("mode", str(exc)) from exc
    points = doc["points"]
    if not isinstance(points, list) or not all(isinstance(p, str) for p in points):
        raise ParseError("points", "must be a list of strings")
    metric = doc["metric"]
    if isinstance(metric, dict):
        if "coords" not in metric or "p" not in metric:
            raise ParseError("metric", "coordinate form needs 'coords' and 'p'")
        p = metric["p"]
        if isinstance(p, Fraction):
            p = int(p) if p.denominator == 1 else p
        if p not in (1, 2, "inf"):
            raise ParseError("metric.p", f"unsupported norm {metric['p']!r}")
        if len(metric["coords"]) != len(points):
            raise ParseError("metric.coords", "one coordinate row per point required")
        matrix = metric_from_coords(metric["coords"], p, F)
    elif isinstance(metric, list):
        matrix = metric
    else:
        raise ParseError("metric", "must be a matrix or a coordinate object")
    try:
        space = validate_metric(points, doc["base"], matrix, F)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, FreelipError):
            raise
        raise ParseError("metric", str(exc)) from exc
    gens = []
    for k, g in enumerate(doc.get("generators", [])):
        if not isinstance(g, list) or len(g) != space.n:
            raise ParseError(f"generators[{k}]", "must list the image of every point")
        try:
            gens.append([space.index(lab) for lab in g])
        except (KeyError, TypeError) as exc:
            raise ParseError(f"generators[{k}]", f"unknown point label {exc}") from exc
    group = close_generators(gens, space.n)
    s = int(doc.get("seed", DEFAULT_SEED)) if seed is None else seed
    t = int(doc.get("trials", DEFAULT_TRIALS)) if trials is None else trials
    return Instance(space, group, mode, s, t)


# ---------------------------------------------------------------- report


@dataclass
class CheckResult:
    name: str
    status: str
    lhs: Any = None
    rhs: Any = None
    tol: float | None = None
    witness: Any = None

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "tol": self.tol,
            "witness": self.witness,
        }


@dataclass
class CheckReport:
    instance: str
    mode: str
    checks: list[CheckResult] = dc_field(default_factory=list)
    ms: int = 0

    def _fill_tolerances(self) -> None:
        tol = 0 if self.mode == "exact" else DEFAULT_TOL
        for c in self.checks:
            if c.tol is None:
                c.tol = tol

    @property
    def overall(self) -> str:
        return "pass" if self.checks and all(c.status == "pass" for c in self.checks) else "fail"

    @property
    def passed(self) -> bool:
        return self.overall == "pass"

    def check(self, name: str) -> CheckResult:
        return next(c for c in self.checks if c.name == name)

    def to_json(self) -> dict:
        return {
            "instance": self.instance,
            "mode": self.mode,
            "checks": [c.to_json() for c in self.checks],
            "overall": self.overall,
            "ms": self.ms,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"


class _Recorder:
    """Accumulates comparisons for one check; keeps the first failure."""

    def __init__(self, name: str, field: Field):
        self.name = name
        self.F = field
        self.count = 0
        self.failure: tuple | None = None
        self.last: tuple = (None, None, None)
        self.summary: dict = {}

    def _fmt(self, v):
        if isinstance(v, (bool, str)) or v is None:
            return v
        if isinstance(v, int):
            return v
        if isinstance(v, (list, tuple)):
            return [self._fmt(a) for a in v]
        return self.F.format(v)

    def record(self, ok: bool, lhs=None, rhs=None, witness=None) -> bool:
        self.count += 1
        entry = (self._fmt(lhs), self._fmt(rhs), witness)
        self.last = entry
        if not ok and self.failure is None:
            self.failure = entry
        return ok

    def eq(self, lhs, rhs, witness=None) -> bool:
        return self.record(self.F.eq(lhs, rhs), lhs, rhs, witness)

    def le(self, lhs, rhs, witness=None) -> bool:
        return self.record(self.F.le(lhs, rhs), lhs, rhs, witness)

    def same(self, lhs, rhs, witness=None) -> bool:
        """Exact equality of discrete data (ranks, counts, ids)."""
        return self.record(lhs == rhs, lhs, rhs, witness)

    def result(self) -> CheckResult:
        tol = 0 if self.F.exact else self.F.tol
        if self.failure is not None:
            lhs, rhs, w = self.failure
            return CheckResult(self.name, "fail", lhs, rhs, tol, w)
        lhs, rhs, _ = self.last
        return CheckResult(self.name, "pass", lhs, rhs, tol, {"comparisons": self.count, **self.summary})


@dataclass
class _Ctx:
    """Shared, lazily built state for one suite run."""

    instance: Instance
    original: PointedMetricSpace
    space: PointedMetricSpace  # averaged metric (equal to the original for isometric actions)
    group: ActingGroup
    qspace: QuotientSpace | None = None
    R: list | None = None

    @property
    def F(self) -> Field:
        return self.space.field

    def rng(self, name: str) -> random.Random:
        return random.Random(f"{self.instance.seed}:{name}")

    def label(self, x: int) -> str:
        return self.space.labels[x]

    def vectors(self, name: str, k: int | None = None) -> list[FreeVector]:
        rng = self.rng(name)
        return [gen.random_free_vector(rng, self.space) for _ in range(k or self.instance.trials)]

    def functions(self, name: str, k: int | None = None) -> list[LipFunction]:
        rng = self.rng(name)
        return [gen.random_lip_function(rng, self.space) for _ in range(k or self.instance.trials)]


CheckFn = Callable[[_Ctx, _Recorder], None]
_CHECKS: dict[str, CheckFn] = {}


def _check(name: str):
    def deco(fn: CheckFn) -> CheckFn:
        _CHECKS[name] = fn
        return fn

    return deco


# which identity each check certifies; the manifest test compares this with the report
MANIFEST: list[tuple[str, str, str]] = [
    ("metric_core", "min_set_distance <= hausdorff_distance", "metric.min_le_hausdorff"),
    ("metric_core", "hausdorff_distance is a pseudometric on nonempty subsets", "metric.hausdorff_pseudometric"),
    ("metric_core", "validate_metric agrees with the brute-force scan", "metric.validate_bruteforce"),
    ("group_action", "closure output is a group", "group.closure"),
    ("group_action", "average_metric output passes validate_metric", "group.average_metric_valid"),
    ("group_action", "action is isometric for the averaged metric", "group.averaged_isometric"),
    ("group_action", "r*D <= d <= R*D sandwich", "group.distortion_sandwich"),
    ("group_action", "orbits partition the points and are preserved", "group.orbits_partition"),
    ("quotient", "quotient matrix passes validate_metric", "quotient.metric_valid"),
    ("quotient", "min distance between orbits equals their Hausdorff distance", "quotient.hausdorff_coincidence"),
    ("quotient", "quotient map is 1-Lipschitz and surjective", "quotient.map_lipschitz"),
    ("free_space", "primal transport value equals the dual LP value", "free.lp_duality"),
    ("free_space", "kr_norm satisfies the norm axioms", "free.norm_axioms"),
    ("free_space", "kr_norm(delta x - delta y) = d(x, y)", "free.delta_isometry"),
    ("free_space", "lip_norm equals the max over molecules", "free.dual_consistency"),
    ("free_space", "quotient_norm equals kr_norm of the pushforward", "free.quotient_norm_identity"),
    ("projections", "T_g homomorphism and isometric on molecules", "proj.induced_isometries"),
    ("projections", "averaging projection is idempotent", "proj.idempotent"),
    ("projections", "T_g R = R = R T_g and R A_g = R", "proj.invariance"),
    ("projections", "operator norm certificate <= 1", "proj.contractivity"),
    ("projections", "range of R equals the fixed space; t_embed maps onto it isometrically", "proj.range_fixed_space"),
    ("projections", "pairing(R delta(x), psi(fq)) = psi(fq)(x)", "proj.invariant_evaluation"),
    ("projections", "quotient_norm equals kr_norm of the pushforward", "free.quotient_norm_identity"),
    ("projections", "project_lip is the adjoint of project_free", "proj.adjoint"),
]

# operation-level postconditions also reported by the suite
EXTRA_CHECKS = [
    "quotient.structure",
    "free.dual_witness",
    "free.pairing_bound",
    "free.pushforward_contraction",
    "proj.kernel_rank",
    "proj.psi_roundtrip",
    "proj.t_embed_isometry",
    "proj.lip_projection",
    "proj.dual_action",
    "proj.representative_independence",
]


# ---------------------------------------------------------------- metric_core


def _brute_force_is_metric(matrix, F: Field) -> bool:
    n = len(matrix)
    for i in range(n):
        for j in range(n):
            if i == j:
                if not F.is_zero(matrix[i][j]):
                    return False
                continue
            if not F.eq(matrix[i][j], matrix[j][i]) or not F.is_pos(matrix[i][j]):
                return False
            for k in range(n):
                if not F.le(matrix[i][k], matrix[i][j] + matrix[j][k]):
                    return False
    return True


@_check("metric.validate_bruteforce")
def _c_validate(ctx: _Ctx, rec: _Recorder) -> None:
    F, sp = ctx.F, ctx.original
    rng = ctx.rng("metric.validate_bruteforce")
    candidates = [[list(row) for row in sp.dist]]
    for _ in range(ctx.instance.trials):
        m = [list(row) for row in sp.dist]
        if sp.n >= 2:
            i, j = rng.sample(range(sp.n), 2)
            factor = F.convert(rng.choice([0, 1, 2, 3, "1/2", "1/3"]))
            m[i][j] = m[j][i] = m[i][j] * factor
        candidates.append(m)
    for t, m in enumerate(candidates):
        try:
            validate_metric(sp.labels, sp.base, m, F)
            accepted = True
        except FreelipError:
            accepted = False
        rec.same(accepted, _brute_force_is_metric(m, F), {"candidate": t})


@_check("metric.min_le_hausdorff")
def _c_min_le_h(ctx: _Ctx, rec: _Recorder) -> None:
    sp = ctx.space
    rng = ctx.rng("metric.min_le_hausdorff")
    for _ in range(ctx.instance.trials):
        A, B = gen.random_subset(rng, sp.n), gen.random_subset(rng, sp.n)
        rec.le(min_set_distance(sp, A, B), hausdorff_distance(sp, A, B), {"A": A, "B": B})


@_check("metric.hausdorff_pseudometric")
def _c_hausdorff_pm(ctx: _Ctx, rec: _Recorder) -> None:
    sp = ctx.space
    rng = ctx.rng("metric.hausdorff_pseudometric")
    for _ in range(ctx.instance.trials):
        A, B, C = (gen.random_subset(rng, sp.n) for _ in range(3))
        w = {"A": A, "B": B, "C": C}
        hab, hba = hausdorff_distance(sp, A, B), hausdorff_distance(sp, B, A)
        rec.eq(hab, hba, w)
        rec.eq(hausdorff_distance(sp, A, A), sp.field.zero, w)
        rec.le(hausdorff_distance(sp, A, C), hab + hausdorff_distance(sp, B, C), w)


# ---------------------------------------------------------------- group_action


@_check("group.closure")
def _c_closure(ctx: _Ctx, rec: _Recorder) -> None:
    bad = group_defect(ctx.group)
    rec.record(bad is None, ctx.group.order, len(set(ctx.group.elements)), None if bad is None else list(bad))


@_check("group.orbits_partition")
def _c_orbits(ctx: _Ctx, rec: _Recorder) -> None:
    orbs = orbits(ctx.group)
    covered = sorted(x for o in orbs for x in o)
    rec.same(covered, list(range(ctx.group.n)))
    for k, g in enumerate(ctx.group.elements):
        for o in orbs:
            rec.same(sorted(g[x] for x in o), list(o), {"element": k})


@_check("group.average_metric_valid")
def _c_avg_valid(ctx: _Ctx, rec: _Recorder) -> None:
    # the averaged space was built (and validated) before the checks ran
    bad = first_triangle_violation(ctx.space.dist, ctx.F)
    isometric = isometry_defect(ctx.original, ctx.group) is None
    rec.summary = {"original_isometric": isometric}
    rec.record(
        bad is None and _brute_force_is_metric(ctx.space.dist, ctx.F),
        witness={"original_isometric": isometric},
    )


@_check("group.averaged_isometric")
def _c_avg_iso(ctx: _Ctx, rec: _Recorder) -> None:
    D = ctx.space.dist
    for k, g in enumerate(ctx.group.elements):
        for x in range(ctx.space.n):
            for y in range(x + 1, ctx.space.n):
                rec.eq(D[g[x]][g[y]], D[x][y], {"element": k, "x": ctx.label(x), "y": ctx.label(y)})


@_check("group.distortion_sandwich")
def _c_sandwich(ctx: _Ctx, rec: _Recorder) -> None:
    b = distortion_bounds(ctx.original, ctx.group)
    d, D = ctx.original.dist, ctx.space.dist
    for x in range(ctx.space.n):
        for y in range(x + 1, ctx.space.n):
            w = {"x": ctx.label(x), "y": ctx.label(y), "r": ctx.F.format(b.r), "R": ctx.F.format(b.R)}
            rec.le(b.r * D[x][y], d[x][y], w)
            rec.le(d[x][y], b.R * D[x][y], w)


# ---------------------------------------------------------------- quotient


@_check("quotient.structure")
def _c_q_structure(ctx: _Ctx, rec: _Recorder) -> None:
    q = ctx.qspace
    rec.summary = {"orbits": len(q.orbits), "group_order": ctx.group.order}
    rec.same(sorted(x for o in q.orbits for x in o), list(range(ctx.space.n)))
    for o, members in enumerate(q.orbits):
        for x in members:
            rec.same(q.orbit_of[x], o, {"point": ctx.label(x)})
    rec.same(ctx.space.base in q.orbits[q.base_orbit], True)
    for a in range(q.space.n):
        for b in range(a + 1, q.space.n):
            rec.eq(q.space.dist[a][b], min_set_distance(ctx.space, q.orbits[a], q.orbits[b]), {"orbits": [a, b]})


@_check("quotient.metric_valid")
def _c_q_valid(ctx: _Ctx, rec: _Recorder) -> None:
    rec.record(_brute_force_is_metric(ctx.qspace.space.dist, ctx.F), ctx.qspace.space.n, len(ctx.qspace.orbits))


@_check("quotient.hausdorff_coincidence")
def _c_q_hausdorff(ctx: _Ctx, rec: _Recorder) -> None:
    q = ctx.qspace
    for a in range(q.space.n):
        for b in range(a, q.space.n):
            rec.eq(
                min_set_distance(ctx.space, q.orbits[a], q.orbits[b]),
                hausdorff_distance(ctx.space, q.orbits[a], q.orbits[b]),
                {"orbits": [a, b]},
            )


@_check("quotient.map_lipschitz")
def _c_q_map(ctx: _Ctx, rec: _Recorder) -> None:
    q = ctx.qspace
    rec.same(sorted({quotient_map(q, x) for x in range(ctx.space.n)}), list(range(q.space.n)))
    rec.same(quotient_map(q, ctx.space.base), q.base_orbit)
    for x in range(ctx.space.n):
        for g in ctx.group.elements:
            rec.same(quotient_map(q, g[x]), quotient_map(q, x), {"point": ctx.label(x)})
        for y in range(x + 1, ctx.space.n):
            rec.le(
                q.space.dist[quotient_map(q, x)][quotient_map(q, y)],
                ctx.space.dist[x][y],
                {"x": ctx.label(x), "y": ctx.label(y)},
            )


# ---------------------------------------------------------------- free_space


def _vec_json(ctx: _Ctx, v: FreeVector, space: PointedMetricSpace | None = None) -> dict:
    sp = space or ctx.space
    return {sp.labels[i]: ctx.F.format(a) for i, a in enumerate(v.coeffs) if a != 0}


@_check("free.lp_duality")
def _c_duality(ctx: _Ctx, rec: _Recorder) -> None:
    for v in ctx.vectors("free.lp_duality"):
        rec.eq(kr_norm(ctx.space, v)[0], dual_lp_value(ctx.space, v), {"vector": _vec_json(ctx, v)})


@_check("free.dual_witness")
def _c_witness(ctx: _Ctx, rec: _Recorder) -> None:
    for v in ctx.vectors("free.dual_witness"):
        value, plan = kr_norm(ctx.space, v)
        f = dual_witness(ctx.space, v)
        w = {"vector": _vec_json(ctx, v)}
        rec.eq(pairing(f, v), value, w)
        rec.le(lip_norm(ctx.space, f), ctx.F.one, w)
        rec.eq(plan.cost(ctx.space), value, w)
        div = plan.divergence(ctx.space)
        for x in ctx.space.non_base:
            rec.eq(div[x], v.coeffs[x], w)


@_check("free.norm_axioms")
def _c_norm_axioms(ctx: _Ctx, rec: _Recorder) -> None:
    sp, F = ctx.space, ctx.F
    rng = ctx.rng("free.norm_axioms")
    vs = ctx.vectors("free.norm_axioms")
    ws = ctx.vectors("free.norm_axioms/second")
    for v, w in zip(vs, ws):
        alpha = F.convert(rng.choice([-3, -2, "-1/2", "1/3", 2]))
        nv, nw = kr_norm(sp, v)[0], kr_norm(sp, w)[0]
        wit = {"v": _vec_json(ctx, v), "w": _vec_json(ctx, w)}
        rec.eq(kr_norm(sp, alpha * v)[0], abs(alpha) * nv, wit)
        rec.le(kr_norm(sp, v + w)[0], nv + nw, wit)
        rec.same(F.is_zero(nv), v.is_zero(F), wit)
    rec.eq(kr_norm(sp, FreeVector.zero(sp))[0], F.zero)


@_check("free.delta_isometry")
def _c_delta_iso(ctx: _Ctx, rec: _Recorder) -> None:
    sp = ctx.space
    for x in range(sp.n):
        for y in range(sp.n):
            rec.eq(kr_norm(sp, delta(sp, x) - delta(sp, y))[0], sp.dist[x][y], {"x": ctx.label(x), "y": ctx.label(y)})


@_check("free.dual_consistency")
def _c_dual_consistency(ctx: _Ctx, rec: _Recorder) -> None:
    sp, F = ctx.space, ctx.F
    for f in ctx.functions("free.dual_consistency"):
        best = F.zero
        for x in range(sp.n):
            for y in range(x + 1, sp.n):
                m = delta(sp, x) - delta(sp, y)
                best = max(best, abs(pairing(f, m)) / sp.dist[x][y])
        rec.eq(lip_norm(sp, f), best)


@_check("free.pairing_bound")
def _c_pairing_bound(ctx: _Ctx, rec: _Recorder) -> None:
    sp = ctx.space
    for f, v in zip(ctx.functions("free.pairing_bound"), ctx.vectors("free.pairing_bound")):
        rec.le(abs(pairing(f, v)), lip_norm(sp, f) * kr_norm(sp, v)[0], {"vector": _vec_json(ctx, v)})


@_check("free.pushforward_contraction")
def _c_push(ctx: _Ctx, rec: _Recorder) -> None:
    q = ctx.qspace
    for v in ctx.vectors("free.pushforward_contraction"):
        rec.le(kr_norm(q.space, pushforward(q, v))[0], kr_norm(ctx.space, v)[0], {"vector": _vec_json(ctx, v)})
    for x in range(ctx.space.n):
        rec.same(pushforward(q, delta(ctx.space, x)).coeffs, delta(q.space, q.orbit_of[x]).coeffs)


@_check("free.quotient_norm_identity")
def _c_quotient_norm(ctx: _Ctx, rec: _Recorder) -> None:
    q = ctx.qspace
    for v in ctx.vectors("free.quotient_norm_identity"):
        rec.eq(
            quotient_norm(ctx.space, ctx.group, v),
            kr_norm(q.space, pushforward(q, v))[0],
            {"vector": _vec_json(ctx, v)},
        )


# ---------------------------------------------------------------- projections


@_check("proj.induced_isometries")
def _c_induced(ctx: _Ctx, rec: _Recorder) -> None:
    sp, F, G = ctx.space, ctx.F, ctx.group
    mats = [induced_matrix(sp, g) for g in G.elements]
    k = sp.n - 1
    ident = [[F.one if i == j else F.zero for j in range(k)] for i in range(k)]
    rec.record(matrices_equal(mats[0], ident, F), witness={"element": 0})
    # generators times all elements suffices for the homomorphism; all pairs for small groups
    left = range(G.order) if G.order <= 24 else [G.index_of(g) for g in G.generators]
    for a in left:
        for b in range(G.order):
            prod = G.index_of(compose(G.elements[a], G.elements[b]))
            rec.record(matrices_equal(matmul(mats[a], mats[b], F), mats[prod], F), witness={"g": a, "h": b})
    for a, g in enumerate(G.elements):
        for x in range(sp.n):
            for y in range(x + 1, sp.n):
                m = delta(sp, x) - delta(sp, y)
                rec.eq(
                    kr_norm(sp, apply_induced(sp, g, m))[0],
                    sp.dist[x][y],
                    {"element": a, "x": ctx.label(x), "y": ctx.label(y)},
                )


def _R(ctx: _Ctx) -> list:
    if ctx.R is None:
        ctx.R = projection_matrix(ctx.space, ctx.group)
    return ctx.R


@_check("proj.idempotent")
def _c_idempotent(ctx: _Ctx, rec: _Recorder) -> None:
    R = _R(ctx)
    rec.record(matrices_equal(matmul(R, R, ctx.F), R, ctx.F), rank(R, len(R), ctx.F), None)


@_check("proj.invariance")
def _c_invariance(ctx: _Ctx, rec: _Recorder) -> None:
    sp, G, F = ctx.space, ctx.group, ctx.F
    for v in ctx.vectors("proj.invariance"):
        Rv = project_free(sp, G, v)
        for a, g in enumerate(G.elements):
            w = {"element": a, "vector": _vec_json(ctx, v)}
            rec.record(apply_induced(sp, g, Rv).equals(Rv, F), witness=w)
            rec.record(project_free(sp, G, apply_induced(sp, g, v)).equals(Rv, F), witness=w)
            rec.record(project_free(sp, G, apply_affine(sp, g, v)).equals(Rv, F), witness=w)


@_check("proj.contractivity")
def _c_contractivity(ctx: _Ctx, rec: _Recorder) -> None:
    if ctx.space.n < 2:
        rec.le(ctx.F.zero, ctx.F.one)
        return
    value, (x, y) = operator_norm_certificate(ctx.space, ctx.group)
    rec.le(value, ctx.F.one, {"x": ctx.label(x), "y": ctx.label(y)})


@_check("proj.range_fixed_space")
def _c_range(ctx: _Ctx, rec: _Recorder) -> None:
    sp, G, F, q = ctx.space, ctx.group, ctx.F, ctx.qspace
    k = sp.n - 1
    image = transpose(_R(ctx)) if k else []
    fixed = [v.nonbase() for v in fixed_space_basis(sp, G)]
    rec.same(same_span(image, fixed, k, F), True, {"dim_fixed": len(fixed)})
    # images of the quotient's delta basis: as many as dim F(M/G), spanning the fixed space
    embedded = [t_embed(sp, G, q, delta(q.space, o)).nonbase() for o in range(q.space.n) if o != q.base_orbit]
    rec.same(rank(embedded, k, F), len(embedded), {"which": "t_embed injective"})
    rec.same(same_span(embedded, fixed, k, F), True, {"which": "t_embed onto fixed space"})
    for w in ctx.vectors_q("proj.range_fixed_space"):
        tw = t_embed(sp, G, q, w)
        rec.record(project_free(sp, G, tw).equals(tw, F), witness={"which": "image is fixed"})
        rec.eq(kr_norm(sp, tw)[0], kr_norm(q.space, w)[0], {"vector": _vec_json(ctx, w, q.space)})


@_check("proj.kernel_rank")
def _c_kernel(ctx: _Ctx, rec: _Recorder) -> None:
    sp, G, F = ctx.space, ctx.group, ctx.F
    k = sp.n - 1
    R = _R(ctx)
    ker = [v.nonbase() for v in kernel_basis(sp, G)]
    fixed = fixed_space_basis(sp, G)
    rec.summary = {"dim_kernel": len(ker), "dim_fixed": len(fixed)}
    rec.same(len(ker) + len(fixed), k, {"dim_kernel": len(ker), "dim_fixed": len(fixed)})
    null_R = nullspace(R, k, F) if k else []
    rec.same(same_span(ker, null_R, k, F), True, {"which": "kernel = null space of R"})
    every = [w.nonbase() for w in difference_generators(sp, G, G.elements)]
    rec.same(same_span(ker, every, k, F), True, {"which": "generator differences span all differences"})


@_check("proj.invariant_evaluation")
def _c_invariant_evaluation(ctx: _Ctx, rec: _Recorder) -> None:
    sp, G, q = ctx.space, ctx.group, ctx.qspace
    rng = ctx.rng("proj.invariant_evaluation")
    images = [project_free(sp, G, delta(sp, x)) for x in range(sp.n)]
    for _ in range(ctx.instance.trials):
        f = psi(q, gen.random_quotient_function(rng, q))
        for x in range(sp.n):
            rec.eq(pairing(f, images[x]), f(x), {"x": ctx.label(x)})


@_check("proj.adjoint")
def _c_adjoint(ctx: _Ctx, rec: _Recorder) -> None:
    sp, G = ctx.space, ctx.group
    for f, v in zip(ctx.functions("proj.adjoint"), ctx.vectors("proj.adjoint")):
        rec.eq(pairing(project_lip(sp, G, f), v), pairing(f, project_free(sp, G, v)), {"vector": _vec_json(ctx, v)})


@_check("proj.lip_projection")
def _c_lip_projection(ctx: _Ctx, rec: _Recorder) -> None:
    sp, G, F = ctx.space, ctx.group, ctx.F
    for f in ctx.functions("proj.lip_projection"):
        Pf = project_lip(sp, G, f)
        for a, g in enumerate(G.elements):
            for x in range(sp.n):
                rec.eq(Pf(g[x]), Pf(x), {"element": a, "x": ctx.label(x)})
        rec.le(lip_norm(sp, Pf), lip_norm(sp, f))
        rec.record(project_lip(sp, G, Pf).equals(Pf, F), witness={"which": "idempotent"})


@_check("proj.psi_roundtrip")
def _c_psi(ctx: _Ctx, rec: _Recorder) -> None:
    sp, G, F, q = ctx.space, ctx.group, ctx.F, ctx.qspace
    rng = ctx.rng("proj.psi_roundtrip")
    for t in range(ctx.instance.trials):
        fq = gen.random_quotient_function(rng, q)
        f = psi(q, fq)
        rec.eq(lip_norm(sp, f), lip_norm(q.space, fq), {"trial": t, "direction": "psi"})
        rec.record(psi_inverse(q, f).equals(fq, F), witness={"trial": t, "roundtrip": "S(psi(fq))"})
        inv = project_lip(sp, G, gen.random_lip_function(rng, sp))
        back = psi_inverse(q, inv)
        rec.eq(lip_norm(q.space, back), lip_norm(sp, inv), {"trial": t, "direction": "S"})
        rec.record(psi(q, back).equals(inv, F), witness={"trial": t, "roundtrip": "psi(S(f))"})


@_check("proj.t_embed_isometry")
def _c_t_embed(ctx: _Ctx, rec: _Recorder) -> None:
    sp, G, F, q = ctx.space, ctx.group, ctx.F, ctx.qspace
    for w in ctx.vectors_q("proj.t_embed_isometry"):
        tw = t_embed(sp, G, q, w)
        wit = {"vector": _vec_json(ctx, w, q.space)}
        rec.eq(kr_norm(sp, tw)[0], kr_norm(q.space, w)[0], wit)
        rec.record(pushforward(q, tw).equals(w, F), witness=wit)


@_check("proj.dual_action")
def _c_dual_action(ctx: _Ctx, rec: _Recorder) -> None:
    sp, G = ctx.space, ctx.group
    for f in ctx.functions("proj.dual_action"):
        for a, g in enumerate(G.elements):
            rec.eq(lip_norm(sp, dual_action(sp, g, f)), lip_norm(sp, f), {"element": a})


@_check("proj.representative_independence")
def _c_rep(ctx: _Ctx, rec: _Recorder) -> None:
    sp, G, F = ctx.space, ctx.group, ctx.F
    for x in range(sp.n):
        Rx = project_free(sp, G, delta(sp, x))
        for a, g in enumerate(G.elements):
            rec.record(project_free(sp, G, delta(sp, g[x])).equals(Rx, F), witness={"element": a, "x": ctx.label(x)})


def _vectors_q(self: _Ctx, name: str) -> list[FreeVector]:
    rng = self.rng(name)
    return [gen.random_quotient_vector(rng, self.qspace) for _ in range(self.instance.trials)]


_Ctx.vectors_q = _vectors_q


ALL_CHECKS = sorted({name for _, _, name in MANIFEST} | set(EXTRA_CHECKS))


def run_suite(instance: Instance) -> CheckReport:
    """Run every check on ``instance``; results are sorted by check name.

    For non-isometric actions the metric is first replaced by its group
    average, and all later checks run on the averaged space.
    """
    t0 = time.perf_counter()
    F = instance.field
    report = CheckReport(instance.digest(), instance.mode)
    prelude = _Recorder("input.validate", F)
    prelude.record(True, instance.space.n, instance.group.order, None)
    try:
        averaged = average_metric(instance.space, instance.group)
        ctx = _Ctx(instance, instance.space, averaged, instance.group)
        ctx.qspace = build_quotient(averaged, instance.group)
    except FreelipError as exc:
        report.checks = [prelude.result(), CheckResult("group.average_metric_valid", "fail", witness={"error": str(exc)})]
        report.checks += [CheckResult(n, "blocked") for n in ALL_CHECKS if n != "group.average_metric_valid"]
        report.checks.sort(key=lambda c: c.name)
        report._fill_tolerances()
        report.ms = int((time.perf_counter() - t0) * 1000)
        return report

    results = [prelude.result()]
    for name in ALL_CHECKS:
        rec = _Recorder(name, F)
        try:
            _CHECKS[name](ctx, rec)
            results.append(rec.result())
        except FreelipError as exc:
            res = rec.result()
            res.status, res.witness = "fail", {"error": f"{type(exc).__name__}: {exc}"}
            results.append(res)
    results.sort(key=lambda c: c.name)
    report.checks = results
    report.ms = int((time.perf_counter() - t0) * 1000)
    return report


def blocked_report(error: Exception, mode: str = "exact", instance_id: str = "") -> CheckReport:
    """Report for an input that failed validation: every check is blocked."""
    report = CheckReport(instance_id, mode)
    report.checks = [CheckResult("input.validate", "fail", witness={"error": f"{type(error).__name__}: {error}"})]
    report.checks += [CheckResult(n, "blocked") for n in ALL_CHECKS]
    report.checks.sort(key=lambda c: c.name)
    report._fill_tolerances()
    return report


def verify_source(source, seed: int | None = None, trials: int | None = None) -> CheckReport:
    """Load and verify; validation failures become a blocked report."""
    try:
        inst = load_instance(source, seed, trials)
    except ParseError:
        raise
    except FreelipError as exc:
        doc = _parse_document(source)
        digest = hashlib.sha256(json.dumps(doc, sort_keys=True, default=str).encode()).hexdigest()
        return blocked_report(exc, str(doc.get("mode", "exact")), digest)
    return run_suite(inst)
