"""Command-line interface: ``freelip {validate,quotient,norm,lipnorm,project,verify}``.

Exit status is 0 on success (or an all-pass report), 1 when a report has a
failing check, and 2 for unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from .errors import FreelipError, ParseError
from .free_space import FreeVector, LipFunction, kr_norm, lip_norm
from .group import average_metric, distortion_bounds
from .projections import project_free, project_lip
from .quotient import build_quotient
from .verify import Instance, blocked_report, load_instance, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def parse_assignment(text: str) -> dict[str, str]:
    """``"a:1,b:-2"`` -> ``{"a": "1", "b": "-2"}``."""
    out: dict[str, str] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        label, sep, value = part.rpartition(":")
        if not sep or not label:
            raise InputError(f"expected label:value, got {part!r}")
        if label in out:
            raise InputError(f"label {label!r} given twice")
        out[label] = value
    return out


def _build(kind, space, text: str):
    try:
        return kind.from_mapping(space, parse_assignment(text))
    except KeyError as exc:
        raise InputError(f"unknown point label {exc}") from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _working_space(inst: Instance, average: bool):
    """The instance space, or its averaged metric when requested."""
    if distortion_bounds(inst.space, inst.group).isometric:
        return inst.space
    if not average:
        raise InputError("the action is not isometric; pass --average to use the averaged metric")
    return average_metric(inst.space, inst.group)


def _fmt(F, a) -> str:
    return str(F.format(a))


def _print_vector(space, v: FreeVector) -> None:
    F = space.field
    terms = [f"{space.labels[x]}:{_fmt(F, a)}" for x, a in enumerate(v.coeffs) if a != 0]
    print("vector: " + (",".join(terms) if terms else "0"))


def _print_function(space, f: LipFunction) -> None:
    F = space.field
    print("function: " + ",".join(f"{space.labels[x]}:{_fmt(F, a)}" for x, a in enumerate(f.values)))


def cmd_validate(args) -> int:
    inst = load_instance(args.file)
    sp, G = inst.space, inst.group
    b = distortion_bounds(sp, G)
    print(f"valid: {sp.n} points, base {sp.labels[sp.base]}, mode {inst.mode}")
    print(f"group order: {G.order}")
    print(f"isometric: {'yes' if b.isometric else 'no'}")
    print(f"distortion: r={_fmt(sp.field, b.r)} R={_fmt(sp.field, b.R)}")
    return EXIT_OK


def cmd_quotient(args) -> int:
    inst = load_instance(args.file)
    space = _working_space(inst, args.average)
    q = build_quotient(space, inst.group)
    F = space.field
    doc = {
        "points": list(q.space.labels),
        "base": q.space.labels[q.space.base],
        "metric": [[F.format(v) for v in row] for row in q.space.dist],
        "generators": [],
        "mode": inst.mode,
        "seed": inst.seed,
        "trials": inst.trials,
    }
    text = json.dumps(doc, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote quotient with {q.space.n} orbits to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_norm(args) -> int:
    inst = load_instance(args.file)
    sp = inst.space
    v = _build(FreeVector, sp, args.vector)
    value, plan = kr_norm(sp, v)
    F = sp.field
    print(f"norm: {_fmt(F, value)}")
    print("plan:")
    for s, t, amt in plan.flows:
        print(f"  {sp.labels[s]} -> {sp.labels[t]}: {_fmt(F, amt)} (cost {_fmt(F, amt * sp.dist[s][t])})")
    return EXIT_OK


def cmd_lipnorm(args) -> int:
    inst = load_instance(args.file)
    f = _build(LipFunction, inst.space, args.function)
    print(f"lipnorm: {_fmt(inst.space.field, lip_norm(inst.space, f))}")
    return EXIT_OK


def cmd_project(args) -> int:
    inst = load_instance(args.file)
    space = _working_space(inst, args.average)
    if args.vector is not None:
        _print_vector(space, project_free(space, inst.group, _build(FreeVector, space, args.vector)))
    else:
        _print_function(space, project_lip(space, inst.group, _build(LipFunction, space, args.function)))
    return EXIT_OK


def _emit_report(report, args) -> None:
    if args.no_timing:
        report.ms = 0
    if args.json != "-":
        for c in report.checks:
            print(f"{c.status:7} {c.name}")
        print(f"overall: {report.overall} ({len(report.checks)} checks, {report.ms} ms)")
    if args.json:
        text = report.dumps()
        if args.json == "-":
            sys.stdout.write(text)
        else:
            Path(args.json).write_text(text, encoding="utf-8")


def cmd_verify(args) -> int:
    try:
        inst = load_instance(args.file, args.seed, args.trials)
    except ParseError:
        raise
    except FreelipError as exc:
        # invalid instance: emit the fail-fast report, then report an input error
        text = Path(args.file).read_text(encoding="utf-8")
        mode = str(json.loads(text).get("mode", "exact"))
        _emit_report(blocked_report(exc, mode, hashlib.sha256(text.encode()).hexdigest()), args)
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = run_suite(inst)
    _emit_report(report, args)
    return EXIT_OK if report.passed else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="freelip", description="Lipschitz-free spaces of finite metric spaces under group actions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check an instance file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("quotient", help="write the orbit quotient as an instance file")
    p.add_argument("file")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--average", action="store_true", help="average a non-isometric metric first")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("norm", help="free-space norm and an optimal transport plan")
    p.add_argument("file")
    p.add_argument("--vector", required=True, help='coefficients, e.g. "a:1,b:-2"')
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("lipnorm", help="Lipschitz constant of a function vanishing at the base")
    p.add_argument("file")
    p.add_argument("--function", required=True, help='values, e.g. "a:1,b:0.5" (unlisted points are 0)')
    p.set_defaults(func=cmd_lipnorm)

    p = sub.add_parser("project", help="group-average a vector or a function")
    p.add_argument("file")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--vector")
    which.add_argument("--function")
    p.add_argument("--average", action="store_true", help="average a non-isometric metric first")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("file")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--json", help="write the JSON report here ('-' for stdout)")
    p.add_argument("--no-timing", action="store_true", help="report ms as 0 for reproducible output")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FreelipError, InputError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
