"""Command-line frontend: ``servloc <subcommand> ...``.

Reports go to stdout (or ``-o PATH``) as JSON, diagnostics to stderr.
Exit status is 2 for bad input, 1 when a check answers negatively and 0
otherwise.
"""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import asdict
from fractions import Fraction
from typing import Optional, Sequence

from . import jsonio
from .cuts import (
    FACET,
    FAMILIES,
    MULTI,
    SINGLE,
    all_family_cuts,
    critical_facet_cut,
    facet_conditions,
    multi_location_cut,
    single_location_cut,
)
from .exactmath import as_rational
from .instance import (
    IndexSubsets,
    generate_random,
    instance_to_dict,
    parse_instance,
    serialize_instance,
    validate,
)
from .oracle.checks import (
    all_vertices,
    check_facet,
    check_projection,
    check_valid,
    polytope_dimension,
    slice_vertices,
)
from .separation import separate_exhaustive, separate_greedy
from .solver import CutConfig, Objective, branch_and_bound
from .witness import (
    block_cycle_vectors,
    cycle_difference_vectors,
    extension_points,
    perturbation_family,
)

OK, NEGATIVE, BAD_INPUT = 0, 1, 2


class UsageError(ValueError):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _rational_list(text: str) -> list[Fraction]:
    try:
        return [as_rational(t.strip()) if "/" in t else as_rational(int(t)) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numerals, got {text!r}") from None


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_instance(path: str):
    return parse_instance(_read(path))


def _subsets(inst, args, need: bool = True) -> Optional[IndexSubsets]:
    if args.I is None and args.J is None:
        if need:
            raise UsageError("--I and --J are required")
        return None
    if not args.I or not args.J:
        raise UsageError("--I and --J must both be given and nonempty")
    jp = getattr(args, "jprime", None)
    sub = IndexSubsets(tuple(i - 1 for i in args.I), tuple(j - 1 for j in args.J), None if jp is None else jp - 1)
    try:
        sub.check(inst)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return sub


def _emit(args, doc) -> None:
    text = doc if isinstance(doc, str) else jsonio.dumps(doc)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    if args.m < 1 or args.n < 1:
        raise UsageError("--m and --n must be positive")
    _emit(args, serialize_instance(generate_random(args.m, args.n, args.seed)))
    return OK


def cmd_validate(args) -> int:
    inst = _load_instance(args.instance)
    diags = validate(inst)
    for d in diags:
        print(d, file=sys.stderr)
    _emit(args, {"instance": instance_to_dict(inst), "diagnostics": [asdict(d) for d in diags]})
    return OK


def cmd_cuts(args) -> int:
    inst = _load_instance(args.instance)
    if args.I is None and args.J is None:
        families = (args.family,) if args.family else FAMILIES
        _emit(args, [jsonio.cut_to_dict(c) for c in all_family_cuts(inst, families)])
        return OK
    sub = _subsets(inst, args)
    family = args.family or (SINGLE if sub.jprime is not None else FACET)
    if family == SINGLE:
        if sub.jprime is None:
            raise UsageError("--jprime is required for the single family")
        cut = single_location_cut(inst, sub.I, sub.J, sub.jprime)
    elif family == MULTI:
        cut = multi_location_cut(inst, sub.I, sub.J)
    else:
        if len(sub.J) < 2:
            raise UsageError("the facet family needs |J| >= 2")
        report = facet_conditions(inst, sub.I, sub.J)
        if not report.all_hold:
            print(jsonio.dumps(report.to_dict()), file=sys.stderr, end="")
        cut = critical_facet_cut(inst, sub.I, sub.J)
    _emit(args, jsonio.cut_to_dict(cut))
    return OK


def cmd_check_valid(args) -> int:
    inst = _load_instance(args.instance)
    cut = jsonio.parse_cut(_read(args.cut), inst.m, inst.n)
    report = check_valid(inst, cut, jobs=args.jobs)
    _emit(args, jsonio.validity_to_dict(report))
    return OK if report.valid else NEGATIVE


def cmd_check_facet(args) -> int:
    inst = _load_instance(args.instance)
    cut = jsonio.parse_cut(_read(args.cut), inst.m, inst.n)
    report = check_facet(inst, cut)
    _emit(args, jsonio.facet_to_dict(report))
    return OK if report.classification == "facet" else NEGATIVE


def cmd_dim(args) -> int:
    inst = _load_instance(args.instance)
    sub = _subsets(inst, args, need=False)
    dim = polytope_dimension(inst, sub)
    _emit(args, {"dimension": dim, "full_dimension": (2 * inst.m + 1) * inst.n})
    return OK


def cmd_vertices(args) -> int:
    inst = _load_instance(args.instance)
    if args.fix_y is not None:
        if len(args.fix_y) != inst.n or any(v not in (0, 1) for v in args.fix_y):
            raise UsageError(f"--fix-y needs {inst.n} binary entries")
        points = slice_vertices(inst, tuple(args.fix_y))
    else:
        points = all_vertices(inst)
    _emit(args, {"count": len(points), "vertices": [jsonio.point_to_dict(p) for p in points]})
    return OK


def cmd_project_check(args) -> int:
    inst = _load_instance(args.instance)
    ok = check_projection(inst)
    _emit(args, {"projection_matches": ok})
    return OK if ok else NEGATIVE


def cmd_separate(args) -> int:
    inst = _load_instance(args.instance)
    point = jsonio.parse_point(_read(args.point), inst.m, inst.n)
    if args.mode == "greedy":
        result = separate_greedy(inst, point, args.budget)
    else:
        result = separate_exhaustive(inst, point, jobs=args.jobs)
    _emit(args, jsonio.separation_to_dict(result))
    return NEGATIVE if result.cuts else OK


def cmd_solve(args) -> int:
    inst = _load_instance(args.instance)
    obj = Objective.revenue_minus_cost(inst, args.obj_cost)
    config = CutConfig.named(args.cuts)
    if args.mode == "greedy":
        config = CutConfig(config.families, "greedy", config.rounds, args.budget)
    report = branch_and_bound(inst, obj, config)
    print(f"solved in {report.seconds:.3f}s, {report.nodes} nodes", file=sys.stderr)
    _emit(args, jsonio.solve_to_dict(report))
    return OK


def cmd_witness(args) -> int:
    if args.kind == "cycle":
        fam = cycle_difference_vectors(args.n or 1)
    elif args.kind == "blocks":
        if not args.sizes:
            raise UsageError("--sizes is required")
        fam = block_cycle_vectors(args.sizes)
    elif args.kind == "perturbation":
        n, l, m = args.n or 1, args.l, args.m
        rng = random.Random(args.seed)
        u = [[rng.randint(-3, 3) for _ in range(l * n)] for _ in range(n)]
        v = [[rng.randint(-3, 3) for _ in range(m * n)] for _ in range(n)]
        w = [[int(a == b) for b in range(n)] for a in range(n)]
        up = [rng.randint(-3, 3) for _ in range(l * n)]
        vp = [rng.randint(-3, 3) for _ in range(m * n)]
        fam = perturbation_family(u, v, w, up, vp)
    else:
        if not args.instance:
            raise UsageError("an instance file is required for the extension construction")
        inst = _load_instance(args.instance)
        sub = _subsets(inst, args)
        cut = critical_facet_cut(inst, sub.I, sub.J)
        tight = [p for p in all_vertices(inst, sub) if cut.lhs(p) == cut.rhs]
        fam = extension_points(inst, sub, tight, cut)
    _emit(args, jsonio.family_to_dict(fam))
    return OK if fam.achieved() >= fam.claimed else NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write the JSON report here instead of stdout")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for pattern and separation scans")

    def subsets(p, jprime=False):
        p.add_argument("--I", type=_int_list, help="site indices, 1-based, e.g. 1,2,3")
        p.add_argument("--J", type=_int_list, help="location indices, 1-based, e.g. 1,2")
        if jprime:
            p.add_argument("--jprime", type=int, help="extra location for the single family")

    parser = argparse.ArgumentParser(prog="servloc", description="Exact cuts and oracles for max-attraction location polytopes")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="random instance")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("validate", parents=[common], help="check an instance file")
    p.add_argument("instance")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("cuts", parents=[common], help="generate family cuts")
    p.add_argument("instance")
    subsets(p, jprime=True)
    p.add_argument("--family", choices=FAMILIES)
    p.set_defaults(func=cmd_cuts)

    p = sub.add_parser("check-valid", parents=[common], help="exact validity over all binary patterns")
    p.add_argument("instance")
    p.add_argument("cut")
    p.set_defaults(func=cmd_check_valid)

    p = sub.add_parser("check-facet", parents=[common], help="dimension of the face a cut defines")
    p.add_argument("instance")
    p.add_argument("cut")
    p.set_defaults(func=cmd_check_facet)

    p = sub.add_parser("dim", parents=[common], help="polytope dimension, optionally of the face for --I/--J")
    p.add_argument("instance")
    subsets(p)
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("vertices", parents=[common], help="vertex enumeration")
    p.add_argument("instance")
    p.add_argument("--fix-y", type=_int_list, help="binary location vector, e.g. 1,0")
    p.set_defaults(func=cmd_vertices)

    p = sub.add_parser("project-check", parents=[common], help="lifted projection equals the original set")
    p.add_argument("instance")
    p.set_defaults(func=cmd_project_check)

    p = sub.add_parser("separate", parents=[common], help="violated cuts at a point")
    p.add_argument("instance")
    p.add_argument("point")
    p.add_argument("--mode", choices=["exhaustive", "greedy"], default="exhaustive")
    p.add_argument("--budget", type=int, default=50)
    p.set_defaults(func=cmd_separate)

    p = sub.add_parser("solve", parents=[common], help="exact branch and bound")
    p.add_argument("instance")
    p.add_argument("--cuts", choices=["all", "none", "facet-only"], default="all")
    p.add_argument("--obj-cost", type=_rational_list, help="opening costs f1,f2,...")
    p.add_argument("--mode", choices=["exhaustive", "greedy"], default="exhaustive")
    p.add_argument("--budget", type=int, default=50)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("witness", parents=[common], help="affine-independence constructions")
    p.add_argument("kind", choices=["cycle", "blocks", "perturbation", "extension"])
    p.add_argument("instance", nargs="?")
    p.add_argument("--n", type=int)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--sizes", type=_int_list)
    p.add_argument("--seed", type=int, default=0)
    subsets(p)
    p.set_defaults(func=cmd_witness)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    try:
        return args.func(args)
    except ValueError as exc:
        # InstanceError, UsageError, ConditionNotMet and the size guards are all ValueErrors
        print(f"error: {exc}", file=sys.stderr)
    return BAD_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
