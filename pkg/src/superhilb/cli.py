"""Command-line interface: reduction, stratification, transition maps and
splitness checks with deterministic text or JSON output.

Exit codes: 0 for a completed computation (a non-split verdict is a
successful computation), 2 for input or parse errors, 3 for mathematical
precondition failures.
"""

from __future__ import annotations

import argparse
import json
import sys

from .charts import hilb21_atlas, verify_cocycle
from .errors import (
    ExprSyntaxError,
    DuplicateVariable,
    InvertibleOddVariable,
    NegativePowerOfNonInvertible,
    NonMonicDivisor,
    NotAUnit,
    NotCanonicalizable,
    ParityMismatch,
    RankOrderViolation,
    SuperAlgebraError,
    UnknownVariable,
)
from .ideals import CanonicalIdeal, reduce_to_basis, stratification_generators
from .localized import LocalizedPoly
from .obstruction import is_coboundary, split_check_11
from .parser import RingDecl, parse_poly, parse_ring, pretty, pretty_localized
from .ring import SuperPoly

PARSE_ERRORS = (
    ExprSyntaxError,
    DuplicateVariable,
    InvertibleOddVariable,
    NegativePowerOfNonInvertible,
    UnknownVariable,
)
MATH_ERRORS = (
    RankOrderViolation,
    NotCanonicalizable,
    NonMonicDivisor,
    NotAUnit,
    ParityMismatch,
)


def _emit(payload: dict, fmt: str, human_lines):
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True, separators=(", ", ": ")))
    else:
        for line in human_lines:
            print(line)


# ---------------------------------------------------------------------------
# reduce


def cmd_reduce(args) -> int:
    ideal = CanonicalIdeal.generic(args.p, args.q)
    params = (*ideal.a, *ideal.b, *ideal.alpha, *ideal.beta)
    ring = RingDecl([ideal.x, ideal.theta, *params])
    if args.ring:
        with open(args.ring, "r", encoding="utf-8") as handle:
            ring = ring.merged(parse_ring(handle.read()))

    values = {}
    if args.params == "zero":
        values = {s: SuperPoly.zero() for s in params}
    for item in args.set or []:
        name, _, expr = item.partition("=")
        symbol = ring.lookup(name.strip())
        values[symbol] = parse_poly(expr.strip(), ring)

    if values:
        f, g = ideal.with_values(values)
        ideal = CanonicalIdeal(
            args.p, args.q, ideal.x, ideal.theta,
            tuple(s for s in ideal.a if s not in values),
            tuple(s for s in ideal.b if s not in values),
            tuple(s for s in ideal.alpha if s not in values),
            tuple(s for s in ideal.beta if s not in values),
            f, g,
        )

    poly = parse_poly(args.poly, ring)
    vec = reduce_to_basis(poly, ideal)
    payload = {
        "p": args.p,
        "q": args.q,
        "evens": [pretty(e) for e in vec.evens],
        "odds": [pretty(o) for o in vec.odds],
        "cofactor_f": pretty(vec.cofactor_f),
        "cofactor_g": pretty(vec.cofactor_g),
        "in_ideal": vec.is_zero(),
    }
    lines = [
        f"basis coordinates over 1, x, ..., x^{args.p - 1}"
        + (f", theta, ..., x^{args.q - 1}*theta" if args.q else ""),
    ]
    for i, e in enumerate(vec.evens):
        lines.append(f"  [x^{i}]        {pretty(e)}")
    for j, o in enumerate(vec.odds):
        lines.append(f"  [x^{j}*theta]  {pretty(o)}")
    lines.append(f"cofactor of f: {pretty(vec.cofactor_f)}")
    lines.append(f"cofactor of g: {pretty(vec.cofactor_g)}")
    lines.append(f"member of the ideal: {'yes' if vec.is_zero() else 'no'}")
    _emit(payload, args.format, lines)
    return 0


# ---------------------------------------------------------------------------
# strata


def cmd_strata(args) -> int:
    gens = stratification_generators(args.p, args.q)
    payload = {
        "p": args.p,
        "q": args.q,
        "generators": [pretty(g) for g in gens],
        "dimension": [args.p, args.p],
    }
    lines = [
        f"stratification generators for rank ({args.p}|{args.q}): "
        f"{len(gens)}",
    ]
    for g in gens:
        lines.append(f"  {pretty(g)}")
    lines.append(f"residual parameter dimension: ({args.p}|{args.p})")
    _emit(payload, args.format, lines)
    return 0


# ---------------------------------------------------------------------------
# transition


def cmd_transition(args) -> int:
    pair = args.pair
    target, source = f"V{pair[0]}", f"V{pair[1]}"
    atlas = hilb21_atlas(args.k)
    tmap = atlas.transition(target, source)

    reference = None
    if pair == "13":
        from .charts import _expected_13

        reference = _expected_13(args.k, atlas.chart("V1"), atlas.chart("V3"))
    elif pair == "12":
        from .charts import _expected_12

        reference = _expected_12(args.k, atlas.chart("V1"), atlas.chart("V2"))

    rules_payload = {}
    lines = [f"transition {target} <- {source} at twist k = {args.k}"]
    match = None
    for coord in tmap.target.coordinates:
        text = pretty_localized(tmap.rule(coord))
        rules_payload[coord.name] = text
        lines.append(f"  {coord.name} := {text}")
    if reference is not None:
        match = all(
            tmap.rule(c) == LocalizedPoly.promote(reference[c])
            for c in tmap.target.coordinates
        )
        lines.append("reference closed form: MATCH" if match else
                     "reference closed form: MISMATCH")
    cocycle_ok, witness = verify_cocycle(atlas)
    lines.append(f"atlas cocycle consistent: {'yes' if cocycle_ok else 'no'}")
    payload = {
        "k": args.k,
        "pair": pair,
        "rules": rules_payload,
        "cocycle": cocycle_ok,
    }
    if match is not None:
        payload["match"] = match
    _emit(payload, args.format, lines)
    if match is False or not cocycle_ok:
        return 3
    return 0


# ---------------------------------------------------------------------------
# split-check


def _parse_k_range(args):
    if args.k is not None:
        return [args.k]
    lo, _, hi = args.k_range.partition("..")
    return list(range(int(lo), int(hi) + 1))


def cmd_split_check(args) -> int:
    ks = _parse_k_range(args)
    reports = []
    for k in sorted(ks):
        if args.target == "hilb11":
            verdict = split_check_11(k)
        else:
            verdict = is_coboundary(k)
            if args.degree_bound is not None:
                from .obstruction import (
                    build_coboundary_system,
                    solve_laurent_system,
                )

                system = build_coboundary_system(k, args.degree_bound)
                solvable = solve_laurent_system(system) is not None
                verdict.notes.append(
                    f"three-overlap solver at bound {args.degree_bound}: "
                    + ("solvable" if solvable else "no solution")
                )
        reports.append(verdict)

    for verdict in reports:
        payload = verdict.to_json_dict()
        lines = [
            f"target {verdict.target}, k = {verdict.twist_input}: "
            + ("split" if verdict.split else "non-split"),
        ]
        if verdict.twist is not None:
            lines.append(f"  twist: {verdict.twist}")
        if verdict.case_label:
            lines.append(f"  case: {verdict.case_label}")
        if verdict.degrees:
            lines.append(
                f"  wedge-square degrees: ({verdict.degrees[0]}, "
                f"{verdict.degrees[1]})"
            )
        for line in verdict.trace:
            lines.append(f"  trace: {line}")
        for note in verdict.notes:
            lines.append(f"  note: {note}")
        _emit(payload, args.format, lines)
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _nonnegative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="superhilb",
        description="Exact computations with point families on "
        "(1|1)-supercurves",
    )
    parser.add_argument(
        "--format", choices=("human", "json"), default="human"
    )
    # accepted before or after the subcommand
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument(
        "--format", choices=("human", "json"), default=argparse.SUPPRESS
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_reduce = sub.add_parser(
        "reduce", parents=[shared],
        help="reduce a polynomial onto the (p|q) monomial basis",
    )
    p_reduce.add_argument("--p", type=int, required=True)
    p_reduce.add_argument("--q", type=int, required=True)
    p_reduce.add_argument(
        "--params", choices=("symbolic", "zero"), default="symbolic"
    )
    p_reduce.add_argument(
        "--set", action="append", metavar="NAME=EXPR",
        help="assign a parameter (repeatable)",
    )
    p_reduce.add_argument("--ring", help="file with extra ring declarations")
    p_reduce.add_argument("poly", help="polynomial expression")
    p_reduce.set_defaults(func=cmd_reduce)

    p_strata = sub.add_parser(
        "strata", parents=[shared],
        help="flattening stratification generators",
    )
    p_strata.add_argument("--p", type=int, required=True)
    p_strata.add_argument("--q", type=int, required=True)
    p_strata.set_defaults(func=cmd_strata)

    p_trans = sub.add_parser(
        "transition", parents=[shared],
        help="print a rank-(2|1) atlas transition",
    )
    p_trans.add_argument("--k", type=int, required=True)
    p_trans.add_argument(
        "--pair", required=True,
        choices=("12", "13", "14", "23", "24", "34"),
    )
    p_trans.set_defaults(func=cmd_transition)

    p_split = sub.add_parser(
        "split-check", parents=[shared],
        help="decide splitness of a family of Hilbert charts",
    )
    p_split.add_argument(
        "--target", choices=("hilb11", "hilb21"), required=True
    )
    group = p_split.add_mutually_exclusive_group(required=True)
    group.add_argument("--k", type=int)
    group.add_argument("--k-range", metavar="A..B")
    p_split.add_argument(
        "--degree-bound", type=_nonnegative_int, default=None,
        help="extra truncation bound for the coboundary solver",
    )
    p_split.set_defaults(func=cmd_split_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PARSE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MATH_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except SuperAlgebraError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
