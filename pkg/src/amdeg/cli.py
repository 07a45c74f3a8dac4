"""Command line front end.

Exit codes: 0 success, 1 a check or comparison failed (or a computation hit the
degree cap), 2 bad input (parse error, unknown target, bad prime),
3 projection center lies on the variety.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .classify import analyze
from .pipeline import evaluate, is_generic, load_source, parse_source
from .polyring import DEFAULT_PRIME, ParseError, is_prime
from .groebner import InhomogeneousError
from .reproduce import MAX_ATTEMPTS, TARGETS, reproduce
from .resolution import ResolutionError
from .varieties import PointOnVarietyError, enumerate_scroll_types, scroll_variable_names

EXIT_OK, EXIT_CHECK, EXIT_INPUT, EXIT_ON_VARIETY = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print(text)


def _fail(args, code: int, message: str) -> int:
    if args.json:
        print(json.dumps({"error": message, "exit_code": code}))
    else:
        print(f"error: {message}", file=sys.stderr)
    return code


def cmd_construct(args) -> int:
    ev = evaluate(args.spec, args.prime, args.seed)
    I = ev.ideal
    gens = [str(g) for g in I.generators]
    node = parse_source(args.spec)
    names = scroll_variable_names(node.arg) if node.kind == "scroll" else None
    payload = {"spec": args.spec, "num_vars": I.ring.num_vars, "modulus": I.ring.modulus,
               "var_names": list(I.ring.var_names), "generator_degrees": I.generator_degrees(),
               "generators": gens, "seed": ev.seed if is_generic(node) else None, "choices": ev.choices}
    if names:
        payload["display_names"] = dict(zip(I.ring.var_names, names))
    lines = [f"{args.spec}: {len(gens)} generators in {I.ring.num_vars} variables over GF({I.ring.modulus})"]
    if names:
        lines.append("variables: " + ", ".join(f"{a}={b}" for a, b in zip(I.ring.var_names, names)))
    lines += ev.choices
    lines += gens
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_analyze(args) -> int:
    node_generic = False
    try:
        node_generic = is_generic(parse_source(args.source))
    except ParseError:
        pass  # may be a file name
    attempts = MAX_ATTEMPTS if node_generic else 1
    err = None
    for k in range(attempts):
        try:
            ev = load_source(args.source, args.prime, args.seed + k)
            break
        except PointOnVarietyError as e:
            err = e
    else:
        return _fail(args, EXIT_ON_VARIETY, str(err))
    report = analyze(ev.ideal, degree_cap=args.degree_cap)
    payload = {"source": args.source, "seed": ev.seed if node_generic else None,
               "choices": ev.choices, "report": report.to_dict()}
    head = [f"source: {args.source}"]
    if node_generic:
        head.append(f"seed: {ev.seed}")
    head += ev.choices
    _emit(args, payload, "\n".join(head + [report.pretty()]))
    return EXIT_OK if report.all_passed else EXIT_CHECK


def cmd_reproduce(args) -> int:
    if args.target not in TARGETS:
        raise UsageError(f"unknown target {args.target!r}; choose from {', '.join(TARGETS)}")
    results = reproduce(args.target, args.prime, args.seed, args.degree_cap, args.jobs)
    ok = all(r.passed for r in results)
    payload = {"target": args.target, "prime": args.prime, "seed": args.seed, "passed": ok,
               "items": [r.to_dict() for r in results]}
    lines = [r.line() for r in results]
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} passed")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_CHECK


def cmd_enumerate(args) -> int:
    if args.c < 1:
        raise UsageError("codimension must be >= 1")
    rows = enumerate_scroll_types(args.c)
    payload = {"c": args.c, "rows": [{"parts": list(t.parts), "k": t.k, "r_plus_1": r1, "dim": d}
                                     for t, r1, d in rows]}
    lines = [f"{'type':<16} {'k':>2} {'r+1':>4} {'dim X':>5}"]
    lines += [f"{str(t):<16} {t.k:>2} {r1:>4} {d:>5}" for t, r1, d in rows]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--prime", type=int, default=d(DEFAULT_PRIME), help="field characteristic")
    parser.add_argument("--seed", type=int, default=d(0), help="seed for generic choices")
    parser.add_argument("--json", action="store_true", default=d(False), help="JSON output")
    parser.add_argument("--degree-cap", type=int, default=d(8),
                        help="largest twist minus homological degree allowed in a resolution")
    parser.add_argument("--jobs", type=int, default=d(1), help="worker processes for reproduce")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="amdeg", description=(
        "Betti diagrams, Hilbert series and invariants of varieties of minimal and almost minimal degree."))
    _common(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _common(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="print the generators of a construction")
    p.add_argument("spec", help='e.g. "S(3)", veronese, segre22, segre111, pfaffian5')
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("analyze", parents=[common], help="full invariant report with checks")
    p.add_argument("source", help='ideal file or description such as "project(S(8), (0:0:0:0:1:0:0:0:0))"')
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("reproduce", parents=[common], help="compare against the stored tables")
    p.add_argument("target", help=", ".join(TARGETS))
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("enumerate", parents=[common], help="scroll types for codimension c")
    p.add_argument("c", type=int)
    p.set_defaults(func=cmd_enumerate)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.prime <= 2 or not is_prime(args.prime):
        return _fail(args, EXIT_INPUT, f"--prime {args.prime} is not an odd prime")
    if args.jobs < 1:
        return _fail(args, EXIT_INPUT, "--jobs must be >= 1")
    try:
        return args.func(args)
    except PointOnVarietyError as e:
        return _fail(args, EXIT_ON_VARIETY, str(e))
    except (UsageError, ParseError, InhomogeneousError, ValueError) as e:
        return _fail(args, EXIT_INPUT, str(e))
    except ResolutionError as e:
        return _fail(args, EXIT_CHECK, str(e))
    except OSError as e:
        return _fail(args, EXIT_INPUT, str(e))


if __name__ == "__main__":
    sys.exit(main())
