"""Command-line driver.

Exit codes: 0 success / YES / CLEAN, 1 NO / violation / failing link,
2 UNKNOWN / inconclusive, 3 usage or input error.
"""

from __future__ import annotations

import argparse
import sys

from npc2.collapse import is_collapsible
from npc2.complex import ComplexError, connected_components
from npc2.groups import is_trivial_group, tietze_simplify
from npc2.harness import (
    GENERATORS,
    BadParams,
    ScanConfig,
    UnknownGenerator,
    generate,
    octahedron_parts,
    strong_injectivity_scan,
)
from npc2.homology import homology
from npc2.io import ParseError, dump_complex, dump_subcomplex, emit_report, parse_complex, parse_subcomplex
from npc2.metric import DEFAULT_TOL, DegenerateTriangle, check_link_condition, is_cat0
from npc2.pi1 import fundamental_group
from npc2.verdict import Budget, Verdict

EXIT_OK, EXIT_NO, EXIT_UNKNOWN, EXIT_INPUT = 0, 1, 2, 3
_VERDICT_EXIT = {Verdict.YES: EXIT_OK, Verdict.NO: EXIT_NO, Verdict.UNKNOWN: EXIT_UNKNOWN}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _common(p: argparse.ArgumentParser, complex_input=True):
    if complex_input:
        p.add_argument("input", nargs="?", default="-", help="complex file (default: stdin)")
    p.add_argument("--format", choices=("human", "machine"), default="human")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--assume-flat-ok", action="store_true",
                   help="treat links with systole exactly 2*pi as passing")
    p.add_argument("--budget-tietze", type=int, dest="tietze_moves")
    p.add_argument("--budget-cosets", type=int, dest="max_cosets")
    p.add_argument("--budget-word", type=int, dest="word_length")
    p.add_argument("--budget-nodes", type=int, dest="search_nodes")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="npc2", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="print a builtin complex as a complex file")
    g.add_argument("name", choices=GENERATORS)
    g.add_argument("--n", type=int)
    g.add_argument("--k", type=int)
    g.add_argument("--metric", choices=("natural", "unit"), default="natural")
    g.add_argument("--part", choices=("upper", "lower", "equator"),
                   help="octahedron only: print this subcomplex file instead")

    for name, text in [
        ("validate", "check a complex file"),
        ("curvature", "link condition at every vertex"),
        ("cat0", "CAT(0) verdict: link condition and trivial pi_1"),
        ("homology", "integer homology"),
        ("pi1", "presentation of pi_1 of one component"),
        ("collapse", "search for a collapse to a point"),
    ]:
        p = sub.add_parser(name, help=text)
        _common(p)
        if name == "pi1":
            p.add_argument("--basepoint", type=int)

    s = sub.add_parser("scan", help="exhaustive strong pi_1-injectivity scan")
    _common(s)
    s.add_argument("--y", action="append", default=[], metavar="FILE", help="Y subcomplex file")
    s.add_argument("--z", action="append", default=[], metavar="FILE", help="Z subcomplex file")
    s.add_argument("--max-y", type=int)
    s.add_argument("--max-z", type=int)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--any-y", action="store_true", help="do not require Y to be pi_1-injective")
    s.add_argument("--disconnected", action="store_true", help="also enumerate disconnected subcomplexes")
    return parser


def _budget(args) -> Budget:
    return Budget.from_env(tietze_moves=args.tietze_moves, max_cosets=args.max_cosets,
                           word_length=args.word_length, search_nodes=args.search_nodes)


def run(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return _dispatch(args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
    except ParseError as exc:
        print(f"parse error at {exc}", file=err)
    except ComplexError as exc:
        print(f"invalid complex: {exc}", file=err)
        for d in getattr(exc, "diagnostics", []):
            print(f"  {d}", file=err)
    except (DegenerateTriangle, UnknownGenerator, BadParams, ValueError, OSError) as exc:
        print(f"error: {exc}", file=err)
    return EXIT_INPUT


def _dispatch(args, out) -> int:
    if args.command == "generate":
        c, m = generate(args.name, n=args.n, k=args.k, metric=args.metric)
        if args.part:
            if args.name != "octahedron":
                raise BadParams("--part is only defined for the octahedron")
            out.write(dump_subcomplex(octahedron_parts(c)[args.part], "octahedron"))
        else:
            out.write(dump_complex(c, m, name=args.name))
        return EXIT_OK

    c, m = parse_complex(_read_input(args.input))
    budget = _budget(args)
    fmt = args.format

    if args.command == "validate":
        nv, ne, nt = c.counts()
        out.write(emit_report({"valid": True, "vertices": nv, "edges": ne, "triangles": nt,
                               "components": len(connected_components(c))}, fmt))
        return EXIT_OK
    if args.command == "curvature":
        report = check_link_condition(c, m, args.tol, args.assume_flat_ok)
        out.write(emit_report(report, fmt))
        if report.failing:
            return EXIT_NO
        return EXIT_UNKNOWN if report.inconclusive else EXIT_OK
    if args.command == "cat0":
        v = is_cat0(c, m, budget, args.tol, args.assume_flat_ok)
        out.write(emit_report(v, fmt, command="cat0"))
        return _VERDICT_EXIT[v.value]
    if args.command == "homology":
        out.write(emit_report(homology(c), fmt))
        return EXIT_OK
    if args.command == "pi1":
        p = fundamental_group(c, args.basepoint)
        simple = tietze_simplify(p, budget)
        trivial = is_trivial_group(p, budget)
        if fmt == "machine":
            out.write(emit_report(p, fmt, simplified=simple, trivial=trivial.value))
        else:
            out.write(f"presentation: {p.format()}\nsimplified:   {simple.format()}\n"
                      f"trivial group: {trivial.value.value}\n")
        return EXIT_OK
    if args.command == "collapse":
        v = is_collapsible(c, budget)
        out.write(emit_report(v, fmt, command="collapse"))
        return _VERDICT_EXIT[v.value]
    if args.command == "scan":
        cfg = ScanConfig(
            max_y_size=args.max_y,
            max_z_size=args.max_z,
            budget=budget,
            require_y_pi1_injective=not args.any_y,
            connected_only=not args.disconnected,
            y_candidates=[parse_subcomplex(_read_input(f), c) for f in args.y] or None,
            z_candidates=[parse_subcomplex(_read_input(f), c) for f in args.z] or None,
            workers=args.workers,
        )
        report = strong_injectivity_scan(c, cfg)
        out.write(emit_report(report, fmt))
        return {"CLEAN": EXIT_OK, "VIOLATION": EXIT_NO, "INCONCLUSIVE": EXIT_UNKNOWN}[report.verdict]
    raise UsageError(f"unknown command {args.command}")


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
