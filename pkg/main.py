#!/usr/bin/env python3
"""
SIL — Command Line Interface

Check independence relations against the stable-independence axioms,
compare relations, search for canonical relations and probe colimits and
Galois types, all by exhaustive search at small bounds.

Usage:
    python3 main.py catalog
    python3 main.py check-axioms --class finset --relation intersection --max-size 3
    python3 main.py compare --class graph --rel-a effective_pullback_rel --rel-b no_cross_edges --max-size 4
    python3 main.py canonicity-search --class klocal_graph:2 --max-size 3
    python3 main.py effective-unions --class graph --max-size 2 --format json
    python3 main.py colimit pushout --class graph --input structures/edge_span.json
    python3 main.py order-property --class graph --tuple-len 2 --length 3 --max-size 6

Exit codes: 0 every check HOLDS, 1 some check FAILS, 2 some check is
INCONCLUSIVE, 3 usage or input error. order-property exits 1 when it
finds a witness and 0 when it finds none.
"""

import argparse
import json
import logging
import os
import sys

# Ensure the package is importable from this directory
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from sil import CheckReport, SuiteReport, Workbench
from sil.catalog import IncompatibleRelationError, UnknownClassError, UnknownRelationError
from sil.diagrams import BudgetError
from sil.experiments import UnknownAxiomError
from sil.profile_loader import ProfileLoadError
from sil.reporting import EXIT_CODES
from sil.structure_io import StructureLoadError
from sil.structures import NonEnumerableClassError, UnsupportedOperationError

PROFILES_DIR = os.path.join(os.path.dirname(__file__), "profiles")

EXIT_USAGE = 3

EPILOG = (
    "Exit codes: 0 every check HOLDS, 1 some check FAILS, 2 some check is INCONCLUSIVE,\n"
    "3 usage or input error. order-property exits 1 when it finds a witness."
)

USAGE_ERRORS = (
    StructureLoadError,
    UnknownClassError,
    UnknownRelationError,
    IncompatibleRelationError,
    UnsupportedOperationError,
    NonEnumerableClassError,
    ProfileLoadError,
    UnknownAxiomError,
    BudgetError,
    ValueError,
)


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors on exit code 3."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"ERROR: {message}\n")


# -----------------------------------------------------------------------------
# Rendering
# -----------------------------------------------------------------------------

def format_report(report: CheckReport, show_audit: bool = True) -> str:
    """Format one check report for display."""
    lines = [f"\n[{report.verdict.value}] {report.name}", "─" * 60]
    stats = report.stats
    lines.append(f"bound: {stats.get('bound')}   configurations: {stats.get('configurations', 0)}"
                 f"   time: {stats.get('wall_time', 0.0):.3f}s")
    extra = {k: v for k, v in stats.items() if k not in ("bound", "configurations", "wall_time")}
    for key in sorted(extra):
        lines.append(f"{key}: {extra[key]}")
    for note in report.notes:
        lines.append(f"note: {note}")
    if report.witnesses:
        lines.append("\n── Witnesses ──")
        for w in report.witnesses[:3]:
            lines.append("  " + json.dumps(w, sort_keys=True))
        if len(report.witnesses) > 3:
            lines.append(f"  ... {len(report.witnesses) - 3} more")
    if show_audit and report.audit_log:
        lines.append("\n── Audit Log ──")
        for entry in report.audit_log:
            lines.append(f"  [{entry['check']}] {entry['result']}: {entry['detail']}")
    lines.append("─" * 60)
    return "\n".join(lines)


def format_suite(suite: SuiteReport, show_audit: bool = False) -> str:
    lines = [f"\n[{suite.verdict.value}] {suite.name}", "─" * 60]
    for key in sorted(suite.context):
        lines.append(f"{key}: {suite.context[key]}")
    lines.append("\n── Verdicts ──")
    width = max((len(r.name) for r in suite.reports), default=0)
    for r in suite.reports:
        lines.append(f"  {r.name.ljust(width)}  {r.verdict.value}")
    for r in suite.reports:
        if r.verdict.value != "HOLDS" or show_audit:
            lines.append(format_report(r, show_audit))
    lines.append("─" * 60)
    return "\n".join(lines)


def format_result(result: dict) -> str:
    lines = [f"\n[{result.get('name', 'result')}]", "─" * 60]
    for key in sorted(result):
        if key == "name":
            continue
        value = result[key]
        if isinstance(value, (dict, list)):
            lines.append(f"{key}:")
            lines.append("  " + json.dumps(value, sort_keys=True))
        else:
            lines.append(f"{key}: {value}")
    lines.append("─" * 60)
    return "\n".join(lines)


def render(result, fmt: str, verbose: bool = False) -> str:
    if isinstance(result, (CheckReport, SuiteReport)):
        if fmt == "json":
            return json.dumps(result.to_dict(), indent=2, sort_keys=True)
        if isinstance(result, SuiteReport):
            return format_suite(result, show_audit=verbose)
        return format_report(result)
    if fmt == "json":
        return json.dumps(result, indent=2, sort_keys=True)
    return format_result(result)


def exit_code_for(command: str, result) -> int:
    if isinstance(result, SuiteReport):
        return result.exit_code()
    if isinstance(result, CheckReport):
        return EXIT_CODES[result.verdict]
    if command == "order-property":
        return 1 if result.get("found") else 0
    return 0


# -----------------------------------------------------------------------------
# Arguments
# -----------------------------------------------------------------------------

def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--format", choices=("text", "json"), default=default(None),
                        help="Output format (default: the profile's, normally text)")
    parser.add_argument("--jobs", type=int, default=default(None),
                        help="Worker threads; output is identical for any value")
    parser.add_argument("--budget-depth", type=int, default=default(None), dest="budget_depth",
                        help="Maximum length of amalgam equivalence chains")
    parser.add_argument("--profile", default=default("default"),
                        help="Run profile ID from profiles/ (default: 'default')")
    parser.add_argument("--verbose", "-v", action="store_true", default=default(False),
                        help="Log search progress to stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        description="SIL — Stable Independence Lab",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=EPILOG,
    )
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def command(name: str, help_text: str, needs_class: bool = True, needs_size: bool = True):
        p = sub.add_parser(name, help=help_text, parents=[common])
        if needs_class:
            p.add_argument("--class", dest="klass", required=True,
                           help="Class spec, e.g. finset, graph, klocal_graph:2, vecspace:2, dir:PATH")
        if needs_size:
            p.add_argument("--max-size", type=int, required=True, dest="max_size",
                           help="Size bound of the sweep (dimension for vecspace)")
        return p

    p = command("check-axioms", "Run the axiom suite for a relation")
    p.add_argument("--relation", required=True)
    p.add_argument("--axioms", default=None, help="Comma-separated checker names (default: the profile's)")
    p.add_argument("--theta", type=int, default=None, help="Witness-property bound (default: the profile's)")

    p = command("compare", "Find squares where two relations disagree")
    p.add_argument("--rel-a", required=True, dest="rel_a")
    p.add_argument("--rel-b", required=True, dest="rel_b")

    p = command("canonicity-search", "Enumerate every coherent choice of amalgams")
    p.add_argument("--limit", type=int, default=256, help="Stop after this many choices")
    p.add_argument("--no-local-character", action="store_true", dest="no_local_character",
                   help="Keep choices that fail local character")

    p = command("colimit", "Pushout of a span file or pullback of a cospan file", needs_class=False, needs_size=False)
    p.add_argument("operation", choices=("pushout", "pullback"))
    p.add_argument("--input", required=True)
    p.add_argument("--class", dest="klass", default=None, help="Class spec (needed for pushout)")

    command("ringel", "Pushouts of regular monos are pullbacks")
    command("effective-unions", "Pullback squares of regular monos are effective")
    command("coherence", "Coherence of the strong-substructure order")

    p = command("order-property", "Search for an order-property witness")
    p.add_argument("--tuple-len", type=int, required=True, dest="tuple_len")
    p.add_argument("--length", type=int, required=True)

    p = command("count-types", "Count Galois types over a base structure", needs_size=False)
    p.add_argument("--base", required=True, help="Structure file of the base")
    p.add_argument("--tuple-len", type=int, required=True, dest="tuple_len")
    p.add_argument("--max-size", type=int, default=None, dest="max_size",
                   help="Extension size bound (default: base size plus tuple length)")

    p = command("tameness", "Types over a base differ over a small subset")
    p.add_argument("--tuple-len", type=int, required=True, dest="tuple_len")
    p.add_argument("--chi", type=int, required=True)
    p.add_argument("--base", default=None, help="Structure file of the base (default: every member)")

    command("catalog", "List classes, relations and profiles", needs_class=False, needs_size=False)
    return parser


def dispatch(bench: Workbench, args):
    cmd = args.command
    if cmd == "check-axioms":
        axioms = [a.strip() for a in args.axioms.split(",") if a.strip()] if args.axioms else None
        return bench.check_axioms(args.klass, args.relation, args.max_size, axioms, args.theta)
    if cmd == "compare":
        return bench.compare(args.klass, args.rel_a, args.rel_b, args.max_size)
    if cmd == "canonicity-search":
        return bench.canonicity_search(args.klass, args.max_size, args.limit, not args.no_local_character)
    if cmd == "colimit":
        return bench.colimit(args.operation, args.input, args.klass)
    if cmd == "ringel":
        return bench.ringel(args.klass, args.max_size)
    if cmd == "effective-unions":
        return bench.effective_unions(args.klass, args.max_size)
    if cmd == "coherence":
        return bench.coherence(args.klass, args.max_size)
    if cmd == "order-property":
        return bench.order_property(args.klass, args.tuple_len, args.length, args.max_size)
    if cmd == "count-types":
        return bench.count_types(args.klass, args.base, args.tuple_len, args.max_size)
    if cmd == "tameness":
        return bench.tameness(args.klass, args.tuple_len, args.chi, args.max_size, args.base)
    if cmd == "catalog":
        return bench.catalog()
    raise ValueError(f"unknown command '{cmd}'")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        bench = Workbench(PROFILES_DIR, args.profile, max_depth=args.budget_depth, jobs=args.jobs)
        result = dispatch(bench, args)
    except USAGE_ERRORS as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_USAGE
    fmt = args.format or bench.profile.output_format
    print(render(result, fmt, args.verbose))
    return exit_code_for(args.command, result)


if __name__ == "__main__":
    sys.exit(main())
