"""Command-line surface: validate, sets, optimize, classify, impact, export.

Exit codes: 0 success, 1 validation errors found, 2 usage/IO/parse error.
Reports go to stdout, diagnostics to stderr. With --json every command
emits exactly one JSON document on stdout and nothing else there.
Analytical commands refuse to run on catalogs with validation errors.
Set REQLATTICE_NO_COLOR to disable ANSI styling.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import io as catalog_io
from .algebra import (
    RequirementSet,
    jurisdiction_rl,
    product_union,
    requirements_for,
    rl_min,
)
from .analysis import change_impact, classify_overlap, consistency_diagnostics
from .errors import (
    EmptyCatalogError,
    FocusForbiddenError,
    FocusRequiredError,
    ParseError,
    ReqlatticeError,
    SchemaError,
    UnknownIdError,
)
from .model import Catalog, Issue, Severity, ValidationReport, validate
from .refinement import (
    RefinementGraph,
    build_graph,
    is_weaker,
    strongest_global,
    strongest_product,
    strongest_rl,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2


class _Refused(Exception):
    """Internal: an analytical command hit a catalog with validation errors."""

    def __init__(self, report: ValidationReport) -> None:
        super().__init__("catalog has validation errors")
        self.report = report


class UnknownFlagCombo(ReqlatticeError):
    """Selector flags do not pick exactly one construct."""


def _style(text: str, sgr: str) -> str:
    if os.environ.get("REQLATTICE_NO_COLOR") or not sys.stdout.isatty():
        return text
    return f"\x1b[{sgr}m{text}\x1b[0m"


def _severity_text(severity: Severity) -> str:
    return _style(severity.value, "31" if severity is Severity.ERROR else "33")


def _print_issue(issue: Issue, stream) -> None:
    ids = " [" + ", ".join(issue.ids) + "]" if issue.ids else ""
    print(f"{_severity_text(issue.severity)} {issue.code}: {issue.message}{ids}", file=stream)


def _issue_json(issue: Issue) -> dict:
    return {"code": issue.code, "message": issue.message, "ids": list(issue.ids)}


def _emit_json(payload: dict) -> None:
    print(json.dumps(payload, indent=2, ensure_ascii=False))


def _load_catalog(path: str) -> Catalog:
    return catalog_io.load(path)


def _load_validated(path: str) -> tuple[Catalog, RefinementGraph]:
    catalog = _load_catalog(path)
    report = validate(catalog)
    if not report.ok:
        raise _Refused(report)
    return catalog, build_graph(catalog)


def cmd_validate(args: argparse.Namespace) -> int:
    catalog = _load_catalog(args.catalog)
    report = validate(catalog)
    warnings = list(report.warnings)
    if report.ok:
        warnings.extend(consistency_diagnostics(catalog))
    if args.json:
        _emit_json(
            {
                "ok": report.ok,
                "errors": [_issue_json(i) for i in report.errors],
                "warnings": [_issue_json(i) for i in warnings],
            }
        )
    else:
        for issue in report.errors:
            _print_issue(issue, sys.stdout)
        for issue in warnings:
            _print_issue(issue, sys.stdout)
        print(f"{len(report.errors)} error(s), {len(warnings)} warning(s)")
    return EXIT_OK if report.ok else EXIT_INVALID


def _print_set(ids: RequirementSet, args: argparse.Namespace) -> None:
    if args.json:
        _emit_json({"count": len(ids), "ids": list(ids)})
    else:
        for requirement_id in ids:
            print(requirement_id)


def cmd_sets(args: argparse.Namespace) -> int:
    if args.rl and args.min:
        raise UnknownFlagCombo("--rl and --min are mutually exclusive")
    if args.rl or args.min:
        if args.product or args.kind:
            raise UnknownFlagCombo("--rl/--min combine only with --jurisdiction")
        if not args.jurisdiction:
            raise UnknownFlagCombo("--rl/--min need --jurisdiction")
    elif not args.product:
        raise UnknownFlagCombo(
            "choose a construct: --product [...] or --jurisdiction with --rl/--min"
        )

    catalog, _ = _load_validated(args.catalog)
    if args.rl:
        result = jurisdiction_rl(catalog, args.jurisdiction)
    elif args.min:
        result = rl_min(catalog, args.jurisdiction)
    elif args.jurisdiction:
        result = requirements_for(catalog, args.product, args.jurisdiction, args.kind)
    else:
        members: set[str] = set()
        for jurisdiction in catalog.jurisdictions:
            members |= requirements_for(
                catalog, args.product, jurisdiction.id, args.kind
            ).members
        result = RequirementSet.of(members)
    _print_set(result, args)
    return EXIT_OK


def cmd_optimize(args: argparse.Namespace) -> int:
    catalog, graph = _load_validated(args.catalog)
    if args.jurisdiction:
        base = jurisdiction_rl(catalog, args.jurisdiction)
        kept = strongest_rl(catalog, graph, args.jurisdiction)
    elif args.product:
        base = product_union(catalog, args.product)
        kept = strongest_product(catalog, graph, args.product)
    else:
        members: set[str] = set()
        for product in catalog.products:
            members |= product_union(catalog, product.id).members
        base = RequirementSet.of(members)
        kept = strongest_global(catalog, graph)

    removed = [
        (dropped, min(q for q in kept if is_weaker(graph, dropped, q)))
        for dropped in base - kept
    ]
    if args.json:
        _emit_json(
            {
                "kept": list(kept),
                "removed": [{"id": rid, "dominated_by": witness} for rid, witness in removed],
            }
        )
    else:
        for requirement_id in kept:
            print(requirement_id)
        print("removed:")
        for rid, witness in removed:
            print(f"  {rid} (dominated by {witness})")
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    catalog, _ = _load_validated(args.catalog)
    case = classify_overlap(catalog)
    if args.json:
        _emit_json(
            {
                "case": case.case.value,
                "core_size": case.core_size,
                "per_jurisdiction_sizes": dict(case.per_jurisdiction_sizes),
                "recommendation": case.recommendation,
            }
        )
    else:
        print(f"case: {case.case.value}")
        print(f"core_size: {case.core_size}")
        for jid, size in case.per_jurisdiction_sizes.items():
            print(f"complement[{jid}]: {size}")
        print(f"recommendation: {case.recommendation}")
    return EXIT_OK


def cmd_impact(args: argparse.Namespace) -> int:
    catalog, _ = _load_validated(args.catalog)
    report = change_impact(catalog, args.regulation)
    if args.json:
        _emit_json(
            {
                "regulation": report.regulation,
                "in_core": report.in_core,
                "scope": report.scope.value,
                "jurisdictions": list(report.jurisdictions),
                "affected_requirements": list(report.affected_requirements),
                "affected_products": list(report.affected_products),
            }
        )
    else:
        print(f"regulation: {report.regulation}")
        print(f"in_core: {'yes' if report.in_core else 'no'}")
        scope = report.scope.value
        if report.jurisdictions:
            scope += " (" + ", ".join(report.jurisdictions) + ")"
        print(f"scope: {scope}")
        requirements = ", ".join(report.affected_requirements) or "(none)"
        products = ", ".join(report.affected_products) or "(none)"
        print(f"affected_requirements: {requirements}")
        print(f"affected_products: {products}")
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    catalog, graph = _load_validated(args.catalog)
    view = catalog_io.build_view(catalog, graph, args.view, args.focus)
    Path(args.out).write_bytes(catalog_io.render_dot(view).encode("utf-8"))
    if args.json:
        _emit_json({"out": args.out, "nodes": len(view.nodes), "edges": len(view.edges)})
    else:
        print(f"nodes: {len(view.nodes)}")
        print(f"edges: {len(view.edges)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reqlattice",
        description="Set algebra and analysis over multi-jurisdiction requirement catalogs.",
    )
    parser.add_argument(
        "--json", action="store_true", help="emit a single JSON document on stdout"
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("catalog", help="path to a .reqcat.json catalog file")
    # SUPPRESS keeps a pre-subcommand --json from being clobbered by the
    # subparser's default.
    common.add_argument(
        "--json",
        action="store_true",
        default=argparse.SUPPRESS,
        help="emit a single JSON document on stdout",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check catalog invariants")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("sets", parents=[common], help="list one requirement-set construct")
    p.add_argument("--product", metavar="ID", help="projection or per-product union")
    p.add_argument("--jurisdiction", metavar="ID")
    p.add_argument("--kind", choices=["rl", "rfn"], help="restrict projection by kind")
    p.add_argument("--rl", action="store_true", help="the jurisdiction's requirements over all products")
    p.add_argument("--min", action="store_true", help="requirements demanded of every product")
    p.set_defaults(func=cmd_sets)

    p = sub.add_parser("optimize", parents=[common], help="strongest set for a scope")
    scope = p.add_mutually_exclusive_group(required=True)
    scope.add_argument("--jurisdiction", metavar="ID")
    scope.add_argument("--product", metavar="ID")
    scope.add_argument("--global", dest="global_scope", action="store_true")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("classify", parents=[common], help="regulation-overlap case")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("impact", parents=[common], help="trace a regulation change")
    p.add_argument("--regulation", metavar="ID", required=True)
    p.set_defaults(func=cmd_impact)

    p = sub.add_parser("export", parents=[common], help="write a dependency view as .dot")
    p.add_argument("--view", choices=[k.value for k in catalog_io.ViewKind], required=True)
    p.add_argument("--focus", metavar="ID")
    p.add_argument("--out", metavar="PATH", required=True)
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Refused as refused:
        for issue in refused.report.errors:
            _print_issue(issue, sys.stderr)
        print("refusing to analyse a catalog with validation errors", file=sys.stderr)
        return EXIT_INVALID
    except (
        ParseError,
        SchemaError,
        UnknownIdError,
        EmptyCatalogError,
        FocusRequiredError,
        FocusForbiddenError,
        UnknownFlagCombo,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
