"""Command-line driver.

Subcommands mirror the processing pipeline: ``transform`` runs the rules,
``validate`` checks a constraint catalog, ``pipeline`` chains source
validation, transformation, target validation and cross validation, and
``lint-assets`` checks the packaged case-study data.

Exit codes: 0 = success and no violations, 1 = violations found,
2 = usage, parse or runtime error.  Reports go to stdout, diagnostics and
statistics to stderr.
"""

from __future__ import annotations

import argparse
import sys
from typing import Dict, List, Optional

from . import assets
from .engine import TransformResult, apply_rules
from .formats import ParseError, load_model, serialize_ntriples
from .graph import Graph
from .lang import parse_constraints, parse_rules
from .validate import ValidationError, ValidationReport, check_catalog, format_lines, format_text

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_ERROR = 2


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _parse_prefixes(pairs: Optional[List[str]]) -> Dict[str, str]:
    prefixes = dict(assets.PREFIXES)
    for pair in pairs or []:
        if "=" not in pair:
            raise ValueError(f"bad --prefix (expected p=iri): {pair}")
        p, iri = pair.split("=", 1)
        prefixes[p] = iri
    return prefixes


def _print_stats(result: TransformResult):
    print(
        "transform: %d rule firings, %d triples produced, %d duplicates collapsed, %d target triples"
        % (
            result.rules_fired,
            result.triples_produced,
            result.duplicates_collapsed,
            len(result.target),
        ),
        file=sys.stderr,
    )
    for w in result.warnings:
        print(f"warning: {w}", file=sys.stderr)


def _write_target(result: TransformResult, out_path: str, with_tbox: bool):
    text = serialize_ntriples(result.target)
    if with_tbox:
        tbox = assets.asset_text("target_mm.nt")
        text = text + tbox
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(text)


def cmd_transform(args) -> int:
    source = load_model(args.source)
    rules = parse_rules(_read(args.rules))
    result = apply_rules(source, rules)
    _print_stats(result)
    _write_target(result, args.out, args.with_tbox)
    return EXIT_OK


def _emit_reports(args, reports: List[ValidationReport], prefixes: Dict[str, str]):
    for report in reports:
        if args.format == "lines":
            sys.stdout.write(format_lines(report))
        else:
            sys.stdout.write(format_text(report, prefixes))
    if getattr(args, "figure", None):
        from .figures import save_violation_chart

        save_violation_chart(reports, args.figure)


def cmd_validate(args) -> int:
    prefixes = _parse_prefixes(args.prefix)
    catalog = parse_constraints(_read(args.constraints))
    model = load_model(args.model)
    target = load_model(args.target) if args.target else None
    if args.phase in ("cross", "all") and target is None:
        raise ValidationError(f"--target is required for phase={args.phase}")

    phases = ["source", "target", "cross"] if args.phase == "all" else [args.phase]
    reports: List[ValidationReport] = []
    for phase in phases:
        if phase == "source":
            reports.append(check_catalog(model, target, catalog, "source"))
        elif phase == "target":
            # a lone model file may itself be the target under test
            tgt = target if target is not None else model
            reports.append(check_catalog(model, tgt, catalog, "target"))
        else:
            if target is None:
                raise ValidationError("--target is required for phase=cross")
            reports.append(check_catalog(model, target, catalog, "cross"))
    _emit_reports(args, reports, prefixes)
    return EXIT_VIOLATIONS if any(r.violations for r in reports) else EXIT_OK


def cmd_pipeline(args) -> int:
    prefixes = _parse_prefixes(args.prefix)
    source = load_model(args.source)
    rules = parse_rules(_read(args.rules))
    catalog = parse_constraints(_read(args.constraints))

    source_report = check_catalog(source, None, catalog, "source")
    if source_report.violations and not args.force:
        _emit_reports(args, [source_report], prefixes)
        print("pipeline: source validation failed, not transforming", file=sys.stderr)
        return EXIT_VIOLATIONS

    result = apply_rules(source, rules)
    _print_stats(result)
    target_report = check_catalog(source, result.target, catalog, "target")
    cross_report = check_catalog(source, result.target, catalog, "cross")
    _write_target(result, args.out, args.with_tbox)
    reports = [source_report, target_report, cross_report]
    _emit_reports(args, reports, prefixes)
    return EXIT_VIOLATIONS if any(r.violations for r in reports) else EXIT_OK


def cmd_lint_assets(args) -> int:
    findings = assets.lint_assets()
    for finding in findings:
        print(finding)
    print(f"lint-assets: {len(findings)} finding(s)")
    return EXIT_VIOLATIONS if findings else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="triplemorph",
        description="Transform and validate triple-graph models with declarative rules.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="apply transformation rules to a source model")
    p.add_argument("source", help="source model (.nt or .ttl)")
    p.add_argument("rules", help="rule file (.mtr)")
    p.add_argument("-o", "--out", required=True, help="output target model (.nt)")
    p.add_argument("--with-tbox", action="store_true", help="append the target vocabulary")
    p.add_argument("--prefix", action="append", metavar="P=IRI")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("validate", help="check a constraint catalog against models")
    p.add_argument("model", help="model file (source model, or target for --phase target)")
    p.add_argument("-c", "--constraints", required=True, help="constraint file (.mtc)")
    p.add_argument("--phase", choices=["source", "target", "cross", "all"], default="all")
    p.add_argument("--target", help="target model file (required for cross/all)")
    p.add_argument("--format", choices=["text", "lines"], default="text")
    p.add_argument("--figure", help="write a violations bar chart to this image file")
    p.add_argument("--prefix", action="append", metavar="P=IRI")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("pipeline", help="validate source, transform, validate target and cross")
    p.add_argument("source")
    p.add_argument("rules")
    p.add_argument("constraints")
    p.add_argument("-o", "--out", required=True)
    p.add_argument("--force", action="store_true", help="transform even if the source is invalid")
    p.add_argument("--with-tbox", action="store_true")
    p.add_argument("--format", choices=["text", "lines"], default="text")
    p.add_argument("--figure", help="write a violations bar chart to this image file")
    p.add_argument("--prefix", action="append", metavar="P=IRI")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("lint-assets", help="check the packaged case-study assets")
    p.set_defaults(func=cmd_lint_assets)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValidationError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
