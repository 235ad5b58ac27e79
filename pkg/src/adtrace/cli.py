"""Command-line entry point.

Exit codes: 0 no error findings, 1 error findings present, 2 parse failure,
3 usage error (unknown flags, unreadable files).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .emit import emit_context_dot, emit_report, emit_sequence_text, emit_usecase_dot, finding_line
from .errors import GenerationError, ParseError, ResolutionError, TraceBuildError
from .findings import Finding, error, has_errors, sort_findings
from .profile import GenerationRules, generate_profile
from .serialize import serialize_profile
from .trace import (
    ORPHAN_RULE,
    RuleSet,
    StandardsMap,
    build_trace_graph,
    check_trace_completeness,
    detect_orphans,
    parse_rules,
    parse_standards_map,
    process_coverage,
)
from .workspace import Workspace, load_workspace, validate_workspace

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_PARSE = 2
EXIT_USAGE = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adtrace",
        description="Validate ontologies, profiles and models; check traces; "
        "report standards coverage; emit diagrams.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    validate = sub.add_parser("validate", help="ontology, profile and model checks")
    validate.add_argument("files", nargs="+")
    validate.add_argument("--format", choices=("json", "text"), default="text")

    gen = sub.add_parser("profile-gen", help="generate a profile from the ontology")
    gen.add_argument("files", nargs="+")
    gen.add_argument("--ontology", required=True, metavar="NAME")
    gen.add_argument("-o", "--out", metavar="FILE")

    trace = sub.add_parser("trace-check", help="trace completeness over all models")
    trace.add_argument("files", nargs="+")
    trace.add_argument("--rules", metavar="FILE")

    coverage = sub.add_parser("coverage", help="ISO process coverage report")
    coverage.add_argument("files", nargs="+")
    coverage.add_argument("--map", dest="map_file", metavar="FILE")
    coverage.add_argument("--format", choices=("json", "markdown", "text"), default="text")

    emit = sub.add_parser("emit", help="emit a diagram as text")
    emit.add_argument("files", nargs="+")
    emit.add_argument("--diagram", choices=("usecase", "context", "sequence"), required=True)
    emit.add_argument("--id", required=True, dest="target_id")
    emit.add_argument("-o", "--out", metavar="FILE")
    return parser


def _load(file_args: list[str]) -> Workspace:
    sources: list[tuple[str, str | None]] = []
    for path in file_args:
        sources.append((Path(path).read_text(encoding="utf-8"), path))
    return load_workspace(sources)


def _write_output(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(out).write_text(text, encoding="utf-8")


def _print_findings(findings: list[Finding], fmt: str) -> None:
    rendered = emit_report(findings, fmt)
    if rendered or fmt == "json":
        print(rendered)


def _cmd_validate(args: argparse.Namespace) -> int:
    ws = _load(args.files)
    findings = validate_workspace(ws)
    _print_findings(findings, args.format)
    return EXIT_FINDINGS if has_errors(findings) else EXIT_OK


def _cmd_profile_gen(args: argparse.Namespace) -> int:
    ws = _load(args.files)
    findings = validate_workspace(ws)
    if has_errors(findings):
        for f in findings:
            print(finding_line(f), file=sys.stderr)
        return EXIT_FINDINGS
    rules = GenerationRules(
        profile_name=f"{args.ontology}_profile", ontology_ref=args.ontology
    )
    try:
        profile = generate_profile(ws.ontology, rules)
    except GenerationError as exc:
        print(f"adtrace: profile-gen: {exc}", file=sys.stderr)
        return EXIT_FINDINGS
    _write_output(serialize_profile(profile), args.out)
    return EXIT_OK


def _trace_findings(ws: Workspace, rules: RuleSet) -> list[Finding]:
    graph = build_trace_graph(list(ws.models))
    findings = check_trace_completeness(graph, rules)
    if rules.is_enabled(ORPHAN_RULE):
        for node_id in detect_orphans(graph):
            findings.append(
                error(ORPHAN_RULE, node_id, f"{node_id} has no incident trace link")
            )
    return sort_findings(findings)


def _cmd_trace_check(args: argparse.Namespace) -> int:
    ws = _load(args.files)
    rules = RuleSet()
    if args.rules:
        rules = parse_rules(Path(args.rules).read_text(encoding="utf-8"), args.rules)
    try:
        findings = _trace_findings(ws, rules)
    except TraceBuildError as exc:
        print(f"adtrace: trace-check: {exc}", file=sys.stderr)
        return EXIT_FINDINGS
    _print_findings(findings, "text")
    return EXIT_FINDINGS if has_errors(findings) else EXIT_OK


def _cmd_coverage(args: argparse.Namespace) -> int:
    ws = _load(args.files)
    standards = StandardsMap()
    if args.map_file:
        standards = parse_standards_map(
            Path(args.map_file).read_text(encoding="utf-8"), args.map_file
        )
    try:
        graph = build_trace_graph(list(ws.models))
    except TraceBuildError as exc:
        print(f"adtrace: coverage: {exc}", file=sys.stderr)
        return EXIT_FINDINGS
    print(emit_report(process_coverage(graph, standards), args.format))
    return EXIT_OK


def _cmd_emit(args: argparse.Namespace) -> int:
    ws = _load(args.files)
    target = args.target_id
    for m in ws.models:
        if args.diagram == "usecase" and m.usecase_by_id(target):
            _write_output(emit_usecase_dot(m, target), args.out)
            return EXIT_OK
        if args.diagram == "sequence" and m.interaction_by_id(target):
            _write_output(emit_sequence_text(m, target), args.out)
            return EXIT_OK
        if args.diagram == "context" and m.scenario_by_id(target):
            profile = ws.profile_by_name(m.profile_ref)
            if profile is None:
                print(
                    f"adtrace: emit: model {m.id} uses unknown profile {m.profile_ref}",
                    file=sys.stderr,
                )
                return EXIT_FINDINGS
            _write_output(emit_context_dot(m, target, profile, ws.ontology), args.out)
            return EXIT_OK
    print(f"adtrace: emit: no {args.diagram} named {target}", file=sys.stderr)
    return EXIT_FINDINGS


_COMMANDS = {
    "validate": _cmd_validate,
    "profile-gen": _cmd_profile_gen,
    "trace-check": _cmd_trace_check,
    "coverage": _cmd_coverage,
    "emit": _cmd_emit,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"adtrace: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ResolutionError as exc:
        print(f"adtrace: {exc}", file=sys.stderr)
        return EXIT_FINDINGS
    except OSError as exc:
        print(f"adtrace: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
