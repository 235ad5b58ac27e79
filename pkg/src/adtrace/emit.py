"""Renderers: DOT diagrams, sequence text and machine/human-readable reports.

All emitters are pure functions of their immutable inputs; two structurally
equal models yield byte-identical output.
"""

from __future__ import annotations

import json

from .errors import ResolutionError
from .findings import Finding, Severity
from .model import Model, derive_system_context
from .ontology import Ontology, RelationKind
from .profile import Profile, RelationRef
from .trace import CoverageReport

_UNMAPPED_TEXT = "no artifact kinds mapped"


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _dot_label(*parts: str) -> str:
    """Quoted label whose parts are separated by DOT's \\n line-break escape."""
    escaped = (p.replace("\\", "\\\\").replace('"', '\\"') for p in parts)
    return '"' + "\\n".join(escaped) + '"'


def emit_context_dot(m: Model, scenario_id: str, p: Profile, o: Ontology) -> str:
    """Operational system context diagram: one node per context element plus
    the ego, whole-to-part decomposition edges with the filled-diamond
    convention; has_neighbor relations are not displayed."""
    scenario = m.scenario_by_id(scenario_id)
    if scenario is None:
        raise ResolutionError(f"unknown scenario {scenario_id}")
    context = derive_system_context(m, scenario_id, p, o)
    node_ids = sorted(set(context) | {scenario.ego})

    elements = m.element_index()
    stereotypes = p.stereotype_index()

    lines = ["digraph context {"]
    for node_id in node_ids:
        el = elements.get(node_id)
        stereo = el.stereotype if el else ""
        attrs = f"label={_dot_label(f'«{stereo}»', node_id)}"
        if node_id == scenario.ego:
            attrs += ", penwidth=2, style=bold"
        lines.append(f"  {_dot_quote(node_id)} [{attrs}];")

    edges: list[tuple[str, str, str | None]] = []
    in_diagram = set(node_ids)
    for rel in m.rels:
        st = stereotypes.get(rel.via)
        if st is None or not isinstance(st.traces_to, RelationRef):
            continue
        decl = o.relation_by_id(st.traces_to.id)
        if decl is None:
            continue
        if decl.kind is RelationKind.CONSISTS_OF:
            whole, part = rel.source, rel.target
        elif decl.kind is RelationKind.PART_OF:
            whole, part = rel.target, rel.source
        else:
            continue  # has_neighbor and friends are not displayed
        if whole in in_diagram and part in in_diagram:
            edges.append((whole, part, str(decl.mult) if decl.mult else None))
    for whole, part, mult in sorted(set(edges)):
        attrs = "dir=both, arrowtail=diamond"
        if mult:
            attrs += f", label={_dot_quote(mult)}"
        lines.append(f"  {_dot_quote(whole)} -> {_dot_quote(part)} [{attrs}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_usecase_dot(m: Model, usecase_id: str) -> str:
    """Use case diagram: ellipse for the use case, undirected actor links and
    dashed traced_to edges to stakeholders."""
    uc = m.usecase_by_id(usecase_id)
    if uc is None:
        raise ResolutionError(f"unknown usecase {usecase_id}")
    lines = ["graph usecase {"]
    node_ids = sorted(set(uc.actors) | set(uc.stakeholder_traces) | {uc.id})
    for node_id in node_ids:
        attrs = f"label={_dot_quote(node_id)}"
        if node_id == uc.id:
            attrs += ", shape=ellipse"
        lines.append(f"  {_dot_quote(node_id)} [{attrs}];")
    for actor in uc.actors:
        lines.append(f"  {_dot_quote(uc.id)} -- {_dot_quote(actor)};")
    for stakeholder in uc.stakeholder_traces:
        lines.append(
            f"  {_dot_quote(uc.id)} -- {_dot_quote(stakeholder)} [label=traced_to, style=dashed];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_sequence_text(m: Model, interaction_id: str) -> str:
    """One message per line, lifelines listed in first-appearance order."""
    ia = m.interaction_by_id(interaction_id)
    if ia is None:
        raise ResolutionError(f"unknown interaction {interaction_id}")
    participants: list[str] = []
    for msg in ia.messages:
        for endpoint in (msg.source, msg.target):
            if endpoint not in participants:
                participants.append(endpoint)
    lines = ["participants: " + ", ".join(participants) if participants else "participants:"]
    for msg in ia.messages:
        lines.append(f"{msg.order}: {msg.source} -> {msg.target}: {msg.label}")
    return "\n".join(lines) + "\n"


def _finding_item(f: Finding) -> dict:
    position = None
    if f.position is not None:
        position = {"file": f.position.file, "line": f.position.line, "col": f.position.col}
    return {
        "code": f.code,
        "severity": f.severity.value,
        "subject": f.subject,
        "message": f.message,
        "position": position,
    }


def finding_line(f: Finding) -> str:
    line = f"{f.severity.value} {f.code} {f.subject}: {f.message}"
    if f.position is not None:
        line += f" [{f.position}]"
    return line


def _findings_sorted(findings: list[Finding]) -> list[Finding]:
    return sorted(findings, key=Finding.sort_key)


def _emit_findings(findings: list[Finding], fmt: str) -> str:
    ordered = _findings_sorted(findings)
    if fmt == "json":
        return json.dumps(
            {"version": 1, "items": [_finding_item(f) for f in ordered]},
            separators=(",", ":"),
        )
    if fmt == "text":
        return "\n".join(finding_line(f) for f in ordered)
    if fmt == "markdown":
        sections: list[str] = []
        titles = {Severity.ERROR: "Errors", Severity.WARNING: "Warnings", Severity.INFO: "Info"}
        for severity in (Severity.ERROR, Severity.WARNING, Severity.INFO):
            group = [f for f in ordered if f.severity is severity]
            if not group:
                continue
            rows = [f"## {titles[severity]}", "", "| Code | Subject | Message | Position |",
                    "| --- | --- | --- | --- |"]
            for f in group:
                pos = str(f.position) if f.position else ""
                rows.append(f"| {f.code} | {f.subject} | {f.message} | {pos} |")
            sections.append("\n".join(rows))
        return "\n\n".join(sections)
    raise ValueError(f"unknown report format {fmt!r}")


def _emit_coverage(report: CoverageReport, fmt: str) -> str:
    if fmt == "json":
        items = [
            {
                "process": e.process.value,
                "status": e.status,
                "present": [k.value for k in e.present],
                "absent": [k.value for k in e.absent],
            }
            for e in report.entries
        ]
        totals = {
            "covered": sum(e.status == "covered" for e in report.entries),
            "partial": sum(e.status == "partial" for e in report.entries),
            "empty": sum(e.status == "empty" for e in report.entries),
            "unmapped": sum(e.status == "unmapped" for e in report.entries),
            "kinds_present": len(report.kinds_present),
        }
        return json.dumps(
            {"version": 1, "items": items, "totals": totals}, separators=(",", ":")
        )
    if fmt == "text":
        lines = []
        for e in report.entries:
            if e.status == "unmapped":
                lines.append(f"{e.process.value}: {_UNMAPPED_TEXT}")
                continue
            present = ", ".join(k.value for k in e.present) or "-"
            absent = ", ".join(k.value for k in e.absent) or "-"
            lines.append(
                f"{e.process.value}: {e.status} (present: {present}; absent: {absent})"
            )
        return "\n".join(lines)
    if fmt == "markdown":
        rows = ["| Process | Status | Present | Absent |", "| --- | --- | --- | --- |"]
        for e in report.entries:
            status = _UNMAPPED_TEXT if e.status == "unmapped" else e.status
            present = ", ".join(k.value for k in e.present)
            absent = ", ".join(k.value for k in e.absent)
            rows.append(f"| {e.process.value} | {status} | {present} | {absent} |")
        return "\n".join(rows)
    raise ValueError(f"unknown report format {fmt!r}")


def emit_report(payload: list[Finding] | CoverageReport, fmt: str = "text") -> str:
    """Render findings or a coverage report as json, markdown or text."""
    if isinstance(payload, CoverageReport):
        return _emit_coverage(payload, fmt)
    return _emit_findings(payload, fmt)
