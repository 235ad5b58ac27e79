"""A workspace is the union of all blocks parsed from the files on the
command line: one merged ontology plus the declared profiles and models."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .findings import Finding, error, has_errors, sort_findings
from .model import Model, check_conformance, check_scenario_wellformed
from .ontology import Ontology, merge_ontologies, validate_ontology
from .parser import parse_document
from .profile import Profile, check_profile


@dataclass(frozen=True)
class Workspace:
    ontology: Ontology
    profiles: tuple[Profile, ...] = ()
    models: tuple[Model, ...] = ()

    def profile_by_name(self, name: str) -> Profile | None:
        for p in self.profiles:
            if p.name == name:
                return p
        return None


def load_workspace(sources: list[tuple[str, str | None]]) -> Workspace:
    """Parse (text, filename) pairs into one merged workspace."""
    ontologies: list[Ontology] = []
    profiles: list[Profile] = []
    models: list[Model] = []
    for text, name in sources:
        doc = parse_document(text, name)
        ontologies.append(doc.ontology)
        profiles.extend(doc.profiles)
        models.extend(doc.models)
    return Workspace(merge_ontologies(ontologies), tuple(profiles), tuple(models))


def load_workspace_files(paths: list[str | Path]) -> Workspace:
    return load_workspace([(Path(p).read_text(encoding="utf-8"), str(p)) for p in paths])


def _structure_findings(ws: Workspace) -> list[Finding]:
    """WSP001 duplicate top-level names, WSP002 unresolved uses references."""
    findings: list[Finding] = []
    seen: set[str] = set()
    for p in ws.profiles:
        if p.name in seen:
            findings.append(error("WSP001", p.name, f"profile {p.name} declared twice"))
        seen.add(p.name)
    seen = set()
    for m in ws.models:
        if m.id in seen:
            findings.append(error("WSP001", m.id, f"model {m.id} declared twice"))
        seen.add(m.id)

    namespaces = set(ws.ontology.namespaces)
    profile_names = {p.name for p in ws.profiles}
    for p in ws.profiles:
        if p.ontology_ref not in namespaces:
            findings.append(
                error("WSP002", p.name, f"profile {p.name} uses unknown ontology {p.ontology_ref}")
            )
    for m in ws.models:
        if m.profile_ref not in profile_names:
            findings.append(
                error("WSP002", m.id, f"model {m.id} uses unknown profile {m.profile_ref}")
            )
    return findings


def validate_workspace(ws: Workspace) -> list[Finding]:
    """Ontology, profile and model checks, staged: later stages only run when
    the earlier ones produced no error findings (their preconditions)."""
    findings = validate_ontology(ws.ontology) + _structure_findings(ws)
    if has_errors(findings):
        return sort_findings(findings)

    for p in ws.profiles:
        findings += check_profile(p, ws.ontology)
    if has_errors(findings):
        return sort_findings(findings)

    workspace_ids = frozenset(
        ident for m in ws.models for ident, _kind, _pos in m.all_ids()
    )
    for m in ws.models:
        p = ws.profile_by_name(m.profile_ref)
        if p is None:
            continue
        findings += check_conformance(m, p, ws.ontology, workspace_ids)
        for sc in m.scenarios:
            findings += check_scenario_wellformed(m, sc.id, p, ws.ontology)
    return sort_findings(findings)
