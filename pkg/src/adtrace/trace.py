"""Trace graph across assurance artifacts and model objects, completeness
rules, ISO-process coverage and guideword prompt generation."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from types import MappingProxyType
from typing import Iterable, Mapping

from .errors import ParseError, TraceBuildError
from .findings import Finding, error, sort_findings
from .model import ArtifactKind, Model, TraceKind, derive_system_context
from .ontology import Ontology
from .profile import Profile


class Process15288(enum.Enum):
    BUSINESS_MISSION_ANALYSIS = "BusinessMissionAnalysis"
    STAKEHOLDER_NEEDS_AND_REQUIREMENTS = "StakeholderNeedsAndRequirements"
    SYSTEM_REQUIREMENTS_DEFINITION = "SystemRequirementsDefinition"
    SYSTEM_ARCHITECTURE_DEFINITION = "SystemArchitectureDefinition"
    SYSTEM_DESIGN_DEFINITION = "SystemDesignDefinition"
    RISK_MANAGEMENT = "RiskManagement"


_SNR = Process15288.STAKEHOLDER_NEEDS_AND_REQUIREMENTS
_SRD = Process15288.SYSTEM_REQUIREMENTS_DEFINITION
_SAD = Process15288.SYSTEM_ARCHITECTURE_DEFINITION
_SDD = Process15288.SYSTEM_DESIGN_DEFINITION
_RM = Process15288.RISK_MANAGEMENT

DEFAULT_STANDARDS_MAP: Mapping[ArtifactKind, Process15288] = MappingProxyType(
    {
        ArtifactKind.STAKEHOLDER_NEED: _SNR,
        ArtifactKind.NORMATIVE_STAKEHOLDER_REQUIREMENT: _SNR,
        ArtifactKind.USE_CASE: _SNR,
        ArtifactKind.OPERATIONAL_SCENARIO: _SNR,
        ArtifactKind.ODD_STATEMENT: _SNR,
        ArtifactKind.VEHICLE_BEHAVIOR_ASSUMPTION: _SNR,
        ArtifactKind.ITEM_INTERFACE: _SNR,
        ArtifactKind.ACTUATOR_POTENTIAL: _SRD,
        ArtifactKind.PERFORMANCE_TARGET: _SRD,
        ArtifactKind.PRELIMINARY_FUNCTIONAL_REQUIREMENT: _SRD,
        ArtifactKind.FUNCTIONAL_ARCHITECTURE: _SAD,
        ArtifactKind.TECHNICAL_ARCHITECTURE: _SAD,
        ArtifactKind.FUNCTIONAL_DESIGN: _SDD,
        ArtifactKind.TECHNICAL_DESIGN: _SDD,
        ArtifactKind.HAZARD: _RM,
        ArtifactKind.RISK_ACCEPTANCE_CRITERION: _RM,
        ArtifactKind.SAFETY_GOAL: _RM,
        ArtifactKind.SAFETY_REQUIREMENT: _RM,
    }
)


@dataclass(frozen=True)
class StandardsMap:
    entries: Mapping[ArtifactKind, Process15288] = DEFAULT_STANDARDS_MAP

    def kinds_for(self, process: Process15288) -> list[ArtifactKind]:
        return sorted(
            (k for k, p in self.entries.items() if p is process), key=lambda k: k.value
        )


def parse_standards_map(source: str, file: str | None = None) -> StandardsMap:
    """`KIND -> PROCESS` per line, `#` comments; unknown names are rejected
    with their position. Entries override the default table."""
    kinds = {k.value: k for k in ArtifactKind}
    processes = {p.value: p for p in Process15288}
    entries = dict(DEFAULT_STANDARDS_MAP)
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" not in line:
            raise ParseError("expected 'KIND -> PROCESS'", file, lineno, 1)
        kind_name, _, process_name = (part.strip() for part in line.partition("->"))
        if kind_name not in kinds:
            raise ParseError(f"unknown artifact kind '{kind_name}'", file, lineno, 1)
        if process_name not in processes:
            raise ParseError(
                f"unknown process '{process_name}'", file, lineno, raw.index(process_name) + 1
            )
        entries[kinds[kind_name]] = processes[process_name]
    return StandardsMap(MappingProxyType(entries))


@dataclass(frozen=True)
class TraceNode:
    id: str
    kind: ArtifactKind | None  # None for plain model objects
    category: str  # artifact | scenario | usecase | interaction | element


@dataclass(frozen=True)
class TraceEdge:
    id: str
    kind: TraceKind
    source: str
    target: str


@dataclass(frozen=True)
class TraceGraph:
    nodes: tuple[TraceNode, ...] = ()  # sorted by id
    edges: tuple[TraceEdge, ...] = ()  # sorted by id

    def node_ids(self) -> set[str]:
        return {n.id for n in self.nodes}


def build_trace_graph(models: Iterable[Model]) -> TraceGraph:
    """One node per artifact, scenario, use case, interaction and
    trace-endpoint element; one edge per trace declaration."""
    nodes: dict[str, TraceNode] = {}
    edges: list[TraceEdge] = []

    def add_node(node: TraceNode) -> None:
        if node.id in nodes:
            raise TraceBuildError(f"duplicate trace node id {node.id}")
        nodes[node.id] = node

    model_list = list(models)
    for m in model_list:
        for art in m.artifacts:
            add_node(TraceNode(art.id, art.kind, "artifact"))
        for sc in m.scenarios:
            add_node(TraceNode(sc.id, ArtifactKind.OPERATIONAL_SCENARIO, "scenario"))
        for uc in m.use_cases:
            add_node(TraceNode(uc.id, ArtifactKind.USE_CASE, "usecase"))
        for ia in m.interactions:
            add_node(TraceNode(ia.id, None, "interaction"))

    elements: set[str] = set()
    for m in model_list:
        elements.update(el.id for el in m.elements)

    seen_pairs: set[tuple[str, str]] = set()
    for m in model_list:
        for tr in m.traces:
            for endpoint in (tr.source, tr.target):
                if endpoint not in nodes:
                    if endpoint in elements:
                        nodes[endpoint] = TraceNode(endpoint, None, "element")
                    else:
                        raise TraceBuildError(
                            f"trace {tr.id} references unknown id {endpoint}"
                        )
            if tr.source == tr.target:
                raise TraceBuildError(f"trace {tr.id} is a self loop on {tr.source}")
            pair = (tr.source, tr.target)
            if pair in seen_pairs:
                raise TraceBuildError(
                    f"trace {tr.id} duplicates the edge {tr.source} -> {tr.target}"
                )
            seen_pairs.add(pair)
            edges.append(TraceEdge(tr.id, tr.kind, tr.source, tr.target))

    return TraceGraph(
        nodes=tuple(sorted(nodes.values(), key=lambda n: n.id)),
        edges=tuple(sorted(edges, key=lambda e: e.id)),
    )


# Trace completeness rules. TRC001 follows only mitigates/derives_from edges;
# the others follow edges of any kind.
_CHAIN_KINDS = frozenset({TraceKind.MITIGATES, TraceKind.DERIVES_FROM})

_RULES: tuple[tuple[str, ArtifactKind, ArtifactKind, frozenset[TraceKind] | None, str], ...] = (
    ("TRC001", ArtifactKind.SAFETY_REQUIREMENT, ArtifactKind.HAZARD, _CHAIN_KINDS,
     "does not reach a Hazard via mitigates/derives_from edges"),
    ("TRC002", ArtifactKind.HAZARD, ArtifactKind.OPERATIONAL_SCENARIO, None,
     "does not reach an OperationalScenario"),
    ("TRC003", ArtifactKind.OPERATIONAL_SCENARIO, ArtifactKind.USE_CASE, None,
     "is not subsumed by a UseCase"),
    ("TRC004", ArtifactKind.USE_CASE, ArtifactKind.STAKEHOLDER_NEED, None,
     "does not reach a StakeholderNeed"),
    ("TRC006", ArtifactKind.RISK_ACCEPTANCE_CRITERION, ArtifactKind.STAKEHOLDER_NEED, None,
     "does not reach a StakeholderNeed"),
)

ORPHAN_RULE = "TRC005"
ALL_RULE_CODES = ("TRC001", "TRC002", "TRC003", "TRC004", "TRC005", "TRC006")


@dataclass(frozen=True)
class RuleSet:
    enabled: frozenset[str] = frozenset(ALL_RULE_CODES)

    def is_enabled(self, code: str) -> bool:
        return code in self.enabled


def parse_rules(source: str, file: str | None = None) -> RuleSet:
    """`CODE on|off` per line, `#` comments; all rules default to on."""
    enabled = set(ALL_RULE_CODES)
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2 or parts[1] not in ("on", "off"):
            raise ParseError("expected 'CODE on|off'", file, lineno, 1)
        code, state = parts
        if code not in ALL_RULE_CODES:
            raise ParseError(f"unknown rule code '{code}'", file, lineno, 1)
        if state == "on":
            enabled.add(code)
        else:
            enabled.discard(code)
    return RuleSet(frozenset(enabled))


def _reachable(g: TraceGraph, start: str, kinds: frozenset[TraceKind] | None) -> set[str]:
    adjacency: dict[str, list[str]] = {}
    for edge in g.edges:
        if kinds is None or edge.kind in kinds:
            adjacency.setdefault(edge.source, []).append(edge.target)
    seen = {start}
    stack = [start]
    while stack:
        for nxt in adjacency.get(stack.pop(), ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def check_trace_completeness(g: TraceGraph, rules: RuleSet | None = None) -> list[Finding]:
    """Reachability findings per the enabled rules; [] iff all chains close."""
    rules = rules or RuleSet()
    findings: list[Finding] = []
    by_kind: dict[ArtifactKind, list[TraceNode]] = {}
    for node in g.nodes:
        if node.kind is not None:
            by_kind.setdefault(node.kind, []).append(node)

    for code, from_kind, to_kind, edge_kinds, message in _RULES:
        if not rules.is_enabled(code):
            continue
        for node in by_kind.get(from_kind, ()):
            reached = _reachable(g, node.id, edge_kinds)
            if not any(
                other.id in reached and other.id != node.id
                for other in by_kind.get(to_kind, ())
            ):
                findings.append(
                    error(code, node.id, f"{from_kind.value} {node.id} {message}")
                )
    return sort_findings(findings)


def detect_orphans(g: TraceGraph) -> list[str]:
    """Node ids with no incident trace edge, sorted."""
    touched: set[str] = set()
    for edge in g.edges:
        touched.add(edge.source)
        touched.add(edge.target)
    return sorted(n.id for n in g.nodes if n.id not in touched)


@dataclass(frozen=True)
class ProcessCoverage:
    process: Process15288
    present: tuple[ArtifactKind, ...]
    absent: tuple[ArtifactKind, ...]
    status: str  # covered | partial | empty | unmapped


@dataclass(frozen=True)
class CoverageReport:
    entries: tuple[ProcessCoverage, ...]  # in Process15288 enumeration order
    kinds_present: tuple[ArtifactKind, ...]

    def entry_for(self, process: Process15288) -> ProcessCoverage:
        for entry in self.entries:
            if entry.process is process:
                return entry
        raise KeyError(process.value)


def process_coverage(g: TraceGraph, standards: StandardsMap | None = None) -> CoverageReport:
    """Presence of mapped artifact kinds per process; depends only on the
    kinds present in the graph, never on its edges."""
    standards = standards or StandardsMap()
    present_kinds = {node.kind for node in g.nodes if node.kind is not None}
    entries: list[ProcessCoverage] = []
    for process in Process15288:
        mapped = standards.kinds_for(process)
        present = tuple(k for k in mapped if k in present_kinds)
        absent = tuple(k for k in mapped if k not in present_kinds)
        if not mapped:
            status = "unmapped"
        elif not present:
            status = "empty"
        elif not absent:
            status = "covered"
        else:
            status = "partial"
        entries.append(ProcessCoverage(process, present, absent, status))
    return CoverageReport(
        entries=tuple(entries),
        kinds_present=tuple(sorted(present_kinds, key=lambda k: k.value)),
    )


def guideword_candidates(
    m: Model,
    scenario_id: str,
    guidewords: list[str],
    p: Profile,
    o: Ontology,
) -> list[tuple[str, str, str]]:
    """Cartesian product of derived-context elements (plus the ego's target
    behaviors) with the guidewords, rendered as reviewable prompt lines."""
    scenario = m.scenario_by_id(scenario_id)
    if scenario is None:
        raise KeyError(scenario_id)
    subjects = set(derive_system_context(m, scenario_id, p, o))
    for agent, behavior in scenario.target_behaviors:
        if agent == scenario.ego:
            subjects.add(behavior)
    prompts: list[tuple[str, str, str]] = []
    for subject in sorted(subjects):
        for word in guidewords:
            prompts.append((subject, word, f"{subject} × '{word}'"))
    return prompts
