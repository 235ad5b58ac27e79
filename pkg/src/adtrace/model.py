"""Stereotype-typed model instances: elements, relation instances, scenarios,
use cases, interactions and assurance artifacts, plus the conformance and
well-formedness checks against a profile and its ontology."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import ResolutionError
from .findings import Finding, SourcePos, error, sort_findings, warning
from .ontology import (
    ConceptRef,
    Ontology,
    RelationDecl,
    RelationKind,
    ancestors,
    relation_licensed,
)
from .profile import ASSOCIATION_METACLASSES, Profile, RelationRef, Stereotype

# Concept anchors the scene/agent checks resolve against; checks are skipped
# when the companion ontology does not declare them.
SCENE_ENTITY_ANCHOR = ConceptRef("ad", "SceneEntity")
AGENT_ANCHOR = ConceptRef("ad", "Agent")


class ArtifactKind(enum.Enum):
    STAKEHOLDER_NEED = "StakeholderNeed"
    NORMATIVE_STAKEHOLDER_REQUIREMENT = "NormativeStakeholderRequirement"
    USE_CASE = "UseCase"
    OPERATIONAL_SCENARIO = "OperationalScenario"
    ODD_STATEMENT = "ODDStatement"
    VEHICLE_BEHAVIOR_ASSUMPTION = "VehicleBehaviorAssumption"
    ITEM_INTERFACE = "ItemInterface"
    ACTUATOR_POTENTIAL = "ActuatorPotential"
    PERFORMANCE_TARGET = "PerformanceTarget"
    PRELIMINARY_FUNCTIONAL_REQUIREMENT = "PreliminaryFunctionalRequirement"
    FUNCTIONAL_ARCHITECTURE = "FunctionalArchitecture"
    TECHNICAL_ARCHITECTURE = "TechnicalArchitecture"
    FUNCTIONAL_DESIGN = "FunctionalDesign"
    TECHNICAL_DESIGN = "TechnicalDesign"
    HAZARD = "Hazard"
    RISK_ACCEPTANCE_CRITERION = "RiskAcceptanceCriterion"
    SAFETY_GOAL = "SafetyGoal"
    SAFETY_REQUIREMENT = "SafetyRequirement"


class TraceKind(enum.Enum):
    SATISFIES = "satisfies"
    DERIVES_FROM = "derives_from"
    REFINES = "refines"
    MITIGATES = "mitigates"
    ADDRESSES = "addresses"
    TRACED_TO = "traced_to"


@dataclass(frozen=True)
class Element:
    id: str
    stereotype: str
    attrs: tuple[tuple[str, str], ...] = ()  # (name, value), sorted by name
    pos: SourcePos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class RelInstance:
    id: str
    via: str  # stereotype name; must extend an association metaclass
    source: str
    target: str
    pos: SourcePos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Scene:
    index: int
    entities: tuple[str, ...]  # sorted, duplicate-free


@dataclass(frozen=True)
class Scenario:
    id: str
    ego: str
    scenes: tuple[Scene, ...]
    target_behaviors: tuple[tuple[str, str], ...] = ()  # (agent id, behavior id)
    pos: SourcePos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class UseCaseDecl:
    id: str
    scenarios: tuple[str, ...] = ()  # sorted
    actors: tuple[str, ...] = ()  # sorted
    stakeholder_traces: tuple[str, ...] = ()  # sorted
    pos: SourcePos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Message:
    order: int
    source: str
    target: str
    label: str


@dataclass(frozen=True)
class Interaction:
    id: str
    scenario: str
    messages: tuple[Message, ...] = ()
    pos: SourcePos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class ArtifactDecl:
    id: str
    kind: ArtifactKind
    text: str | None = None
    pos: SourcePos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class TraceDecl:
    id: str
    kind: TraceKind
    source: str
    target: str
    pos: SourcePos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Model:
    id: str
    profile_ref: str
    elements: tuple[Element, ...] = ()
    rels: tuple[RelInstance, ...] = ()
    scenarios: tuple[Scenario, ...] = ()
    use_cases: tuple[UseCaseDecl, ...] = ()
    interactions: tuple[Interaction, ...] = ()
    artifacts: tuple[ArtifactDecl, ...] = ()
    traces: tuple[TraceDecl, ...] = ()

    def element_index(self) -> dict[str, Element]:
        index: dict[str, Element] = {}
        for el in self.elements:
            index.setdefault(el.id, el)
        return index

    def scenario_by_id(self, scenario_id: str) -> Scenario | None:
        for sc in self.scenarios:
            if sc.id == scenario_id:
                return sc
        return None

    def usecase_by_id(self, usecase_id: str) -> UseCaseDecl | None:
        for uc in self.use_cases:
            if uc.id == usecase_id:
                return uc
        return None

    def interaction_by_id(self, interaction_id: str) -> Interaction | None:
        for ia in self.interactions:
            if ia.id == interaction_id:
                return ia
        return None

    def all_ids(self) -> list[tuple[str, str, SourcePos | None]]:
        """(id, declaration kind, position) for every model-wide identifier."""
        out: list[tuple[str, str, SourcePos | None]] = []
        out += [(e.id, "element", e.pos) for e in self.elements]
        out += [(r.id, "rel", r.pos) for r in self.rels]
        out += [(s.id, "scenario", s.pos) for s in self.scenarios]
        out += [(u.id, "usecase", u.pos) for u in self.use_cases]
        out += [(i.id, "interaction", i.pos) for i in self.interactions]
        out += [(a.id, "artifact", a.pos) for a in self.artifacts]
        out += [(t.id, "trace", t.pos) for t in self.traces]
        return out


def element_concept(el: Element, p: Profile) -> ConceptRef | None:
    """The ontology concept an element is typed with, via its stereotype."""
    return p.traced_concept(el.stereotype)


def _traced_relation(st: Stereotype, o: Ontology) -> RelationDecl | None:
    if isinstance(st.traces_to, RelationRef):
        return o.relation_by_id(st.traces_to.id)
    return None


def derive_system_context(m: Model, scenario_id: str, p: Profile, o: Ontology) -> list[str]:
    """Union of all scene entities across the scenario minus the ego, closed
    under whole-to-part decomposition (part_of / consists_of instances);
    sorted lexicographically."""
    scenario = m.scenario_by_id(scenario_id)
    if scenario is None:
        raise ResolutionError(f"unknown scenario {scenario_id}")

    members: set[str] = set()
    for scene in scenario.scenes:
        members.update(scene.entities)
    members.discard(scenario.ego)

    # whole -> parts edges from decomposition instances
    parts: dict[str, set[str]] = {}
    stereotypes = p.stereotype_index()
    for rel in m.rels:
        st = stereotypes.get(rel.via)
        if st is None:
            continue
        decl = _traced_relation(st, o)
        if decl is None:
            continue
        if decl.kind is RelationKind.CONSISTS_OF:
            parts.setdefault(rel.source, set()).add(rel.target)
        elif decl.kind is RelationKind.PART_OF:
            parts.setdefault(rel.target, set()).add(rel.source)

    frontier = list(members)
    while frontier:
        for part in parts.get(frontier.pop(), ()):
            if part != scenario.ego and part not in members:
                members.add(part)
                frontier.append(part)
    return sorted(members)


def check_scenario_wellformed(
    m: Model, scenario_id: str, p: Profile, o: Ontology
) -> list[Finding]:
    """SCN001 scene indices not strictly increasing, SCN002 ego absent from a
    scene, SCN003 target behavior on a non-agent, SCN004 zero scenes."""
    scenario = m.scenario_by_id(scenario_id)
    if scenario is None:
        raise ResolutionError(f"unknown scenario {scenario_id}")

    findings: list[Finding] = []
    if not scenario.scenes:
        findings.append(error("SCN004", scenario.id, "scenario has no scenes", scenario.pos))

    previous: int | None = None
    for scene in scenario.scenes:
        if previous is not None and scene.index <= previous:
            findings.append(
                error("SCN001", scenario.id,
                      f"scene index {scene.index} does not increase after {previous}",
                      scenario.pos)
            )
        previous = scene.index
        if scenario.ego not in scene.entities:
            findings.append(
                error("SCN002", scenario.id,
                      f"ego {scenario.ego} missing from scene {scene.index}", scenario.pos)
            )

    if o.has_concept(AGENT_ANCHOR):
        elements = m.element_index()
        for agent_id, _behavior_id in scenario.target_behaviors:
            agent = elements.get(agent_id)
            if agent is None:
                continue  # unresolved ids are MOD007 territory
            concept = element_concept(agent, p)
            if concept is None or not o.has_concept(concept) or AGENT_ANCHOR not in ancestors(o, concept):
                findings.append(
                    error("SCN003", agent_id,
                          f"target behavior assigned to {agent_id}, which is not an agent",
                          scenario.pos)
                )
    return sort_findings(findings)


def _check_references(m: Model, workspace_ids: frozenset[str]) -> list[Finding]:
    """MOD007 unresolved id references, MOD008 duplicate model-wide ids.

    Trace endpoints may resolve against ids declared by sibling models in the
    same workspace (workspace_ids); everything else is model-local."""
    findings: list[Finding] = []

    seen: dict[str, str] = {}
    for ident, decl_kind, pos in m.all_ids():
        if ident in seen:
            findings.append(
                error("MOD008", ident,
                      f"id {ident} already declared as {seen[ident]}", pos)
            )
        else:
            seen[ident] = decl_kind

    elements = {e.id for e in m.elements}
    scenario_ids = {s.id for s in m.scenarios}

    def need_element(ident: str, where: str, pos: SourcePos | None) -> None:
        if ident not in elements:
            findings.append(error("MOD007", ident, f"unknown element {ident} in {where}", pos))

    for rel in m.rels:
        need_element(rel.source, f"rel {rel.id}", rel.pos)
        need_element(rel.target, f"rel {rel.id}", rel.pos)
    for sc in m.scenarios:
        need_element(sc.ego, f"scenario {sc.id}", sc.pos)
        for scene in sc.scenes:
            for ent in scene.entities:
                need_element(ent, f"scenario {sc.id} scene {scene.index}", sc.pos)
        for agent_id, behavior_id in sc.target_behaviors:
            need_element(agent_id, f"scenario {sc.id} performs", sc.pos)
            need_element(behavior_id, f"scenario {sc.id} performs", sc.pos)
    for uc in m.use_cases:
        for ref in uc.scenarios:
            if ref not in scenario_ids:
                findings.append(
                    error("MOD007", ref, f"unknown scenario {ref} in usecase {uc.id}", uc.pos)
                )
        for ref in uc.actors:
            need_element(ref, f"usecase {uc.id} actor", uc.pos)
        for ref in uc.stakeholder_traces:
            need_element(ref, f"usecase {uc.id} stakeholder", uc.pos)
    for ia in m.interactions:
        if ia.scenario not in scenario_ids:
            findings.append(
                error("MOD007", ia.scenario,
                      f"unknown scenario {ia.scenario} in interaction {ia.id}", ia.pos)
            )
        for msg in ia.messages:
            need_element(msg.source, f"interaction {ia.id} msg {msg.order}", ia.pos)
            need_element(msg.target, f"interaction {ia.id} msg {msg.order}", ia.pos)
    all_ids = set(seen) | workspace_ids
    for tr in m.traces:
        for endpoint in (tr.source, tr.target):
            if endpoint not in all_ids:
                findings.append(
                    error("MOD007", endpoint, f"unknown id {endpoint} in trace {tr.id}", tr.pos)
                )
    return findings


def check_conformance(
    m: Model,
    p: Profile,
    o: Ontology,
    workspace_ids: frozenset[str] = frozenset(),
) -> list[Finding]:
    """Conformance of a model against its profile and ontology.

    MOD001 unresolved stereotype          MOD005 interaction endpoint outside
    MOD002 relation instance unlicensed          derived context + ego
    MOD003 multiplicity bounds violated   MOD006 unknown attribute (warning)
    MOD004 scene entity not a SceneEntity MOD007/MOD008 reference problems
    MOD009 message orders not strictly increasing
    """
    findings: list[Finding] = list(_check_references(m, workspace_ids))
    stereotypes = p.stereotype_index()
    elements = m.element_index()

    def concept_of(element_id: str) -> ConceptRef | None:
        el = elements.get(element_id)
        if el is None:
            return None
        concept = element_concept(el, p)
        if concept is None or not o.has_concept(concept):
            return None
        return concept

    for el in m.elements:
        st = stereotypes.get(el.stereotype)
        if st is None:
            findings.append(
                error("MOD001", el.id, f"element {el.id} uses unknown stereotype {el.stereotype}",
                      el.pos)
            )
            continue
        if isinstance(st.traces_to, ConceptRef) and o.has_concept(st.traces_to):
            allowed: set[str] = set()
            for anc in ancestors(o, st.traces_to):
                allowed.update(o.concept_attrs(anc))
            for attr_name, _value in el.attrs:
                if attr_name not in allowed:
                    findings.append(
                        warning("MOD006", el.id,
                                f"attribute {attr_name} not declared on {st.traces_to} "
                                "or its ancestors", el.pos)
                    )

    for rel in m.rels:
        st = stereotypes.get(rel.via)
        if st is None:
            findings.append(
                error("MOD001", rel.id, f"rel {rel.id} uses unknown stereotype {rel.via}", rel.pos)
            )
            continue
        if st.extends not in ASSOCIATION_METACLASSES:
            findings.append(
                error("MOD002", rel.id,
                      f"rel {rel.id} typed by {rel.via}, which does not extend an "
                      "association metaclass", rel.pos)
            )
            continue
        decl = _traced_relation(st, o)
        if decl is None:
            # dangling stereotype trace; reported against the profile (PRF001)
            continue
        src_concept = concept_of(rel.source)
        dst_concept = concept_of(rel.target)
        if src_concept is None or dst_concept is None:
            if rel.source in elements and rel.target in elements:
                findings.append(
                    error("MOD002", rel.id,
                          f"rel {rel.id} endpoints have no concept-traced stereotypes", rel.pos)
                )
            continue
        decision = relation_licensed(o, decl.kind, src_concept, dst_concept)
        if not decision.licensed:
            findings.append(
                error("MOD002", rel.id,
                      f"no {decl.kind.value} declaration licenses {src_concept} -> {dst_concept}",
                      rel.pos)
            )

    # Multiplicity bounds: count outgoing instances per source element for
    # every relation declaration carrying bounds.
    bounded = [r for r in o.relations if r.mult is not None]
    if bounded:
        outgoing: dict[tuple[str, str], int] = {}
        for rel in m.rels:
            st = stereotypes.get(rel.via)
            decl = _traced_relation(st, o) if st else None
            if decl is not None:
                key = (decl.id, rel.source)
                outgoing[key] = outgoing.get(key, 0) + 1
        for decl in bounded:
            if not o.has_concept(decl.source):
                continue
            for el in m.elements:
                concept = concept_of(el.id)
                if concept is None or decl.source not in ancestors(o, concept):
                    continue
                count = outgoing.get((decl.id, el.id), 0)
                mult = decl.mult
                assert mult is not None
                if count < mult.min or (mult.max is not None and count > mult.max):
                    findings.append(
                        error("MOD003", el.id,
                              f"element {el.id} has {count} {decl.id} instances, "
                              f"bounds {mult}", el.pos)
                    )

    check_scene_entities = o.has_concept(SCENE_ENTITY_ANCHOR)
    for sc in m.scenarios:
        if check_scene_entities:
            checked: set[str] = set()
            for scene in sc.scenes:
                for ent in scene.entities:
                    if ent in checked or ent not in elements:
                        continue
                    checked.add(ent)
                    concept = concept_of(ent)
                    if concept is None or SCENE_ENTITY_ANCHOR not in ancestors(o, concept):
                        findings.append(
                            error("MOD004", ent,
                                  f"scene entity {ent} in scenario {sc.id} is not a "
                                  "scene entity concept", sc.pos)
                        )

    for ia in m.interactions:
        previous_order: int | None = None
        for msg in ia.messages:
            if previous_order is not None and msg.order <= previous_order:
                findings.append(
                    error("MOD009", ia.id,
                          f"message order {msg.order} does not increase after "
                          f"{previous_order} in interaction {ia.id}", ia.pos)
                )
            previous_order = msg.order
        scenario = m.scenario_by_id(ia.scenario)
        if scenario is None:
            continue  # already MOD007
        context = set(derive_system_context(m, scenario.id, p, o))
        context.add(scenario.ego)
        offenders: list[str] = []
        for msg in ia.messages:
            for endpoint in (msg.source, msg.target):
                if endpoint in elements and endpoint not in context and endpoint not in offenders:
                    offenders.append(endpoint)
        for endpoint in offenders:
            findings.append(
                error("MOD005", endpoint,
                      f"interaction {ia.id} uses {endpoint}, which is outside the derived "
                      f"context of {scenario.id}", ia.pos)
            )

    return sort_findings(findings)
