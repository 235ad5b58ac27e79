"""Domain-specific profiles: stereotypes extending base metaclasses, each
traced to one ontology concept or relation, plus profile generation from an
ontology."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from .errors import GenerationError
from .findings import Finding, SourcePos, error, sort_findings, warning
from .ontology import ConceptRef, Ontology, RelationKind, ancestors


class Metaclass(enum.Enum):
    BLOCK = "Block"
    ACTOR = "Actor"
    USE_CASE = "UseCase"
    REQUIREMENT = "Requirement"
    INTERACTION = "Interaction"
    PART_ASSOCIATION = "PartAssociation"
    ASSOCIATION = "Association"
    TRACE = "Trace"


# Metaclasses whose stereotypes type relation instances and therefore must
# trace to a relation id rather than a concept.
ASSOCIATION_METACLASSES = frozenset(
    {Metaclass.PART_ASSOCIATION, Metaclass.ASSOCIATION, Metaclass.TRACE}
)


@dataclass(frozen=True)
class RelationRef:
    """Trace target naming an ontology relation declaration."""

    id: str

    def __str__(self) -> str:
        return f"rel {self.id}"


@dataclass(frozen=True)
class Stereotype:
    name: str
    extends: Metaclass
    traces_to: ConceptRef | RelationRef
    specializes: str | None = None
    pos: SourcePos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Profile:
    name: str
    ontology_ref: str
    stereotypes: tuple[Stereotype, ...] = ()

    def stereotype_index(self) -> dict[str, Stereotype]:
        index: dict[str, Stereotype] = {}
        for st in self.stereotypes:
            index.setdefault(st.name, st)
        return index

    def traced_concept(self, stereotype_name: str) -> ConceptRef | None:
        st = self.stereotype_index().get(stereotype_name)
        if st is not None and isinstance(st.traces_to, ConceptRef):
            return st.traces_to
        return None


def _specialization_cycle_members(p: Profile) -> set[str]:
    """Stereotype names that sit on a specializes cycle (a walk from the
    stereotype returns to it)."""
    index = p.stereotype_index()
    members: set[str] = set()
    for st in p.stereotypes:
        cursor = st.specializes
        for _ in range(len(p.stereotypes)):
            if cursor is None or cursor not in index:
                break
            if cursor == st.name:
                members.add(st.name)
                break
            cursor = index[cursor].specializes
    return members


def check_profile(p: Profile, o: Ontology) -> list[Finding]:
    """Traceability and consistency findings; [] iff the profile is clean.

    PRF001 trace target unresolved
    PRF002 metaclass and trace-target form disagree
    PRF003 specialization inconsistency (concept mismatch, unresolved, cycle)
    PRF004 two stereotypes trace the same concept with the same metaclass (warning)
    PRF005 duplicate stereotype name
    """
    findings: list[Finding] = []
    index = p.stereotype_index()
    relation_ids = {rel.id for rel in o.relations}
    declared = {d.ref for d in o.concepts}

    seen: set[str] = set()
    for st in p.stereotypes:
        if st.name in seen:
            findings.append(error("PRF005", st.name, f"stereotype {st.name} declared twice", st.pos))
            continue
        seen.add(st.name)

        wants_relation = st.extends in ASSOCIATION_METACLASSES
        is_relation = isinstance(st.traces_to, RelationRef)
        if wants_relation != is_relation:
            expected = "a relation id" if wants_relation else "a concept"
            findings.append(
                error("PRF002", st.name,
                      f"stereotype {st.name} extends {st.extends.value} but traces {st.traces_to}; "
                      f"expected {expected}", st.pos)
            )
        elif is_relation:
            if st.traces_to.id not in relation_ids:
                findings.append(
                    error("PRF001", st.name,
                          f"stereotype {st.name} traces unknown relation {st.traces_to.id}", st.pos)
                )
        elif st.traces_to not in declared:
            findings.append(
                error("PRF001", st.name,
                      f"stereotype {st.name} traces unknown concept {st.traces_to}", st.pos)
            )

    cycle_members = _specialization_cycle_members(p)
    for name in sorted(cycle_members):
        st = index[name]
        findings.append(
            error("PRF003", name, f"stereotype {name} sits on a specialization cycle", st.pos)
        )

    for st in p.stereotypes:
        if st.specializes is None or st.name in cycle_members:
            continue
        parent = index.get(st.specializes)
        if parent is None:
            findings.append(
                error("PRF003", st.name,
                      f"stereotype {st.name} specializes unknown stereotype {st.specializes}",
                      st.pos)
            )
            continue
        if isinstance(st.traces_to, ConceptRef) and isinstance(parent.traces_to, ConceptRef):
            if st.traces_to in declared and parent.traces_to in declared:
                if parent.traces_to not in ancestors(o, st.traces_to):
                    findings.append(
                        error("PRF003", st.name,
                              f"{st.traces_to} is not a descendant of {parent.traces_to} "
                              f"but {st.name} specializes {parent.name}", st.pos)
                    )

    by_trace: dict[tuple[ConceptRef, Metaclass], list[str]] = {}
    for st in p.stereotypes:
        if isinstance(st.traces_to, ConceptRef):
            by_trace.setdefault((st.traces_to, st.extends), []).append(st.name)
    for (concept, metaclass), names in sorted(by_trace.items(), key=lambda kv: (kv[0][0], kv[0][1].value)):
        if len(names) > 1:
            findings.append(
                warning("PRF004", ",".join(sorted(names)),
                        f"stereotypes {', '.join(sorted(names))} all trace {concept} "
                        f"with metaclass {metaclass.value}")
            )

    return sort_findings(findings)


_DEFAULT_RELATION_METACLASSES: Mapping[RelationKind, Metaclass] = MappingProxyType(
    {
        RelationKind.PART_OF: Metaclass.PART_ASSOCIATION,
        RelationKind.CONSISTS_OF: Metaclass.PART_ASSOCIATION,
        RelationKind.ELEMENT_OF: Metaclass.PART_ASSOCIATION,
        RelationKind.ABLE_TO_PERFORM: Metaclass.ASSOCIATION,
        RelationKind.DEFINES: Metaclass.ASSOCIATION,
        RelationKind.HAS_NEIGHBOR: Metaclass.ASSOCIATION,
    }
)


@dataclass(frozen=True)
class GenerationRules:
    """Mapping table from concept categories / relation kinds to metaclasses.

    Categories, in precedence order when a concept matches several:
    the use-case concept itself, concepts with a translation link to the
    actor target, and leaf concepts specializing the block root.
    """

    block_root: ConceptRef = ConceptRef("ad", "SceneEntity")
    actor_target: ConceptRef = ConceptRef("se", "Actor")
    usecase_concept: ConceptRef = ConceptRef("se", "UseCase")
    block_metaclass: Metaclass | None = Metaclass.BLOCK
    actor_metaclass: Metaclass | None = Metaclass.ACTOR
    usecase_metaclass: Metaclass | None = Metaclass.USE_CASE
    relation_metaclasses: Mapping[RelationKind, Metaclass | None] = _DEFAULT_RELATION_METACLASSES
    profile_name: str = "generated"
    ontology_ref: str | None = None


def _validate_rules(rules: GenerationRules) -> None:
    for name, metaclass in (
        ("block", rules.block_metaclass),
        ("actor", rules.actor_metaclass),
        ("usecase", rules.usecase_metaclass),
    ):
        if metaclass is not None and metaclass in ASSOCIATION_METACLASSES:
            raise GenerationError(
                f"{name} category maps to association metaclass {metaclass.value}; "
                "concept stereotypes must extend a non-association metaclass"
            )
    for kind, metaclass in rules.relation_metaclasses.items():
        if metaclass is not None and metaclass not in ASSOCIATION_METACLASSES:
            raise GenerationError(
                f"relation kind {kind.value} maps to {metaclass.value}; relation stereotypes "
                "must extend PartAssociation, Association or Trace"
            )


def _leaf_concepts(o: Ontology) -> set[ConceptRef]:
    parents_of_someone = {
        rel.target for rel in o.relations if rel.kind is RelationKind.SPECIALIZES
    }
    return {d.ref for d in o.concepts} - parents_of_someone


def _unique_name(base: str, used: set[str]) -> str:
    name = base
    n = 2
    while name in used:
        name = f"{base}_{n}"
        n += 1
    used.add(name)
    return name


def generate_profile(o: Ontology, rules: GenerationRules | None = None) -> Profile:
    """Generate a profile skeleton; every stereotype traces to the concept or
    relation it came from, so check_profile(result, o) has no error findings."""
    rules = rules or GenerationRules()
    _validate_rules(rules)

    concept_metaclass: dict[ConceptRef, Metaclass] = {}
    uncovered: list[str] = []

    declared = {d.ref for d in o.concepts}
    leaves = _leaf_concepts(o)
    translated_to_actor = {
        link.source for link in o.translations if link.target == rules.actor_target
    }

    def classify(ref: ConceptRef) -> tuple[str, Metaclass | None] | None:
        if ref == rules.usecase_concept:
            return ("usecase", rules.usecase_metaclass)
        if ref in translated_to_actor:
            return ("actor", rules.actor_metaclass)
        if ref in leaves and rules.block_root in declared:
            anc = ancestors(o, ref)
            if rules.block_root in anc and ref != rules.block_root:
                return ("block", rules.block_metaclass)
        return None

    for decl in sorted(o.concepts, key=lambda d: d.ref):
        category = classify(decl.ref)
        if category is None:
            continue
        _, metaclass = category
        if metaclass is None:
            uncovered.append(str(decl.ref))
        else:
            concept_metaclass.setdefault(decl.ref, metaclass)

    relation_targets: list[tuple[str, Metaclass]] = []
    for rel in o.relations:
        if rel.kind is RelationKind.SPECIALIZES:
            continue
        metaclass = rules.relation_metaclasses.get(rel.kind)
        if metaclass is None:
            uncovered.append(f"relation {rel.id} ({rel.kind.value})")
        elif all(rel.id != existing for existing, _ in relation_targets):
            relation_targets.append((rel.id, metaclass))

    if uncovered:
        raise GenerationError(
            "generation rules leave items without a metaclass: " + ", ".join(uncovered),
            uncovered=tuple(uncovered),
        )

    # Stereotype specialization mirrors concept specialization restricted to
    # concepts that received stereotypes: nearest stereotyped strict ancestor.
    parent_edges: dict[ConceptRef, list[ConceptRef]] = {}
    for rel in o.relations:
        if rel.kind is RelationKind.SPECIALIZES:
            parent_edges.setdefault(rel.source, []).append(rel.target)

    def nearest_stereotyped_ancestor(ref: ConceptRef) -> ConceptRef | None:
        frontier = sorted(parent_edges.get(ref, ()))
        visited = {ref}
        while frontier:
            hits = [c for c in frontier if c in concept_metaclass]
            if hits:
                return min(hits)
            visited.update(frontier)
            frontier = sorted(
                {p for c in frontier for p in parent_edges.get(c, ()) if p not in visited}
            )
        return None

    used_names: set[str] = set()
    stereotype_names: dict[ConceptRef, str] = {}
    plain = sorted(concept_metaclass)
    colliding = {ref.name for ref in plain if sum(r.name == ref.name for r in plain) > 1}
    for ref in plain:
        base = f"{ref.namespace}_{ref.name}" if ref.name in colliding else ref.name
        stereotype_names[ref] = _unique_name(base, used_names)

    stereotypes: list[Stereotype] = []
    for ref in plain:
        parent = nearest_stereotyped_ancestor(ref)
        stereotypes.append(
            Stereotype(
                name=stereotype_names[ref],
                extends=concept_metaclass[ref],
                traces_to=ref,
                specializes=stereotype_names[parent] if parent else None,
            )
        )
    for rel_id, metaclass in relation_targets:
        stereotypes.append(
            Stereotype(
                name=_unique_name(rel_id, used_names),
                extends=metaclass,
                traces_to=RelationRef(rel_id),
            )
        )

    ref = rules.ontology_ref
    if ref is None:
        ref = sorted(o.namespaces)[0] if o.namespaces else rules.block_root.namespace
    return Profile(name=rules.profile_name, ontology_ref=ref, stereotypes=tuple(stereotypes))
