"""Domain ontologies: named concepts in namespaces with typed relations.

An ontology is immutable after parsing; every operation here is read-only.
Well-formedness problems are reported as findings (never raised), except
for lookups with unresolved arguments, which raise ResolutionError.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import ResolutionError
from .findings import Finding, SourcePos, error, sort_findings


@dataclass(frozen=True, order=True)
class ConceptRef:
    namespace: str
    name: str

    def __str__(self) -> str:
        return f"{self.namespace}.{self.name}"


class RelationKind(enum.Enum):
    SPECIALIZES = "specializes"
    PART_OF = "part_of"
    CONSISTS_OF = "consists_of"
    ABLE_TO_PERFORM = "able_to_perform"
    DEFINES = "defines"
    ELEMENT_OF = "element_of"
    HAS_NEIGHBOR = "has_neighbor"


# Kinds whose instances decompose a whole into parts; used when deriving
# system contexts and drawing context diagrams.
DECOMPOSITION_KINDS = frozenset({RelationKind.PART_OF, RelationKind.CONSISTS_OF})


@dataclass(frozen=True)
class Multiplicity:
    min: int
    max: int | None  # None means unbounded ("*")

    def __str__(self) -> str:
        return f"[{self.min}..{'*' if self.max is None else self.max}]"


@dataclass(frozen=True)
class ConceptDecl:
    ref: ConceptRef
    attrs: tuple[str, ...] = ()
    pos: SourcePos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class RelationDecl:
    id: str
    kind: RelationKind
    source: ConceptRef
    target: ConceptRef
    mult: Multiplicity | None = None
    # True for relations desugared from `concept A : B`; affects only the
    # canonical printer, which re-emits them as parent lists.
    implicit: bool = False
    pos: SourcePos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class TranslationLink:
    id: str
    source: ConceptRef
    target: ConceptRef
    pos: SourcePos | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Ontology:
    namespaces: tuple[str, ...] = ()
    concepts: tuple[ConceptDecl, ...] = ()
    relations: tuple[RelationDecl, ...] = ()
    translations: tuple[TranslationLink, ...] = ()

    def concept_index(self) -> dict[ConceptRef, ConceptDecl]:
        """First declaration wins; duplicates surface via validate_ontology."""
        index: dict[ConceptRef, ConceptDecl] = {}
        for decl in self.concepts:
            index.setdefault(decl.ref, decl)
        return index

    def has_concept(self, ref: ConceptRef) -> bool:
        return any(decl.ref == ref for decl in self.concepts)

    def relation_by_id(self, rel_id: str) -> RelationDecl | None:
        for rel in self.relations:
            if rel.id == rel_id:
                return rel
        return None

    def concept_attrs(self, ref: ConceptRef) -> tuple[str, ...]:
        decl = self.concept_index().get(ref)
        return decl.attrs if decl else ()


def merge_ontologies(parts: list[Ontology]) -> Ontology:
    """Namespace union of several parsed ontology blocks or files."""
    namespaces: list[str] = []
    for part in parts:
        for ns in part.namespaces:
            if ns not in namespaces:
                namespaces.append(ns)
    return Ontology(
        namespaces=tuple(namespaces),
        concepts=tuple(d for p in parts for d in p.concepts),
        relations=tuple(r for p in parts for r in p.relations),
        translations=tuple(t for p in parts for t in p.translations),
    )


def _parent_edges(o: Ontology) -> dict[ConceptRef, list[ConceptRef]]:
    """child -> parents adjacency over specializes declarations."""
    edges: dict[ConceptRef, list[ConceptRef]] = {}
    for rel in o.relations:
        if rel.kind is RelationKind.SPECIALIZES:
            edges.setdefault(rel.source, []).append(rel.target)
    return edges


def ancestors(o: Ontology, c: ConceptRef) -> list[ConceptRef]:
    """Reflexive-transitive specialization closure of c.

    c comes first, the remainder lexicographically by (namespace, name).
    """
    if not o.has_concept(c):
        raise ResolutionError(f"unknown concept {c}")
    edges = _parent_edges(o)
    seen = {c}
    stack = [c]
    while stack:
        for parent in edges.get(stack.pop(), ()):
            if parent not in seen:
                seen.add(parent)
                stack.append(parent)
    return [c] + sorted(seen - {c})


@dataclass(frozen=True)
class LicenseDecision:
    licensed: bool
    by: str | None = None  # id of the first licensing declaration


def relation_licensed(
    o: Ontology, kind: RelationKind, src: ConceptRef, dst: ConceptRef
) -> LicenseDecision:
    """Whether some declaration of `kind` covers (src, dst) up to generalization.

    A declaration r licenses the pair iff r.source is an ancestor of src and
    r.target an ancestor of dst; `by` names the first such r in declaration
    order.
    """
    src_anc = set(ancestors(o, src))
    dst_anc = set(ancestors(o, dst))
    for rel in o.relations:
        if rel.kind is kind and rel.source in src_anc and rel.target in dst_anc:
            return LicenseDecision(True, rel.id)
    return LicenseDecision(False, None)


def _specialization_cycles(o: Ontology, namespace: str) -> list[list[ConceptRef]]:
    """Strongly connected components (size > 1, or self-loops) of the
    specializes graph restricted to one namespace. Iterative Tarjan."""
    edges: dict[ConceptRef, list[ConceptRef]] = {}
    self_loops: set[ConceptRef] = set()
    nodes: list[ConceptRef] = [d.ref for d in o.concepts if d.ref.namespace == namespace]
    node_set = set(nodes)
    for rel in o.relations:
        if rel.kind is not RelationKind.SPECIALIZES:
            continue
        if rel.source.namespace != namespace or rel.target.namespace != namespace:
            continue
        if rel.source == rel.target:
            self_loops.add(rel.source)
            continue
        if rel.source in node_set and rel.target in node_set:
            edges.setdefault(rel.source, []).append(rel.target)

    index: dict[ConceptRef, int] = {}
    low: dict[ConceptRef, int] = {}
    on_stack: set[ConceptRef] = set()
    stack: list[ConceptRef] = []
    counter = 0
    sccs: list[list[ConceptRef]] = []

    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(edges.get(root, ())))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for succ in it:
                if succ not in index:
                    index[succ] = low[succ] = counter
                    counter += 1
                    stack.append(succ)
                    on_stack.add(succ)
                    work.append((succ, iter(edges.get(succ, ()))))
                    advanced = True
                    break
                if succ in on_stack:
                    low[node] = min(low[node], index[succ])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    comp.append(member)
                    if member == node:
                        break
                if len(comp) > 1:
                    sccs.append(sorted(comp))
    for ref in sorted(self_loops):
        sccs.append([ref])
    return sccs


def validate_ontology(o: Ontology) -> list[Finding]:
    """Well-formedness findings, sorted by (code, subject); [] iff clean.

    ONT001 specialization cycle          ONT005 duplicate concept name
    ONT002 unresolved concept reference  ONT006 specializes across namespaces
    ONT003 duplicate relation id         ONT007 multiplicity min > max
    ONT004 translation inside one namespace
    """
    findings: list[Finding] = []
    declared = {d.ref for d in o.concepts}

    for ns in o.namespaces:
        for cycle in _specialization_cycles(o, ns):
            members = set(cycle)
            pos = next(
                (r.pos for r in o.relations
                 if r.kind is RelationKind.SPECIALIZES and r.source in members), None
            )
            names = ",".join(str(ref) for ref in cycle)
            findings.append(
                error("ONT001", names, f"specialization cycle involving {{{names}}}", pos)
            )

    def check_ref(ref: ConceptRef, where: str, pos: SourcePos | None) -> None:
        if ref not in declared:
            findings.append(error("ONT002", str(ref), f"unresolved concept {ref} in {where}", pos))

    for rel in o.relations:
        check_ref(rel.source, f"relation {rel.id}", rel.pos)
        check_ref(rel.target, f"relation {rel.id}", rel.pos)
        if rel.kind is RelationKind.SPECIALIZES and rel.source.namespace != rel.target.namespace:
            findings.append(
                error("ONT006", rel.id,
                      f"specializes must stay inside one namespace: {rel.source} -> {rel.target}",
                      rel.pos)
            )
        if rel.mult and rel.mult.max is not None and rel.mult.min > rel.mult.max:
            findings.append(
                error("ONT007", rel.id, f"multiplicity lower bound exceeds upper: {rel.mult}", rel.pos)
            )
    for link in o.translations:
        check_ref(link.source, f"translation {link.id}", link.pos)
        check_ref(link.target, f"translation {link.id}", link.pos)
        if link.source.namespace == link.target.namespace:
            findings.append(
                error("ONT004", link.id,
                      f"translation {link.id} stays inside namespace {link.source.namespace}",
                      link.pos)
            )

    id_positions: dict[str, SourcePos | None] = {}
    flagged: set[str] = set()
    for item in list(o.relations) + list(o.translations):
        if item.id in id_positions and item.id not in flagged:
            findings.append(error("ONT003", item.id, f"duplicate relation id {item.id}", item.pos))
            flagged.add(item.id)
        else:
            id_positions.setdefault(item.id, item.pos)

    seen_concepts: set[ConceptRef] = set()
    dup_flagged: set[ConceptRef] = set()
    for decl in o.concepts:
        if decl.ref in seen_concepts and decl.ref not in dup_flagged:
            findings.append(
                error("ONT005", str(decl.ref),
                      f"concept {decl.ref.name} declared twice in namespace {decl.ref.namespace}",
                      decl.pos)
            )
            dup_flagged.add(decl.ref)
        seen_concepts.add(decl.ref)

    return sort_findings(findings)
