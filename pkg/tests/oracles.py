"""Independent brute-force oracles. These deliberately avoid the library's
algorithms: recursion instead of worklists, fixpoint sweeps instead of BFS,
matrix closure instead of per-node searches."""

from __future__ import annotations

from adtrace.model import Model, TraceKind
from adtrace.ontology import ConceptRef, Ontology, RelationKind
from adtrace.profile import Profile, RelationRef
from adtrace.trace import TraceGraph


def ancestors_set(o: Ontology, c: ConceptRef) -> set[ConceptRef]:
    """Recursive DFS over the raw specializes edge list."""
    edges = [
        (r.source, r.target) for r in o.relations if r.kind is RelationKind.SPECIALIZES
    ]

    def walk(node: ConceptRef, seen: set[ConceptRef]) -> None:
        seen.add(node)
        for src, dst in edges:
            if src == node and dst not in seen:
                walk(dst, seen)

    seen: set[ConceptRef] = set()
    walk(c, seen)
    return seen


def licensed(
    o: Ontology, kind: RelationKind, src: ConceptRef, dst: ConceptRef
) -> tuple[bool, str | None]:
    """Double loop over declarations and both ancestor sets."""
    src_up = ancestors_set(o, src)
    dst_up = ancestors_set(o, dst)
    for rel in o.relations:
        if rel.kind is not kind:
            continue
        src_hit = any(rel.source == a for a in src_up)
        dst_hit = any(rel.target == a for a in dst_up)
        if src_hit and dst_hit:
            return True, rel.id
    return False, None


def system_context(m: Model, scenario_id: str, p: Profile, o: Ontology) -> set[str]:
    """Set union plus a whole-to-part fixpoint sweep."""
    scenario = next(s for s in m.scenarios if s.id == scenario_id)
    members: set[str] = set()
    for scene in scenario.scenes:
        members |= set(scene.entities)
    members -= {scenario.ego}

    stereotype_rel = {}
    for st in p.stereotypes:
        if isinstance(st.traces_to, RelationRef):
            decl = o.relation_by_id(st.traces_to.id)
            if decl is not None:
                stereotype_rel[st.name] = decl.kind

    whole_part: list[tuple[str, str]] = []
    for rel in m.rels:
        kind = stereotype_rel.get(rel.via)
        if kind is RelationKind.CONSISTS_OF:
            whole_part.append((rel.source, rel.target))
        elif kind is RelationKind.PART_OF:
            whole_part.append((rel.target, rel.source))

    for _ in range(len(m.elements) + 1):
        added = {part for whole, part in whole_part if whole in members}
        added -= {scenario.ego}
        if added <= members:
            break
        members |= added
    return members


def reachability_matrix(
    g: TraceGraph, kinds: frozenset[TraceKind] | None
) -> dict[tuple[str, str], bool]:
    """Warshall transitive closure over the (possibly kind-filtered) edges."""
    ids = [n.id for n in g.nodes]
    reach = {(a, b): False for a in ids for b in ids}
    for e in g.edges:
        if kinds is None or e.kind in kinds:
            reach[(e.source, e.target)] = True
    for k in ids:
        for a in ids:
            if reach[(a, k)]:
                for b in ids:
                    if reach[(k, b)]:
                        reach[(a, b)] = True
    return reach


def completeness_violations(g: TraceGraph) -> set[tuple[str, str]]:
    """(code, node id) pairs for the four default chain rules, recomputed from
    the closure matrices."""
    any_reach = reachability_matrix(g, None)
    chain_reach = reachability_matrix(
        g, frozenset({TraceKind.MITIGATES, TraceKind.DERIVES_FROM})
    )
    kind_of = {n.id: (n.kind.value if n.kind else None) for n in g.nodes}

    rules = [
        ("TRC001", "SafetyRequirement", "Hazard", chain_reach),
        ("TRC002", "Hazard", "OperationalScenario", any_reach),
        ("TRC003", "OperationalScenario", "UseCase", any_reach),
        ("TRC004", "UseCase", "StakeholderNeed", any_reach),
    ]
    out: set[tuple[str, str]] = set()
    for code, from_kind, to_kind, reach in rules:
        for node_id, k in kind_of.items():
            if k != from_kind:
                continue
            ok = any(
                reach[(node_id, other)]
                for other, other_kind in kind_of.items()
                if other_kind == to_kind and other != node_id
            )
            if not ok:
                out.add((code, node_id))
    return out
