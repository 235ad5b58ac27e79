"""Canonical printers for ontologies, profiles and models.

The canonical form sorts blocks by kind (ontology, profile, model) and id,
one declaration per line with 2-space indent. References are always fully
qualified, so parse(serialize(x)) reproduces x up to canonical ordering.
Relations introduced by `concept A : B` sugar are printed back as parent
lists, never as relation lines.
"""

from __future__ import annotations

from .model import Interaction, Model, Scenario, UseCaseDecl
from .ontology import Ontology, RelationKind
from .parser import Document
from .profile import Profile, RelationRef


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def serialize_ontology(o: Ontology) -> str:
    lines: list[str] = []
    namespaces = sorted(o.namespaces)
    implicit_parents: dict[tuple[str, str], list[str]] = {}
    for rel in o.relations:
        if rel.implicit and rel.kind is RelationKind.SPECIALIZES:
            key = (rel.source.namespace, rel.source.name)
            implicit_parents.setdefault(key, []).append(rel.target.name)

    explicit = [r for r in o.relations if not r.implicit]

    def block_of(namespace: str) -> str:
        if namespace in namespaces:
            return namespace
        return namespaces[0] if namespaces else namespace

    for ns_index, ns in enumerate(namespaces):
        lines.append(f"ontology {ns} {{")
        for decl in sorted(o.concepts, key=lambda d: d.ref):
            if decl.ref.namespace != ns:
                continue
            line = f"  concept {decl.ref.name}"
            parents = sorted(implicit_parents.get((ns, decl.ref.name), ()))
            if parents:
                line += " : " + ", ".join(parents)
            if decl.attrs:
                line += " attrs(" + ", ".join(sorted(decl.attrs)) + ")"
            lines.append(line)
        for rel in sorted(explicit, key=lambda r: r.id):
            if block_of(rel.source.namespace) != ns:
                continue
            line = f"  relation {rel.id} : {rel.kind.value} {rel.source} -> {rel.target}"
            if rel.mult is not None:
                line += f" {rel.mult}"
            lines.append(line)
        for link in sorted(o.translations, key=lambda t: t.id):
            if block_of(link.source.namespace) != ns:
                continue
            lines.append(f"  translate {link.id} : {link.source} => {link.target}")
        lines.append("}")
        if ns_index < len(namespaces) - 1:
            lines.append("")
    return "\n".join(lines) + "\n" if lines else ""


def serialize_profile(p: Profile) -> str:
    lines = [f"profile {p.name} uses {p.ontology_ref} {{"]
    for st in sorted(p.stereotypes, key=lambda s: s.name):
        line = f"  stereotype {st.name} extends {st.extends.value}"
        if st.specializes:
            line += f" specializes {st.specializes}"
        if isinstance(st.traces_to, RelationRef):
            line += f" traces rel {st.traces_to.id}"
        else:
            line += f" traces {st.traces_to}"
        lines.append(line)
    lines.append("}")
    return "\n".join(lines) + "\n"


def _scenario_lines(sc: Scenario) -> list[str]:
    lines = [f"  scenario {sc.id} ego {sc.ego} {{"]
    for scene in sc.scenes:
        lines.append(f"    scene {scene.index} {{ " + ", ".join(scene.entities) + " }")
    for agent, behavior in sorted(sc.target_behaviors):
        lines.append(f"    performs {agent} : {behavior}")
    lines.append("  }")
    return lines


def _usecase_lines(uc: UseCaseDecl) -> list[str]:
    lines = [f"  usecase {uc.id} {{"]
    lines += [f"    scenario {s}" for s in uc.scenarios]
    lines += [f"    actor {a}" for a in uc.actors]
    lines += [f"    stakeholder {s}" for s in uc.stakeholder_traces]
    lines.append("  }")
    return lines


def _interaction_lines(ia: Interaction) -> list[str]:
    lines = [f"  interaction {ia.id} for {ia.scenario} {{"]
    for msg in ia.messages:
        lines.append(f"    msg {msg.order} {msg.source} -> {msg.target} : {_quote(msg.label)}")
    lines.append("  }")
    return lines


def serialize_model(m: Model) -> str:
    lines = [f"model {m.id} uses {m.profile_ref} {{"]
    for art in sorted(m.artifacts, key=lambda a: a.id):
        line = f"  artifact {art.id} : {art.kind.value}"
        if art.text is not None:
            line += f" text {_quote(art.text)}"
        lines.append(line)
    for el in sorted(m.elements, key=lambda e: e.id):
        line = f"  element {el.id} : {el.stereotype}"
        if el.attrs:
            line += " (" + ", ".join(f"{name}={_quote(value)}" for name, value in el.attrs) + ")"
        lines.append(line)
    for ia in sorted(m.interactions, key=lambda i: i.id):
        lines += _interaction_lines(ia)
    for rel in sorted(m.rels, key=lambda r: r.id):
        lines.append(f"  rel {rel.id} : {rel.via} {rel.source} -> {rel.target}")
    for sc in sorted(m.scenarios, key=lambda s: s.id):
        lines += _scenario_lines(sc)
    for tr in sorted(m.traces, key=lambda t: t.id):
        lines.append(f"  trace {tr.id} : {tr.kind.value} {tr.source} -> {tr.target}")
    for uc in sorted(m.use_cases, key=lambda u: u.id):
        lines += _usecase_lines(uc)
    lines.append("}")
    return "\n".join(lines) + "\n"


def serialize_document(doc: Document) -> str:
    parts: list[str] = []
    if doc.ontology.namespaces:
        parts.append(serialize_ontology(doc.ontology))
    for profile in sorted(doc.profiles, key=lambda p: p.name):
        parts.append(serialize_profile(profile))
    for model in sorted(doc.models, key=lambda m: m.id):
        parts.append(serialize_model(model))
    return "\n".join(parts)
