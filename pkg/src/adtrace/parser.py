"""Recursive-descent parser for `.adt` sources.

One source file may contain any mix of `ontology`, `profile` and `model`
blocks. Parsing is purely syntactic: duplicate names and unresolved
references are left for the validators, which report them as findings.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError
from .findings import SourcePos
from .lexer import Token, tokenize
from .model import (
    ArtifactDecl,
    ArtifactKind,
    Element,
    Interaction,
    Message,
    Model,
    RelInstance,
    Scenario,
    Scene,
    TraceDecl,
    TraceKind,
    UseCaseDecl,
)
from .ontology import (
    ConceptDecl,
    ConceptRef,
    Multiplicity,
    Ontology,
    RelationDecl,
    RelationKind,
    TranslationLink,
    merge_ontologies,
)
from .profile import Metaclass, Profile, RelationRef, Stereotype

_RELATION_KINDS = {kind.value: kind for kind in RelationKind}
_METACLASSES = {mc.value: mc for mc in Metaclass}
_ARTIFACT_KINDS = {kind.value: kind for kind in ArtifactKind}
_TRACE_KINDS = {kind.value: kind for kind in TraceKind}


@dataclass(frozen=True)
class Document:
    """Parsed content of one source text."""

    ontology: Ontology
    profiles: tuple[Profile, ...] = ()
    models: tuple[Model, ...] = ()


def _implicit_specializes_id(child: ConceptRef, parent: ConceptRef) -> str:
    return f"{child.namespace}_{child.name}_specializes_{parent.name}"


class _Parser:
    def __init__(self, source: str, file: str | None):
        self.tokens = tokenize(source, file)
        self.file = file
        self.pos = 0

    # --- token plumbing -------------------------------------------------

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def at(self, kind: str, value: str | None = None) -> bool:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            return False
        return value is None or tok.value == value

    def fail(self, expected: str) -> ParseError:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            line = last.line if last else 1
            col = last.col + len(last.value) if last else 1
            return ParseError(f"expected {expected}, found end of input", self.file, line, col)
        found = f"'{tok.value}'" if tok.kind != "STRING" else "string"
        return ParseError(f"expected {expected}, found {found}", self.file, tok.line, tok.col)

    def take(self, kind: str, expected: str | None = None) -> Token:
        if not self.at(kind):
            raise self.fail(expected or f"'{kind}'")
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def take_ident(self, expected: str = "identifier") -> Token:
        return self.take("IDENT", expected)

    def take_keyword(self, word: str) -> Token:
        if not self.at("IDENT", word):
            raise self.fail(f"'{word}'")
        return self.take("IDENT")

    def at_keyword(self, word: str) -> bool:
        return self.at("IDENT", word)

    def take_int(self, expected: str = "integer") -> int:
        return int(self.take("INT", expected).value)

    def here(self, tok: Token) -> SourcePos:
        return SourcePos(self.file, tok.line, tok.col)

    # --- shared pieces --------------------------------------------------

    def qref(self, default_namespace: str) -> ConceptRef:
        first = self.take_ident("concept reference")
        if self.at("."):
            self.take(".")
            second = self.take_ident("concept name")
            return ConceptRef(first.value, second.value)
        return ConceptRef(default_namespace, first.value)

    # --- document -------------------------------------------------------

    def document(self) -> Document:
        ontologies: list[Ontology] = []
        profiles: list[Profile] = []
        models: list[Model] = []
        while self.peek() is not None:
            if self.at_keyword("ontology"):
                ontologies.append(self.ontology_block())
            elif self.at_keyword("profile"):
                profiles.append(self.profile_block())
            elif self.at_keyword("model"):
                models.append(self.model_block())
            else:
                raise self.fail("'ontology', 'profile' or 'model'")
        return Document(
            ontology=merge_ontologies(ontologies),
            profiles=tuple(profiles),
            models=tuple(models),
        )

    # --- ontology -------------------------------------------------------

    def ontology_block(self) -> Ontology:
        self.take_keyword("ontology")
        namespace = self.take_ident("namespace name").value
        self.take("{")
        concepts: list[ConceptDecl] = []
        relations: list[RelationDecl] = []
        translations: list[TranslationLink] = []
        while not self.at("}"):
            if self.at_keyword("concept"):
                self.concept_decl(namespace, concepts, relations)
            elif self.at_keyword("relation"):
                relations.append(self.relation_decl(namespace))
            elif self.at_keyword("translate"):
                translations.append(self.translate_decl(namespace))
            else:
                raise self.fail("'concept', 'relation', 'translate' or '}'")
        self.take("}")
        return Ontology(
            namespaces=(namespace,),
            concepts=tuple(concepts),
            relations=tuple(relations),
            translations=tuple(translations),
        )

    def concept_decl(
        self,
        namespace: str,
        concepts: list[ConceptDecl],
        relations: list[RelationDecl],
    ) -> None:
        kw = self.take_keyword("concept")
        name = self.take_ident("concept name")
        ref = ConceptRef(namespace, name.value)
        parents: list[ConceptRef] = []
        if self.at(":"):
            self.take(":")
            parents.append(ConceptRef(namespace, self.take_ident("parent concept").value))
            while self.at(","):
                self.take(",")
                parents.append(ConceptRef(namespace, self.take_ident("parent concept").value))
        attrs: list[str] = []
        if self.at_keyword("attrs"):
            self.take_keyword("attrs")
            self.take("(")
            attrs.append(self.take_ident("attribute name").value)
            while self.at(","):
                self.take(",")
                attrs.append(self.take_ident("attribute name").value)
            self.take(")")
        concepts.append(ConceptDecl(ref, tuple(sorted(attrs)), self.here(kw)))
        for parent in parents:
            relations.append(
                RelationDecl(
                    id=_implicit_specializes_id(ref, parent),
                    kind=RelationKind.SPECIALIZES,
                    source=ref,
                    target=parent,
                    implicit=True,
                    pos=self.here(kw),
                )
            )

    def relation_decl(self, namespace: str) -> RelationDecl:
        kw = self.take_keyword("relation")
        rel_id = self.take_ident("relation id").value
        self.take(":")
        kind_tok = self.take_ident("relation kind")
        kind = _RELATION_KINDS.get(kind_tok.value)
        if kind is None:
            raise ParseError(
                f"expected relation kind, found '{kind_tok.value}'",
                self.file, kind_tok.line, kind_tok.col,
            )
        source = self.qref(namespace)
        self.take("->")
        target = self.qref(namespace)
        mult: Multiplicity | None = None
        if self.at("["):
            self.take("[")
            lower = self.take_int("lower bound")
            self.take("..")
            if self.at("*"):
                self.take("*")
                upper: int | None = None
            else:
                upper = self.take_int("upper bound or '*'")
            self.take("]")
            mult = Multiplicity(lower, upper)
        return RelationDecl(rel_id, kind, source, target, mult, pos=self.here(kw))

    def translate_decl(self, namespace: str) -> TranslationLink:
        kw = self.take_keyword("translate")
        link_id = self.take_ident("translation id").value
        self.take(":")
        source = self.qref(namespace)
        self.take("=>")
        target = self.qref(namespace)
        return TranslationLink(link_id, source, target, pos=self.here(kw))

    # --- profile ----------------------------------------------------------

    def profile_block(self) -> Profile:
        self.take_keyword("profile")
        name = self.take_ident("profile name").value
        self.take_keyword("uses")
        ontology_ref = self.take_ident("ontology name").value
        self.take("{")
        stereotypes: list[Stereotype] = []
        while not self.at("}"):
            stereotypes.append(self.stereotype_decl(ontology_ref))
        self.take("}")
        return Profile(name, ontology_ref, tuple(stereotypes))

    def stereotype_decl(self, default_namespace: str) -> Stereotype:
        kw = self.take_keyword("stereotype")
        name = self.take_ident("stereotype name").value
        self.take_keyword("extends")
        mc_tok = self.take_ident("metaclass")
        metaclass = _METACLASSES.get(mc_tok.value)
        if metaclass is None:
            raise ParseError(
                f"expected metaclass, found '{mc_tok.value}'",
                self.file, mc_tok.line, mc_tok.col,
            )
        specializes: str | None = None
        if self.at_keyword("specializes"):
            self.take_keyword("specializes")
            specializes = self.take_ident("stereotype name").value
        self.take_keyword("traces")
        traces_to: ConceptRef | RelationRef
        if self.at_keyword("rel") and self.tokens[self.pos + 1 : self.pos + 2] and \
                self.tokens[self.pos + 1].kind == "IDENT":
            self.take_keyword("rel")
            traces_to = RelationRef(self.take_ident("relation id").value)
        else:
            traces_to = self.qref(default_namespace)
        return Stereotype(name, metaclass, traces_to, specializes, pos=self.here(kw))

    # --- model ------------------------------------------------------------

    def model_block(self) -> Model:
        self.take_keyword("model")
        name = self.take_ident("model name").value
        self.take_keyword("uses")
        profile_ref = self.take_ident("profile name").value
        self.take("{")
        elements: list[Element] = []
        rels: list[RelInstance] = []
        scenarios: list[Scenario] = []
        use_cases: list[UseCaseDecl] = []
        interactions: list[Interaction] = []
        artifacts: list[ArtifactDecl] = []
        traces: list[TraceDecl] = []
        while not self.at("}"):
            if self.at_keyword("element"):
                elements.append(self.element_decl())
            elif self.at_keyword("rel"):
                rels.append(self.rel_decl())
            elif self.at_keyword("scenario"):
                scenarios.append(self.scenario_decl())
            elif self.at_keyword("usecase"):
                use_cases.append(self.usecase_decl())
            elif self.at_keyword("interaction"):
                interactions.append(self.interaction_decl())
            elif self.at_keyword("artifact"):
                artifacts.append(self.artifact_decl())
            elif self.at_keyword("trace"):
                traces.append(self.trace_decl())
            else:
                raise self.fail(
                    "'element', 'rel', 'scenario', 'usecase', 'interaction', "
                    "'artifact', 'trace' or '}'"
                )
        self.take("}")
        return Model(
            id=name,
            profile_ref=profile_ref,
            elements=tuple(elements),
            rels=tuple(rels),
            scenarios=tuple(scenarios),
            use_cases=tuple(use_cases),
            interactions=tuple(interactions),
            artifacts=tuple(artifacts),
            traces=tuple(traces),
        )

    def element_decl(self) -> Element:
        kw = self.take_keyword("element")
        el_id = self.take_ident("element id").value
        self.take(":")
        stereotype = self.take_ident("stereotype name").value
        attrs: list[tuple[str, str]] = []
        if self.at("("):
            self.take("(")
            while True:
                attr_name = self.take_ident("attribute name").value
                self.take("=")
                attrs.append((attr_name, self.take("STRING", "string value").value))
                if self.at(","):
                    self.take(",")
                    continue
                break
            self.take(")")
        return Element(el_id, stereotype, tuple(sorted(attrs)), pos=self.here(kw))

    def rel_decl(self) -> RelInstance:
        kw = self.take_keyword("rel")
        rel_id = self.take_ident("rel id").value
        self.take(":")
        via = self.take_ident("stereotype name").value
        source = self.take_ident("source element").value
        self.take("->")
        target = self.take_ident("target element").value
        return RelInstance(rel_id, via, source, target, pos=self.here(kw))

    def scenario_decl(self) -> Scenario:
        kw = self.take_keyword("scenario")
        sc_id = self.take_ident("scenario id").value
        self.take_keyword("ego")
        ego = self.take_ident("ego element").value
        self.take("{")
        scenes: list[Scene] = []
        while self.at_keyword("scene"):
            self.take_keyword("scene")
            index = self.take_int("scene index")
            self.take("{")
            entities = {self.take_ident("element id").value}
            while self.at(","):
                self.take(",")
                entities.add(self.take_ident("element id").value)
            self.take("}")
            scenes.append(Scene(index, tuple(sorted(entities))))
        behaviors: list[tuple[str, str]] = []
        while self.at_keyword("performs"):
            self.take_keyword("performs")
            agent = self.take_ident("agent element").value
            self.take(":")
            behaviors.append((agent, self.take_ident("behavior element").value))
        self.take("}")
        return Scenario(sc_id, ego, tuple(scenes), tuple(behaviors), pos=self.here(kw))

    def usecase_decl(self) -> UseCaseDecl:
        kw = self.take_keyword("usecase")
        uc_id = self.take_ident("usecase id").value
        self.take("{")
        scenarios: set[str] = set()
        actors: set[str] = set()
        stakeholders: set[str] = set()
        while not self.at("}"):
            if self.at_keyword("scenario"):
                self.take_keyword("scenario")
                scenarios.add(self.take_ident("scenario id").value)
            elif self.at_keyword("actor"):
                self.take_keyword("actor")
                actors.add(self.take_ident("element id").value)
            elif self.at_keyword("stakeholder"):
                self.take_keyword("stakeholder")
                stakeholders.add(self.take_ident("element id").value)
            else:
                raise self.fail("'scenario', 'actor', 'stakeholder' or '}'")
        self.take("}")
        return UseCaseDecl(
            uc_id,
            tuple(sorted(scenarios)),
            tuple(sorted(actors)),
            tuple(sorted(stakeholders)),
            pos=self.here(kw),
        )

    def interaction_decl(self) -> Interaction:
        kw = self.take_keyword("interaction")
        ia_id = self.take_ident("interaction id").value
        self.take_keyword("for")
        scenario = self.take_ident("scenario id").value
        self.take("{")
        messages: list[Message] = []
        while self.at_keyword("msg"):
            self.take_keyword("msg")
            order = self.take_int("message order")
            source = self.take_ident("source element").value
            self.take("->")
            target = self.take_ident("target element").value
            self.take(":")
            label = self.take("STRING", "message label").value
            messages.append(Message(order, source, target, label))
        self.take("}")
        return Interaction(ia_id, scenario, tuple(messages), pos=self.here(kw))

    def artifact_decl(self) -> ArtifactDecl:
        kw = self.take_keyword("artifact")
        art_id = self.take_ident("artifact id").value
        self.take(":")
        kind_tok = self.take_ident("artifact kind")
        kind = _ARTIFACT_KINDS.get(kind_tok.value)
        if kind is None:
            raise ParseError(
                f"expected artifact kind, found '{kind_tok.value}'",
                self.file, kind_tok.line, kind_tok.col,
            )
        text: str | None = None
        if self.at_keyword("text"):
            self.take_keyword("text")
            text = self.take("STRING", "artifact text").value
        return ArtifactDecl(art_id, kind, text, pos=self.here(kw))

    def trace_decl(self) -> TraceDecl:
        kw = self.take_keyword("trace")
        tr_id = self.take_ident("trace id").value
        self.take(":")
        kind_tok = self.take_ident("trace kind")
        kind = _TRACE_KINDS.get(kind_tok.value)
        if kind is None:
            raise ParseError(
                f"expected trace kind, found '{kind_tok.value}'",
                self.file, kind_tok.line, kind_tok.col,
            )
        source = self.take_ident("source id").value
        self.take("->")
        target = self.take_ident("target id").value
        return TraceDecl(tr_id, kind, source, target, pos=self.here(kw))


def parse_document(source: str, file: str | None = None) -> Document:
    return _Parser(source, file).document()


def parse_ontology(source: str, file: str | None = None) -> Ontology:
    """Parse a source consisting of ontology blocks only (empty text is an
    empty ontology)."""
    doc = parse_document(source, file)
    if doc.profiles or doc.models:
        raise ParseError("expected ontology blocks only", file, 1, 1)
    return doc.ontology


def parse_profile(source: str, file: str | None = None) -> Profile:
    """Parse a source holding exactly one profile block."""
    doc = parse_document(source, file)
    if len(doc.profiles) != 1 or doc.ontology.namespaces or doc.models:
        raise ParseError("expected exactly one profile block", file, 1, 1)
    return doc.profiles[0]


def parse_model(source: str, file: str | None = None) -> Model:
    """Parse a source holding exactly one model block."""
    doc = parse_document(source, file)
    if len(doc.models) != 1 or doc.ontology.namespaces or doc.profiles:
        raise ParseError("expected exactly one model block", file, 1, 1)
    return doc.models[0]
