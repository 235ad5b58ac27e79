from __future__ import annotations

import random

from adtrace.parser import parse_document, parse_model, parse_ontology
from adtrace.serialize import serialize_model, serialize_ontology, serialize_profile

from conftest import GOLDEN_DIR
from randgen import random_model_text, random_ontology_text
from structeq import model_key, ontology_key, profile_key


def test_corpus_model_matches_golden(corpus):
    m, _, _ = corpus
    golden = (GOLDEN_DIR / "model_canonical.adt").read_text(encoding="utf-8")
    assert serialize_model(m) == golden


def test_empty_model_canonical_form():
    assert serialize_model(parse_model("model m uses adp { }")) == "model m uses adp {\n}\n"


def test_model_round_trip_preserves_structure(corpus):
    m, _, _ = corpus
    text = serialize_model(m)
    m2 = parse_model(text)
    assert model_key(m2) == model_key(m)
    assert serialize_model(m2) == text


def test_ontology_round_trip_is_identity(corpus):
    _, _, o = corpus
    text = serialize_ontology(o)
    o2 = parse_ontology(text)
    assert ontology_key(o2) == ontology_key(o)
    assert serialize_ontology(o2) == text


def test_profile_round_trip_is_identity(corpus):
    _, p, _ = corpus
    text = serialize_profile(p)
    doc = parse_document(text)
    assert profile_key(doc.profiles[0]) == profile_key(p)
    assert serialize_profile(doc.profiles[0]) == text


def test_random_models_round_trip():
    rng = random.Random(41)
    for _ in range(60):
        original = parse_model(random_model_text(rng))
        canonical = serialize_model(original)
        reparsed = parse_model(canonical)
        assert model_key(reparsed) == model_key(original)
        assert serialize_model(reparsed) == canonical


def test_random_ontologies_round_trip():
    rng = random.Random(43)
    for _ in range(60):
        original = parse_ontology(random_ontology_text(rng))
        canonical = serialize_ontology(original)
        reparsed = parse_ontology(canonical)
        assert ontology_key(reparsed) == ontology_key(original)
        assert serialize_ontology(reparsed) == canonical


def test_string_escaping_round_trips():
    m = parse_model('model m uses p { artifact A1 : Hazard text "say \\"hi\\" \\\\ done" }')
    assert m.artifacts[0].text == 'say "hi" \\ done'
    m2 = parse_model(serialize_model(m))
    assert m2.artifacts[0].text == m.artifacts[0].text


def test_multiplicity_survives_round_trip():
    o = parse_ontology(
        "ontology ad { concept A concept B relation r : part_of ad.A -> ad.B [0..7] }"
    )
    o2 = parse_ontology(serialize_ontology(o))
    assert o2.relation_by_id("r").mult == o.relation_by_id("r").mult
