import json
from pathlib import Path

import pytest

from xalgo import classify, extract_features, load_concepts, match_concept
from xalgo.errors import EmptyQuestion, Unclassifiable, ValidationError
from xalgo.qparse import (
    SIMILARITY_FLOOR,
    QuestionType,
    Vocabulary,
)

CORPUS = json.loads(
    (Path(__file__).parent / "corpus" / "paper_questions.json").read_text()
)["questions"]


@pytest.fixture
def vocab(session382):
    return session382.vocabulary()


def test_extract_why_did_8_and_2_move(vocab):
    f = extract_features("Why did 8 and 2 move?", vocab)
    assert f.interrogative_word == "why"
    assert f.time_shift.tense == "past"
    assert [(e.kind, e.name) for e in f.objects] == [("element", "8"), ("element", "2")]
    assert f.values == [8, 2]
    assert f.action == "move"


def test_extract_confirmation_with_anchor(vocab):
    f = extract_features("Is storeIndex incremented after swap?", vocab)
    assert f.interrogative_word == "yesNoAux"
    assert f.time_shift.tense == "future"
    assert f.time_shift.anchor.relation == "after"
    assert f.time_shift.anchor.action == "swap"
    assert any(e.kind == "variable" and e.name == "storeIndex" for e in f.objects)
    assert f.action == "increment"


def test_extract_empty_question(vocab):
    with pytest.raises(EmptyQuestion):
        extract_features("   ", vocab)


def test_extract_why_not_alternative(vocab):
    f = extract_features("Why not taking the highway?", vocab)
    assert f.interrogative_word == "whyNot"
    assert f.alternative == "taking the highway"


def test_extract_what_if(vocab):
    f = extract_features("What if we pick the last element?", vocab)
    assert f.interrogative_word == "whatIf"
    assert f.alternative == "we pick the last element"


def test_unresolved_mentions_kept(vocab):
    f = extract_features("Why did 99 move?", vocab)
    assert "99" in f.unknown_mentions
    assert f.values == [99]
    assert all(e.name != "99" for e in f.objects)


def test_vocabulary_monotonicity(vocab):
    q = "Is storeIndex bigger than 8?"
    before = extract_features(q, Vocabulary(variables={"storeIndex"}, elements=set()))
    after = extract_features(
        q, Vocabulary(variables={"storeIndex", "pivot"}, elements={8})
    )
    names_before = {(e.kind, e.name) for e in before.objects}
    names_after = {(e.kind, e.name) for e in after.objects}
    assert names_before <= names_after


# ---------------------------------------------------------------------------
# concept table


def test_concept_exact_lookup(concept_kb, vocab):
    f = extract_features("What is a pivot?", vocab)
    hit = match_concept(f, concept_kb)
    assert hit is not None and hit.entry.term == "pivot" and hit.exact


def test_concept_nearest_match(concept_kb, vocab):
    f = extract_features("Does the pivot always have to be number in the middle?", vocab)
    hit = match_concept(f, concept_kb)
    assert hit is not None and hit.entry.term == "pivot" and not hit.exact
    assert hit.score >= SIMILARITY_FLOOR


def test_concept_rejects_state_question(concept_kb, vocab):
    f = extract_features("Why did 8 and 2 move?", vocab)
    assert match_concept(f, concept_kb) is None


def test_concept_kb_uniqueness_enforced():
    with pytest.raises(ValidationError):
        load_concepts(
            {
                "concepts": [
                    {"term": "pivot", "answer": "x"},
                    {"term": "Pivot", "answer": "y"},
                ]
            }
        )


# ---------------------------------------------------------------------------
# classification


def classify_text(text, kb, vocab):
    features = extract_features(text, vocab)
    hit = match_concept(features, kb)
    return classify(features, hit, vocab)


def test_corpus_classifies_to_stated_categories(concept_kb, vocab):
    mismatches = []
    for item in CORPUS:
        try:
            got = sorted(t.value for t in classify_text(item["text"], concept_kb, vocab))
        except Unclassifiable:
            got = "refuse"
        expected = item["expected"] if item["expected"] == "refuse" else sorted(item["expected"])
        if got != expected:
            mismatches.append((item["text"], expected, got))
    assert not mismatches, mismatches


def test_why_gives_merged_pair(concept_kb, vocab):
    assert classify_text("Why did 2 and 8 move", concept_kb, vocab) == {
        QuestionType.CAUSALITY,
        QuestionType.RATIONALE,
    }


def test_concept_never_co_occurs(concept_kb, vocab):
    for item in CORPUS:
        if item["expected"] == "refuse":
            continue
        try:
            types = classify_text(item["text"], concept_kb, vocab)
        except Unclassifiable:
            continue
        if QuestionType.CONCEPT in types:
            assert types == {QuestionType.CONCEPT}


def test_multi_label_only_causality_rationale(concept_kb, vocab):
    for item in CORPUS:
        if item["expected"] == "refuse":
            continue
        types = classify_text(item["text"], concept_kb, vocab)
        if len(types) > 1:
            assert types == {QuestionType.CAUSALITY, QuestionType.RATIONALE}


def test_how_routes_to_description(concept_kb, vocab):
    types = classify_text("How did 8 and 2 move?", concept_kb, vocab)
    assert types == {QuestionType.DESCRIPTION}


def test_no_interrogative_raises(concept_kb, vocab):
    f = extract_features("the array sorted order", vocab)
    with pytest.raises(Unclassifiable):
        classify(f, None, vocab)


def test_off_topic_question_refused(concept_kb, vocab):
    with pytest.raises(Unclassifiable):
        classify_text("What should I do?", concept_kb, vocab)


def test_determinism(concept_kb, vocab):
    for item in CORPUS:
        if item["expected"] == "refuse":
            continue
        first = classify_text(item["text"], concept_kb, vocab)
        second = classify_text(item["text"], concept_kb, vocab)
        assert first == second
