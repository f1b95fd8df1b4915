import random
import re

import pytest

from osdg.errors import EmptySuggestion, EmptyText, UnsupportedLanguage
from osdg.pipeline import (
    AggregationConfig,
    Classifier,
    FeedbackStore,
    aggregate_chunks,
    chunk_document,
    input_digest,
    record_suggestion,
)
from osdg.translate import DictionaryBackend

from tests.conftest import manual_model_set, ontology_from

TRIGGERS = {3: "health", 4: "education", 5: "gender", 6: "water", 7: "solar", 13: "climate"}
TERMS = [
    (3, "health"),
    (4, "education"),
    (5, "gender"),
    (6, "water"),
    (7, "solar"),
    (13, "climate"),
]


@pytest.fixture
def classifier():
    return Classifier(manual_model_set(TRIGGERS), ontology_from(TERMS))


def sentences(n, stem="Sentence number {i} is right here"):
    return " ".join(f"{stem.format(i=i)}.".replace("{i}", str(i)) for i in range(1, n + 1))


# --- chunking -----------------------------------------------------------------


def test_chunk_empty():
    assert chunk_document("") == []
    assert chunk_document("   \n\n  ") == []


def test_chunk_single_short_paragraph():
    text = sentences(4)
    assert chunk_document(text) == [text]


def test_chunk_twelve_sentences_two_windows_of_six():
    from osdg.pipeline import _sentence_spans

    chunks = chunk_document(sentences(12))
    assert len(chunks) == 2
    assert [len(_sentence_spans(c)) for c in chunks] == [6, 6]


def test_chunk_window_sizes_stay_in_range():
    from osdg.pipeline import _sentence_spans

    for n in range(7, 40):
        chunks = chunk_document(sentences(n))
        sizes = [len(_sentence_spans(c)) for c in chunks]
        assert sum(sizes) == n
        assert all(3 <= s <= 6 for s in sizes)


def test_chunk_conservation():
    rng = random.Random(3)
    paragraphs = []
    for _ in range(12):
        n = rng.randint(1, 15)
        paragraphs.append(sentences(n, stem="Item {i} covers topic %d" % rng.randint(0, 99)))
    text = "\n\n".join(paragraphs)
    chunks = chunk_document(text)
    squash = lambda s: re.sub(r"\s+", "", s)
    assert squash("".join(chunks)) == squash(text)


def test_chunk_boundary_needs_uppercase_or_digit():
    # lowercase after the period: no sentence boundary
    text = "The assessment of approx. four programmes. Results follow."
    from osdg.pipeline import _sentence_spans

    spans = _sentence_spans(text)
    assert len(spans) == 2
    assert text[spans[0][0] : spans[0][1]] == "The assessment of approx. four programmes."


def test_chunk_digit_starts_sentence():
    from osdg.pipeline import _sentence_spans

    spans = _sentence_spans("Totals rose sharply. 2030 targets remain.")
    assert len(spans) == 2


# --- dual agreement -----------------------------------------------------------


def test_classify_requires_text(classifier):
    with pytest.raises(EmptyText):
        classifier.classify_text("   ")


def test_classify_rejects_unknown_language(classifier):
    with pytest.raises(UnsupportedLanguage):
        classifier.classify_text("text", "ja")


def test_final_labels_are_stage_intersection(classifier):
    # "water" fires both stages for SDG 6
    result = classifier.classify_text("Access to water matters.")
    assert result.final_labels == {6}
    assert result.most_relevant == 6
    assert result.per_sdg[6].probability >= 0.5
    assert result.per_sdg[6].keyword_matches


def test_high_probability_without_keyword_is_dropped():
    # model for SDG 7 triggers on "sunlight", but the ontology only knows "solar"
    model_set = manual_model_set({7: "sunlight"})
    clf = Classifier(model_set, ontology_from([(7, "solar")]))
    result = clf.classify_text("Abundant sunlight here.")
    assert result.per_sdg[7].probability > 0.9
    assert 7 not in result.final_labels
    assert result.final_labels == frozenset()
    assert result.most_relevant is None


def test_keyword_without_probability_is_dropped():
    # ontology hit for 13, but the model trigger token is absent
    result = Classifier(
        manual_model_set({13: "warming"}), ontology_from([(13, "climate")])
    ).classify_text("climate appears but not the trigger")
    assert result.per_sdg[13].keyword_matches
    assert result.per_sdg[13].probability < 0.5
    assert 13 not in result.final_labels


def test_most_relevant_tie_breaks_to_lower_sdg():
    model_set = manual_model_set({6: "shared", 7: "shared"})
    clf = Classifier(model_set, ontology_from([(6, "shared"), (7, "shared")]))
    result = clf.classify_text("shared trigger token")
    assert result.per_sdg[6].probability == result.per_sdg[7].probability
    assert result.final_labels == {6, 7}
    assert result.most_relevant == 6


def test_input_hash_is_whitespace_insensitive():
    assert input_digest("water  is\nvital ") == input_digest("water is vital")
    assert input_digest("water is vital") != input_digest("water is not vital")


def test_english_passthrough_never_touches_translator():
    backend = DictionaryBackend.bundled()
    clf = Classifier(manual_model_set(TRIGGERS), ontology_from(TERMS), translator=backend)
    direct = Classifier(manual_model_set(TRIGGERS), ontology_from(TERMS))
    text = "Access to water is essential."
    a = clf.classify_text(text, "en")
    b = direct.classify_text(text)
    assert backend.calls == 0
    assert a == b


def test_spanish_via_stub_equals_english_direct():
    backend = DictionaryBackend.bundled()
    clf = Classifier(manual_model_set(TRIGGERS), ontology_from(TERMS), translator=backend)
    spanish = clf.classify_text("Acceso a agua limpia y saneamiento.", "es")
    english = clf.classify_text("Access to clean water and sanitation.", "en")
    assert spanish.translated and not english.translated
    assert spanish.final_labels == english.final_labels == {6}
    assert spanish.per_sdg[6].probability == english.per_sdg[6].probability


def test_dual_agreement_fuzz_small(classifier):
    from osdg.models import ml_labels, predict_proba
    from osdg.ontology import evidence_sdgs, match_keywords

    rng = random.Random(99)
    words = list(TRIGGERS.values()) + ["noise", "words", "about", "nothing", "policy"]
    for _ in range(300):
        text = " ".join(rng.choices(words, k=rng.randint(1, 30)))
        result = classifier.classify_text(text)
        probs = predict_proba(classifier.model_set, text)
        model_stage = ml_labels(probs, classifier.model_set)
        keyword_stage = evidence_sdgs(match_keywords(text, classifier.ontology), 1)
        assert result.final_labels == model_stage & keyword_stage
        assert result.final_labels <= model_stage
        assert result.final_labels <= keyword_stage


def test_translator_errors_surface_as_typed(classifier):
    from osdg.errors import TranslationError

    with pytest.raises(TranslationError):
        classifier.classify_text("hola mundo", "es")  # no translator configured


# --- document aggregation -------------------------------------------------------


def related_paragraph(i, token="water"):
    return f"Community {i} benefits. Access to {token} improved. Works continue."


def unrelated_paragraph(i):
    return f"Quarterly earnings grew {i} percent. Stocks rose. Markets stayed calm."


def build_document(related_specs, unrelated_count):
    paragraphs = [related_paragraph(i, token) for i, token in enumerate(related_specs)]
    paragraphs += [unrelated_paragraph(i) for i in range(unrelated_count)]
    return "\n\n".join(paragraphs)


def test_document_distribution_example(classifier):
    # 20 related of 100 chunks; SDG4 in 12, SDG5 in 6, SDG13 in 2
    specs = ["education"] * 12 + ["gender"] * 6 + ["climate"] * 2
    doc = build_document(specs, 80)
    result = classifier.classify_document(doc)
    assert result.chunk_count == 100
    assert result.related_chunk_count == 20
    assert result.distribution == pytest.approx({4: 0.6, 5: 0.3, 13: 0.1})


def test_document_share_below_ten_percent_dropped(classifier):
    specs = ["education"] * 19 + ["climate"] * 1
    doc = build_document(specs, 80)
    result = classifier.classify_document(doc)
    assert result.distribution == pytest.approx({4: 1.0})


def test_document_relevance_below_fifteen_percent_empty(classifier):
    doc = build_document(["education"] * 14, 86)
    result = classifier.classify_document(doc)
    assert result.chunk_count == 100 and result.related_chunk_count == 14
    assert result.distribution == {}


def test_document_empty_rejected(classifier):
    with pytest.raises(EmptyText):
        classifier.classify_document("   ")


def test_aggregate_boundaries_inclusive():
    def fake_result(labels):
        from osdg.pipeline import ClassificationResult

        return ClassificationResult(
            input_hash="x",
            language="en",
            translated=False,
            per_sdg={},
            final_labels=frozenset(labels),
            most_relevant=min(labels) if labels else None,
        )

    config = AggregationConfig()
    # related fraction boundary: 14/100 out, 15/100 in, 16/100 in
    for related, expect_nonempty in [(14, False), (15, True), (16, True)]:
        results = [fake_result({4}) for _ in range(related)]
        results += [fake_result(set()) for _ in range(100 - related)]
        doc = aggregate_chunks(results, config)
        assert bool(doc.distribution) == expect_nonempty
        assert doc.related_fraction == pytest.approx(related / 100)
    # share boundary over 100 related chunks: 0.09 out, 0.10 in, 0.11 in
    for minority, expect_kept in [(9, False), (10, True), (11, True)]:
        results = [fake_result({13}) for _ in range(minority)]
        results += [fake_result({4}) for _ in range(100 - minority)]
        doc = aggregate_chunks(results, config)
        assert (13 in doc.distribution) == expect_kept
        assert sum(doc.distribution.values()) == pytest.approx(1.0, abs=1e-9)


def test_aggregate_multi_label_chunk_counts_once_per_sdg():
    from osdg.pipeline import ClassificationResult

    def fake(labels):
        return ClassificationResult("x", "en", False, {}, frozenset(labels), None)

    results = [fake({4, 5}) for _ in range(10)] + [fake({4}) for _ in range(10)]
    doc = aggregate_chunks(results)
    # shares pre-normalization: 4 -> 1.0, 5 -> 0.5; renormalized to 2/3, 1/3
    assert doc.distribution == pytest.approx({4: 2 / 3, 5: 1 / 3})


def test_renormalization_preserves_order():
    from osdg.pipeline import ClassificationResult

    def fake(labels):
        return ClassificationResult("x", "en", False, {}, frozenset(labels), None)

    results = [fake({4}) for _ in range(50)] + [fake({5}) for _ in range(41)]
    results += [fake({13}) for _ in range(9)]  # 9% share dropped
    doc = aggregate_chunks(results)
    assert 13 not in doc.distribution
    assert doc.distribution[4] > doc.distribution[5]


# --- suggestions -----------------------------------------------------------------


def test_record_suggestion_ids_monotonic(tmp_path):
    store = FeedbackStore(tmp_path / "suggestions.jsonl")
    first = record_suggestion(store, input_digest("t1"), "t1", {3})
    second = record_suggestion(store, input_digest("t2"), "t2", {4, 5}, note="check this")
    assert (first, second) == (1, 2)
    records = store.records()
    assert records[1]["suggested_sdgs"] == [4, 5]
    assert records[1]["note"] == "check this"


def test_record_suggestion_persists_across_reopen(tmp_path):
    path = tmp_path / "suggestions.jsonl"
    record_suggestion(FeedbackStore(path), "h", "text", {1})
    assert record_suggestion(FeedbackStore(path), "h", "text", {2}) == 2


def test_record_suggestion_rejects_empty_set(tmp_path):
    store = FeedbackStore(tmp_path / "s.jsonl")
    with pytest.raises(EmptySuggestion):
        record_suggestion(store, "h", "text", set())


def test_suggestions_never_affect_classification(tmp_path, classifier):
    text = "Access to water is essential."
    before = classifier.classify_text(text)
    store = FeedbackStore(tmp_path / "s.jsonl")
    record_suggestion(store, input_digest(text), text, {9})
    after = classifier.classify_text(text)
    assert before == after
