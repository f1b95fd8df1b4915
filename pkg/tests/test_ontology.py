import logging
import random

import pytest

from osdg.errors import DataError, InvalidSdg, MalformedHeader
from osdg.ontology import (
    KeywordMatch,
    Ontology,
    evidence_sdgs,
    load_ontology,
    make_term,
    match_keywords,
    tokenize,
)

from tests.conftest import ontology_from


def brute_force_matches(tokens, terms):
    """Naive O(tokens x terms) sliding-window oracle with the same
    longest-per-(sdg, start) rule."""
    best = {}
    for term in terms:
        k = len(term.phrase)
        for start in range(0, len(tokens) - k + 1):
            if tuple(tokens[start : start + k]) == term.phrase:
                key = (term.sdg, start)
                match = KeywordMatch(term.sdg, term.term_id, start, start + k)
                if key not in best or match.end_token > best[key].end_token:
                    best[key] = match
    return sorted(best.values(), key=lambda m: (m.start_token, m.sdg, m.end_token))


def test_tokenize_empty():
    assert tokenize("") == []


def test_tokenize_punctuation():
    assert [t.text for t in tokenize("Clean Water, and sanitation!")] == [
        "clean", "water", "and", "sanitation",
    ]


def test_tokenize_digits_and_hyphens():
    assert [t.text for t in tokenize("CO2-emissions 2030")] == ["co2", "emissions", "2030"]


def test_tokenize_offsets_point_into_source():
    text = "Água limpia — acceso universal."
    for tok in tokenize(text):
        assert text[tok.start : tok.end].casefold() == tok.text


def test_tokenize_underscore_separates():
    assert [t.text for t in tokenize("foo_bar")] == ["foo", "bar"]


def test_load_ontology(tmp_path):
    path = tmp_path / "ont.csv"
    path.write_text("sdg,term\n6,clean water\n7,solar energy\n", encoding="utf-8")
    ontology = load_ontology(path)
    assert ontology.terms[0].phrase == ("clean", "water")
    assert ontology.terms[0].term_id == "6:clean water"
    assert ontology.version == "ont"


def test_load_ontology_collapses_duplicates(tmp_path, caplog):
    path = tmp_path / "dup.csv"
    path.write_text("sdg,term\n7,solar energy\n7,solar energy\n", encoding="utf-8")
    with caplog.at_level(logging.WARNING):
        ontology = load_ontology(path)
    assert len(ontology.terms) == 1
    assert any("duplicate" in r.message for r in caplog.records)


@pytest.mark.parametrize(
    "row,error",
    [
        ("18,foo", InvalidSdg),
        ("6,", DataError),
        ("6,one two three four five six seven eight nine", DataError),
    ],
)
def test_load_ontology_bad_rows(tmp_path, row, error):
    path = tmp_path / "bad.csv"
    path.write_text(f"sdg,term\n{row}\n", encoding="utf-8")
    with pytest.raises(error):
        load_ontology(path)


def test_load_ontology_bad_header(tmp_path):
    path = tmp_path / "h.csv"
    path.write_text("goal,keyword\n6,water\n", encoding="utf-8")
    with pytest.raises(MalformedHeader):
        load_ontology(path)


def test_match_basic():
    ontology = ontology_from([(6, "clean water"), (6, "sanitation")])
    matches = match_keywords("access to clean water and sanitation", ontology)
    assert [(m.sdg, m.start_token, m.end_token) for m in matches] == [(6, 2, 4), (6, 5, 6)]


def test_match_empty_text():
    ontology = ontology_from([(6, "water")])
    assert match_keywords("", ontology) == []


def test_nested_same_start_keeps_longest():
    ontology = ontology_from([(6, "clean water"), (6, "clean"), (6, "water")])
    matches = match_keywords("clean water", ontology)
    # "clean water" wins at start 0; "water" is a distinct start so it stays
    assert [(m.term_id, m.start_token) for m in matches] == [
        ("6:clean water", 0),
        ("6:water", 1),
    ]


def test_overlaps_across_sdgs_all_reported():
    ontology = ontology_from([(6, "water supply"), (7, "supply networks")])
    matches = match_keywords("water supply networks", ontology)
    assert {(m.sdg, m.start_token) for m in matches} == {(6, 0), (7, 1)}


def test_word_boundary_no_substring_match():
    ontology = ontology_from([(6, "water")])
    assert match_keywords("waterfall waterways dewater", ontology) == []


def test_case_invariance():
    ontology = ontology_from([(6, "clean water"), (13, "climate change")])
    text = "Clean water policies respond to CLIMATE CHANGE."
    assert match_keywords(text, ontology) == match_keywords(text.upper(), ontology)


def test_match_is_deterministic():
    ontology = ontology_from([(6, "water"), (7, "energy"), (6, "water supply")])
    text = "water supply and energy and water"
    assert match_keywords(text, ontology) == match_keywords(text, ontology)


def test_brute_force_equivalence():
    rng = random.Random(1234)
    alphabet = ["water", "clean", "energy", "solar", "land", "use", "supply",
                "climate", "change", "urban", "areas", "x1", "x2", "x3"]
    for _ in range(150):
        n_terms = rng.randint(1, 20)
        terms = []
        seen = set()
        for _ in range(n_terms):
            k = rng.randint(1, 3)
            phrase = " ".join(rng.choices(alphabet, k=k))
            sdg = rng.randint(1, 16)
            if (sdg, phrase) in seen:
                continue
            seen.add((sdg, phrase))
            terms.append(make_term(sdg, phrase))
        ontology = Ontology(terms=terms, version="fuzz")
        tokens = rng.choices(alphabet, k=rng.randint(0, 200))
        text = " ".join(tokens)
        assert match_keywords(text, ontology) == brute_force_matches(tokens, terms)


def test_evidence_sdgs():
    matches = [
        KeywordMatch(6, "6:water", 0, 1),
        KeywordMatch(6, "6:sanitation", 4, 5),
        KeywordMatch(3, "3:health", 2, 3),
    ]
    assert evidence_sdgs([], 1) == set()
    assert evidence_sdgs(matches, 1) == {3, 6}
    assert evidence_sdgs(matches, 2) == {6}
    with pytest.raises(ValueError):
        evidence_sdgs(matches, 0)


def test_seed_ontology_loads_and_covers_all_sdgs(seed_ontology):
    assert seed_ontology.version == "seed-v1"
    assert seed_ontology.sdgs() == set(range(1, 17))
    per_sdg = {s: 0 for s in range(1, 17)}
    for term in seed_ontology.terms:
        per_sdg[term.sdg] += 1
    assert all(count >= 25 for count in per_sdg.values())
