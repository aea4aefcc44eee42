import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import assert_disjoint_fillers, form_table, random_text
from qgen.errors import EmptyText
from qgen.parsing import extract_action_verbs, normalize_token, tokenize
from qgen.taxonomy import Taxonomy


def test_tokenize_simple():
    spans = tokenize("Write a code.")
    assert [s.surface for s in spans] == ["Write", "a", "code"]
    assert [s.char_offset for s in spans] == [0, 6, 8]
    assert [s.index for s in spans] == [0, 1, 2]
    assert [s.lemma for s in spans] == ["write", "a", "code"]


def test_tokenize_punctuation_boundaries():
    spans = tokenize("Design, implement, and evaluate")
    assert [s.surface for s in spans] == ["Design", "implement", "and", "evaluate"]


def test_tokenize_offsets_point_at_surfaces():
    text = "Compare   TCP, UDP; then  explain."
    for span in tokenize(text):
        assert text[span.char_offset:span.char_offset + len(span.surface)] == span.surface


@pytest.mark.parametrize("text", ["", "   ", "\n\t"])
def test_tokenize_empty(text):
    with pytest.raises(EmptyText):
        tokenize(text)


# surface -> lemma pairs verified by hand against the registered verb list
HAND_LEMMA_TABLE = [
    ("Writes", "write"),
    ("wrote", "write"),
    ("WRITTEN", "write"),
    ("design", "design"),
    ("designing", "design"),
    ("designed", "design"),
    ("drew", "draw"),
    ("drawn", "draw"),
    ("drawing", "draw"),
    ("chose", "choose"),
    ("chosen", "choose"),
    ("chooses", "choose"),
    ("classifies", "classify"),
    ("classified", "classify"),
    ("justified", "justify"),
    ("identifying", "identify"),
    ("discusses", "discuss"),
    ("sketches", "sketch"),
    ("using", "use"),
    ("used", "use"),
    ("creating", "create"),
    ("evaluated", "evaluate"),
    ("questions", "question"),
    ("schedules", "schedule"),
    ("judging", "judge"),
    # non-verbs stay untouched
    ("during", "during"),
    ("lines", "lines"),
    ("Seven", "seven"),
    ("appear", "appear"),
]


@pytest.mark.parametrize("surface,expected", HAND_LEMMA_TABLE)
def test_normalize_token(surface, expected, tax):
    assert normalize_token(surface, tax.registry) == expected


def test_normalize_idempotent_on_hand_table(tax):
    for surface, _ in HAND_LEMMA_TABLE:
        once = normalize_token(surface, tax.registry)
        assert normalize_token(once, tax.registry) == once


@given(st.text(min_size=1, max_size=20))
@settings(max_examples=200, deadline=None)
def test_normalize_idempotent_and_lowercase(surface):
    registry = Taxonomy.load().registry
    once = normalize_token(surface, registry)
    assert once == once.lower()
    assert normalize_token(once, registry) == once


def test_extract_worked_example(tax):
    hits = extract_action_verbs(
        "Write a code shows the output of seven lines on the screen", tax.registry
    )
    assert [(h.span.index, h.lemma) for h in hits] == [(0, "write")]


def test_extract_multiple_hits_in_order(tax):
    table = form_table(tax.registry.lemmas)
    text = "Explain and compare the HTTP request methods"
    expected = [
        (i, table[w.lower()])
        for i, w in enumerate(text.split())
        if w.lower() in table
    ]
    assert expected == [(0, "explain"), (2, "compare")]
    hits = extract_action_verbs(text, tax.registry)
    assert [(h.span.index, h.lemma) for h in hits] == expected


def test_extract_no_hits(tax):
    assert extract_action_verbs("Seven lines appear on the screen", tax.registry) == []


def test_extract_hits_are_registered_with_levels(tax):
    hits = extract_action_verbs("Drew diagrams while writing tests", tax.registry)
    assert [h.lemma for h in hits] == ["draw", "write", "test"]
    for hit in hits:
        assert hit.levels == tax.registry.levels(hit.lemma)
        assert hit.levels


def test_extract_agrees_with_bruteforce_oracle(tax):
    table = form_table(tax.registry.lemmas)
    assert_disjoint_fillers(table)
    rng = random.Random(1234)
    for _ in range(300):
        text, expected = random_text(rng, table)
        hits = extract_action_verbs(text, tax.registry)
        assert [(h.span.index, h.lemma) for h in hits] == expected


def test_hit_indices_strictly_increase(tax):
    rng = random.Random(99)
    table = form_table(tax.registry.lemmas)
    for _ in range(50):
        text, _ = random_text(rng, table)
        indices = [h.span.index for h in extract_action_verbs(text, tax.registry)]
        assert indices == sorted(set(indices))
