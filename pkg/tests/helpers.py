"""Shared test oracles: forward inflection, corpus generation, fillers.

The inflector generates surface forms from a lemma (the opposite direction
of the parser's suffix stripping) so oracle and implementation stay
independent.
"""
from __future__ import annotations

import random

from qgen.taxonomy import IRREGULAR_FORMS

VOWELS = set("aeiou")

# None of these may be a surface form of any registered verb; asserted by
# assert_disjoint_fillers before the corpus tests run.
FILLER_WORDS = (
    "the", "a", "an", "of", "on", "in", "for", "about", "with", "and",
    "seven", "lines", "output", "screen", "page", "layout", "process",
    "html", "css", "table", "network", "security", "policy", "student",
    "team", "data", "model", "level", "topic", "course", "module",
    "system", "project", "method", "when", "how", "why", "each", "given",
    "result", "value", "code",
)


def inflections(lemma: str) -> set[str]:
    """All surface forms of a registered lemma: base, -s, -ing, past."""
    forms = {lemma}
    if lemma.endswith("y") and lemma[-2] not in VOWELS:
        forms.add(lemma[:-1] + "ies")
    elif lemma.endswith(("s", "x", "z", "ch", "sh")):
        forms.add(lemma + "es")
    else:
        forms.add(lemma + "s")
    if lemma.endswith("e") and not lemma.endswith("ee"):
        forms.add(lemma[:-1] + "ing")
    else:
        forms.add(lemma + "ing")
    irregular = {form for form, base in IRREGULAR_FORMS.items() if base == lemma}
    if irregular:
        forms |= irregular
    elif lemma.endswith("e"):
        forms.add(lemma + "d")
    elif lemma.endswith("y") and lemma[-2] not in VOWELS:
        forms.add(lemma[:-1] + "ied")
    else:
        forms.add(lemma + "ed")
    return forms


def form_table(lemmas) -> dict[str, str]:
    """surface form -> lemma for every registered lemma; must be unambiguous."""
    table: dict[str, str] = {}
    for lemma in lemmas:
        for form in inflections(lemma):
            assert table.get(form, lemma) == lemma, (
                f"form {form!r} is ambiguous: {table[form]!r} vs {lemma!r}"
            )
            table[form] = lemma
    return table


def assert_disjoint_fillers(table: dict[str, str]) -> None:
    overlap = set(FILLER_WORDS) & set(table)
    assert not overlap, f"filler words collide with verb forms: {sorted(overlap)}"


def random_text(rng: random.Random, table: dict[str, str]) -> tuple[str, list[tuple[int, str]]]:
    """A synthetic question plus the oracle's expected (index, lemma) hits."""
    forms = sorted(table)
    words = []
    expected = []
    for i in range(rng.randint(1, 14)):
        if rng.random() < 0.35:
            form = rng.choice(forms)
            expected.append((i, table[form]))
            word = form
        else:
            word = rng.choice(FILLER_WORDS)
        style = rng.random()
        if style < 0.15:
            word = word.upper()
        elif style < 0.5:
            word = word.capitalize()
        words.append(word)
    rendered = []
    for word in words:
        rendered.append(word + rng.choice(("", "", "", ",", ".", "?", ";")))
    return " ".join(rendered), expected
