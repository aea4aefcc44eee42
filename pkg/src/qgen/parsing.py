"""Action-verb extraction from free question text.

Matching is dictionary-based on purpose: the compliance rules key on the
verbs themselves, so a noun use of "design" still counts as a hit and the
validator surfaces every hit for a human to override. Suffix stripping is
registry-gated — a suffix rule only applies when the stripped base is a
registered lemma — which keeps "during" from becoming "dur".
"""
from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Iterator

from .errors import EmptyText
from .taxonomy import BloomLevel, VerbRegistry

_TOKEN_RE = re.compile(r"\w+", re.UNICODE)

_VOWELS = set("aeiou")


@dataclass(frozen=True)
class TokenSpan:
    """One token of the source text with its position."""

    surface: str
    lemma: str
    index: int
    char_offset: int


@dataclass(frozen=True)
class VerbHit:
    """A token whose normalized lemma is a registered question verb."""

    span: TokenSpan
    levels: frozenset[BloomLevel]
    affective: bool

    @property
    def lemma(self) -> str:
        return self.span.lemma


def tokenize(text: str) -> list[TokenSpan]:
    """Split text on whitespace and punctuation boundaries.

    Surfaces keep their original case; the span lemma is the plain
    lowercase surface (inflection handling happens during extraction).
    Raises EmptyText when the input is empty or whitespace-only.
    """
    if not text or text.isspace():
        raise EmptyText("question text is empty")
    return [
        TokenSpan(surface=m.group(), lemma=m.group().lower(), index=i, char_offset=m.start())
        for i, m in enumerate(_TOKEN_RE.finditer(text))
    ]


def _suffix_candidates(word: str) -> Iterator[str]:
    # Rule order matters: plural restorations first, then -ing/-ed with
    # silent-e and doubled-consonant restoration.
    if word.endswith("ies") and len(word) > 3:
        yield word[:-3] + "y"
    if word.endswith("ied") and len(word) > 3:
        yield word[:-3] + "y"
    if word.endswith("es") and len(word) > 2:
        yield word[:-2]
    if word.endswith("s") and len(word) > 1:
        yield word[:-1]
    for suffix in ("ing", "ed"):
        if word.endswith(suffix) and len(word) > len(suffix) + 1:
            stem = word[: -len(suffix)]
            yield stem
            yield stem + "e"
            if len(stem) >= 2 and stem[-1] == stem[-2] and stem[-1] not in _VOWELS:
                yield stem[:-1]


def normalize_token(surface: str, registry: VerbRegistry) -> str:
    """Normalize a surface token to a registry lemma where possible.

    Lowercases, then tries the irregular-form map, then the suffix rules in
    order; the first candidate that is a registered lemma wins. When nothing
    matches, the plain lowercase form is returned unchanged.
    """
    word = surface.lower()
    irregular = registry.forms.get(word)
    if irregular is not None:
        return irregular
    for candidate in _suffix_candidates(word):
        if candidate in registry:
            return candidate
    return word


def extract_action_verbs(text: str, registry: VerbRegistry) -> list[VerbHit]:
    """Every token whose normalized lemma is registered, in token order."""
    hits: list[VerbHit] = []
    for span in tokenize(text):
        lemma = normalize_token(span.surface, registry)
        entry = registry.entry(lemma)
        if entry is None:
            continue
        hits.append(
            VerbHit(
                span=replace(span, lemma=lemma),
                levels=entry.levels,
                affective=entry.affective,
            )
        )
    return hits
