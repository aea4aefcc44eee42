"""Question compliance checking and deterministic repair.

A question is compliant for a subpoint when its primary verb — the earliest
extracted verb that belongs to the subpoint's approved row — exists. Both
the outcome-table domain and the verb-level domain are always reported,
because the two mappings disagree for some subpoints and neither should be
silently preferred.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace

from .errors import EmptyText, NoVerbFound, QgenError, UnknownSubpoint
from .parsing import VerbHit, extract_action_verbs
from .taxonomy import BloomLevel, NcaaaDomain, SubpointSpec, Taxonomy, ncaaa_domain_for_level

QUESTION_SOURCES = ("human", "generated", "repaired")


@dataclass(frozen=True)
class Question:
    id: str
    text: str
    target_subpoints: tuple[str, ...]
    source: str = "human"
    topic: str | None = None
    created_at: str | None = None


@dataclass(frozen=True)
class SubpointTally:
    compliant: int = 0
    non_compliant: int = 0


@dataclass(frozen=True)
class ValidationReport:
    question_id: str
    target_subpoint: str
    compliant: bool
    primary_verb: VerbHit | None
    all_hits: tuple[VerbHit, ...]
    matched_levels: frozenset[BloomLevel]
    table_domain: NcaaaDomain | None
    level_domain: NcaaaDomain | None
    suggestions: tuple[str, ...]
    diagnostics: tuple[str, ...] = ()


def default_question_id(text: str) -> str:
    """Stable id for ad-hoc question text (service requests without an id)."""
    return "q-" + hashlib.sha256(text.encode("utf-8")).hexdigest()[:10]


def _matched_levels(hit: VerbHit, subpoint: SubpointSpec) -> frozenset[BloomLevel]:
    if subpoint.any_level:
        return hit.levels
    return hit.levels & subpoint.bloom_levels


def _level_domain(levels: frozenset[BloomLevel]) -> NcaaaDomain | None:
    if not levels:
        return None
    # Mixed-domain level sets are only reachable through extensions; report
    # the domain of the most complex matched level.
    top = max(levels, key=lambda lvl: lvl.ordinal)
    return ncaaa_domain_for_level(top)


def validate_question(question: Question, subpoint_id: str, tax: Taxonomy) -> ValidationReport:
    """Judge one question against one subpoint.

    Raises UnknownSubpoint for targets outside the catalog and EmptyText for
    blank question text.
    """
    subpoint = tax.subpoint(subpoint_id)
    hits = tuple(extract_action_verbs(question.text, tax.registry))
    row = set(subpoint.verb_row)

    primary = next((h for h in hits if h.lemma in row), None)
    compliant = primary is not None
    if primary is None and hits:
        primary = hits[0]

    diagnostics: list[str] = []
    if question.target_subpoints and subpoint_id not in question.target_subpoints:
        diagnostics.append(
            f"target {subpoint_id} is not among the question's declared targets "
            "(hypothetical validation)"
        )
    if not hits:
        diagnostics.append("no registered action verb found in the question text")
    elif not compliant:
        diagnostics.append(
            f"no approved verb for {subpoint_id} found; first action verb is "
            f"'{hits[0].lemma}'"
        )
    if subpoint.any_level:
        diagnostics.append(
            f"subpoint {subpoint_id} accepts any approved verb level; reporting "
            "the verb's own levels"
        )

    matched = _matched_levels(primary, subpoint) if compliant and primary else frozenset()
    level_domain = _level_domain(matched)
    if level_domain is not None and level_domain != subpoint.ncaaa_domain:
        diagnostics.append(
            f"outcome-table domain ({subpoint.ncaaa_domain.label}) and verb-level "
            f"domain ({level_domain.label}) disagree for this target"
        )

    hit_lemmas = {h.lemma for h in hits}
    suggestions = tuple(v for v in subpoint.verb_row if v not in hit_lemmas)

    return ValidationReport(
        question_id=question.id,
        target_subpoint=subpoint_id,
        compliant=compliant,
        primary_verb=primary,
        all_hits=hits,
        matched_levels=matched,
        table_domain=subpoint.ncaaa_domain,
        level_domain=level_domain,
        suggestions=suggestions,
        diagnostics=tuple(diagnostics),
    )


def validate_text(text: str, subpoint_id: str, tax: Taxonomy, question_id: str | None = None) -> ValidationReport:
    """Validate raw question text (used by the service and ad-hoc callers)."""
    question = Question(
        id=question_id or default_question_id(text),
        text=text,
        target_subpoints=(subpoint_id,),
    )
    return validate_question(question, subpoint_id, tax)


def suggest_repair(question: Question, subpoint_id: str, tax: Taxonomy) -> Question:
    """Deterministically swap the primary verb for the row's first lemma.

    Compliant questions come back unchanged. Raises NoVerbFound when the
    text contains no registered verb to replace.
    """
    report = validate_question(question, subpoint_id, tax)
    if report.compliant:
        return question
    if report.primary_verb is None:
        raise NoVerbFound(
            f"question {question.id!r} has no registered action verb to replace"
        )
    target = report.primary_verb.span
    replacement = tax.verbs_for_subpoint(subpoint_id)[0]
    if target.surface[:1].isupper():
        replacement = replacement.capitalize()
    text = question.text
    repaired = text[: target.char_offset] + replacement + text[target.char_offset + len(target.surface):]
    return replace(question, text=repaired, source="repaired")


@dataclass(frozen=True)
class BankSummary:
    per_subpoint: dict[str, SubpointTally] = field(default_factory=dict)

    @property
    def total_compliant(self) -> int:
        return sum(t.compliant for t in self.per_subpoint.values())

    @property
    def total_non_compliant(self) -> int:
        return sum(t.non_compliant for t in self.per_subpoint.values())


def _error_report(question: Question, subpoint_id: str, error: QgenError) -> ValidationReport:
    return ValidationReport(
        question_id=question.id,
        target_subpoint=subpoint_id,
        compliant=False,
        primary_verb=None,
        all_hits=(),
        matched_levels=frozenset(),
        table_domain=None,
        level_domain=None,
        suggestions=(),
        diagnostics=(f"{type(error).__name__}: {error}",),
    )


def validate_bank(
    bank: list[Question],
    tax: Taxonomy,
    subpoint_id: str | None = None,
) -> tuple[list[ValidationReport], BankSummary]:
    """One report per (question, target) pair; never aborts on a bad record.

    When subpoint_id is given, only pairs targeting it are validated.
    """
    reports: list[ValidationReport] = []
    tallies: dict[str, SubpointTally] = {}
    for question in bank:
        for target in question.target_subpoints:
            if subpoint_id is not None and target != subpoint_id:
                continue
            try:
                report = validate_question(question, target, tax)
            except (UnknownSubpoint, EmptyText) as exc:
                report = _error_report(question, target, exc)
            reports.append(report)
            tally = tallies.setdefault(target, SubpointTally())
            if report.compliant:
                tallies[target] = replace(tally, compliant=tally.compliant + 1)
            else:
                tallies[target] = replace(tally, non_compliant=tally.non_compliant + 1)
    return reports, BankSummary(per_subpoint=tallies)
