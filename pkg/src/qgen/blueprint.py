"""Exam assembly and accreditation coverage reporting.

Bank questions are preferred over generated fillers, selection is stable in
bank order so repeated runs produce the same exam, and multi-target
questions count once per compliant target — the same per-pair convention
the bank validator uses.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .taxonomy import BloomLevel, NcaaaDomain, Taxonomy
from .validation import Question, ValidationReport, validate_question

# filler(subpoint_id, missing_count) -> candidate questions
Filler = Callable[[str, int], Sequence[Question]]


@dataclass(frozen=True)
class CourseSpec:
    code: str
    title: str
    topics: tuple[str, ...]
    covered_subpoints: tuple[str, ...]

    def default_topic(self) -> str:
        return self.topics[0] if self.topics else self.title


@dataclass(frozen=True)
class BlueprintRequirement:
    per_subpoint_counts: Mapping[str, int]

    def __post_init__(self):
        for subpoint, count in self.per_subpoint_counts.items():
            if count < 1:
                raise ValueError(
                    f"required count for {subpoint} must be >= 1, got {count}"
                )

    @property
    def total(self) -> int:
        return sum(self.per_subpoint_counts.values())


@dataclass(frozen=True)
class CoverageMatrix:
    by_subpoint: dict[str, int]
    by_bloom_level: dict[BloomLevel, int]
    by_table_domain: dict[NcaaaDomain, int]
    by_level_domain: dict[NcaaaDomain, int]
    uncovered: tuple[str, ...]
    total: int


@dataclass(frozen=True)
class AssembledExam:
    exam: tuple[Question, ...]
    matrix: CoverageMatrix
    deficits: dict[str, int] = field(default_factory=dict)


def coverage_matrix(reports: Iterable[ValidationReport], course: CourseSpec) -> CoverageMatrix:
    """Count compliant (question, subpoint) pairs across the course outcomes.

    Only reports whose target subpoint is covered by the course contribute;
    a report adds one to each of its matched levels.
    """
    covered = set(course.covered_subpoints)
    by_subpoint: dict[str, int] = {}
    by_bloom: dict[BloomLevel, int] = {}
    by_table: dict[NcaaaDomain, int] = {}
    by_level_domain: dict[NcaaaDomain, int] = {}
    for report in reports:
        if report.target_subpoint not in covered or not report.compliant:
            continue
        by_subpoint[report.target_subpoint] = by_subpoint.get(report.target_subpoint, 0) + 1
        for level in report.matched_levels:
            by_bloom[level] = by_bloom.get(level, 0) + 1
        if report.table_domain is not None:
            by_table[report.table_domain] = by_table.get(report.table_domain, 0) + 1
        if report.level_domain is not None:
            by_level_domain[report.level_domain] = by_level_domain.get(report.level_domain, 0) + 1
    uncovered = tuple(s for s in course.covered_subpoints if s not in by_subpoint)
    return CoverageMatrix(
        by_subpoint=by_subpoint,
        by_bloom_level=by_bloom,
        by_table_domain=by_table,
        by_level_domain=by_level_domain,
        uncovered=uncovered,
        total=sum(by_subpoint.values()),
    )


def reports_for_exam(exam: Sequence[Question], course: CourseSpec, tax: Taxonomy) -> list[ValidationReport]:
    """Per-pair reports for exam questions over the course's outcomes."""
    covered = set(course.covered_subpoints)
    reports = []
    for question in exam:
        for target in question.target_subpoints:
            if target in covered:
                reports.append(validate_question(question, target, tax))
    return reports


def assemble(
    course: CourseSpec,
    requirement: BlueprintRequirement,
    bank: Sequence[Question],
    tax: Taxonomy,
    filler: Filler | None = None,
) -> AssembledExam:
    """Fill each required slot from the bank first, then from the filler.

    A bank question is eligible for a slot only when it targets that
    subpoint and validates compliant for it, and is selected at most once.
    Non-compliant filler output is discarded. Remaining gaps are returned
    as deficits, never raised.
    """
    unknown = [s for s in requirement.per_subpoint_counts if s not in course.covered_subpoints]
    if unknown:
        raise ValueError(
            f"requirement names subpoints the course does not cover: {sorted(unknown)}"
        )

    exam: list[Question] = []
    selected_ids: set[str] = set()
    deficits: dict[str, int] = {}

    for subpoint in sorted(requirement.per_subpoint_counts):
        needed = requirement.per_subpoint_counts[subpoint]
        for question in bank:
            if needed == 0:
                break
            if question.id in selected_ids or subpoint not in question.target_subpoints:
                continue
            if validate_question(question, subpoint, tax).compliant:
                exam.append(question)
                selected_ids.add(question.id)
                needed -= 1
        if needed > 0 and filler is not None:
            for candidate in filler(subpoint, needed):
                if needed == 0:
                    break
                if candidate.id in selected_ids:
                    continue
                if validate_question(candidate, subpoint, tax).compliant:
                    exam.append(candidate)
                    selected_ids.add(candidate.id)
                    needed -= 1
        if needed > 0:
            deficits[subpoint] = needed

    matrix = coverage_matrix(reports_for_exam(exam, course, tax), course)
    return AssembledExam(exam=tuple(exam), matrix=matrix, deficits=deficits)


def offline_filler(course: CourseSpec, tax: Taxonomy, seed: int = 0) -> Filler:
    """Filler backed by the deterministic offline generator."""
    from .generation import GenerationRequest, offline_generate

    def fill(subpoint: str, count: int) -> list[Question]:
        request = GenerationRequest(
            course_code=course.code,
            topic=course.default_topic(),
            subpoint=subpoint,
            count=count,
        )
        return offline_generate(request, tax, seed)

    return fill
