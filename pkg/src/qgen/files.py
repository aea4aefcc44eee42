"""File schemas: bank.v1 (JSON lines), course.v1, report.v1, taxonomy-ext.v1
and client-script.v1 (single JSON documents).

Serialization is canonical — sorted keys, compact separators, UTF-8, one
trailing newline — so serialize -> parse -> serialize is byte-stable.
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .blueprint import CourseSpec, CoverageMatrix
from .errors import SchemaError, UnknownSubpoint
from .parsing import TokenSpan, VerbHit
from .taxonomy import BloomLevel, NcaaaDomain, Taxonomy
from .validation import QUESTION_SOURCES, Question, ValidationReport

BANK_SCHEMA = "bank.v1"
COURSE_SCHEMA = "course.v1"
REPORT_SCHEMA = "report.v1"
EXTENSION_SCHEMA = "taxonomy-ext.v1"
CLIENT_SCRIPT_SCHEMA = "client-script.v1"


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def _require(doc: Mapping, key: str, kind: type, context: str) -> Any:
    if key not in doc:
        raise SchemaError(f"{context}: missing required field {key!r}")
    value = doc[key]
    if not isinstance(value, kind):
        raise SchemaError(f"{context}: field {key!r} must be {kind.__name__}")
    return value


def _string_list(doc: Mapping, key: str, context: str) -> list[str]:
    value = _require(doc, key, list, context)
    if not all(isinstance(item, str) for item in value):
        raise SchemaError(f"{context}: field {key!r} must be a list of strings")
    return value


def _check_schema_tag(doc: Mapping, expected: str, context: str) -> None:
    tag = doc.get("schema")
    if tag != expected:
        raise SchemaError(f"{context}: expected schema {expected!r}, got {tag!r}")


def _level_labels(levels: Iterable[BloomLevel]) -> list[str]:
    return [lvl.label for lvl in sorted(levels, key=lambda l: l.ordinal)]


# ---------------------------------------------------------------------------
# Questions / bank.v1

def question_to_dict(question: Question) -> dict:
    record = {
        "id": question.id,
        "text": question.text,
        "targets": list(question.target_subpoints),
        "source": question.source,
        "created_at": question.created_at,
    }
    if question.topic is not None:
        record["topic"] = question.topic
    return record


def question_from_dict(record: Mapping, context: str = "bank record") -> Question:
    if not isinstance(record, Mapping):
        raise SchemaError(f"{context}: expected an object")
    qid = _require(record, "id", str, context)
    text = _require(record, "text", str, context)
    if not text.strip():
        raise SchemaError(f"{context}: question {qid!r} has empty text")
    targets = _string_list(record, "targets", context)
    if not targets:
        raise SchemaError(f"{context}: question {qid!r} has no target subpoints")
    source = _require(record, "source", str, context)
    if source not in QUESTION_SOURCES:
        raise SchemaError(f"{context}: invalid source {source!r}")
    topic = record.get("topic")
    if topic is not None and not isinstance(topic, str):
        raise SchemaError(f"{context}: topic must be a string")
    created_at = record.get("created_at")
    if created_at is not None and not isinstance(created_at, str):
        raise SchemaError(f"{context}: created_at must be a string timestamp")
    return Question(
        id=qid,
        text=text,
        target_subpoints=tuple(targets),
        source=source,
        topic=topic,
        created_at=created_at,
    )


def bank_to_text(questions: Sequence[Question]) -> str:
    seen: set[str] = set()
    lines = []
    for question in questions:
        if question.id in seen:
            raise SchemaError(f"duplicate question id {question.id!r} in bank")
        seen.add(question.id)
        lines.append(canonical_json(question_to_dict(question)))
    return "\n".join(lines) + ("\n" if lines else "")


def bank_from_text(text: str) -> list[Question]:
    questions = []
    seen: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"bank line {lineno}: invalid JSON ({exc.msg})") from None
        question = question_from_dict(record, context=f"bank line {lineno}")
        if question.id in seen:
            raise SchemaError(f"bank line {lineno}: duplicate question id {question.id!r}")
        seen.add(question.id)
        questions.append(question)
    return questions


def load_bank(path: str | Path) -> list[Question]:
    return bank_from_text(Path(path).read_text(encoding="utf-8"))


def save_bank(path: str | Path, questions: Sequence[Question]) -> None:
    Path(path).write_text(bank_to_text(questions), encoding="utf-8")


# ---------------------------------------------------------------------------
# course.v1

def course_to_dict(course: CourseSpec) -> dict:
    return {
        "schema": COURSE_SCHEMA,
        "code": course.code,
        "title": course.title,
        "topics": list(course.topics),
        "outcomes": list(course.covered_subpoints),
    }


def course_from_dict(doc: Mapping, tax: Taxonomy, context: str = "course document") -> CourseSpec:
    if not isinstance(doc, Mapping):
        raise SchemaError(f"{context}: expected an object")
    _check_schema_tag(doc, COURSE_SCHEMA, context)
    code = _require(doc, "code", str, context)
    title = _require(doc, "title", str, context)
    topics = _string_list(doc, "topics", context)
    outcomes = _string_list(doc, "outcomes", context)
    if not outcomes:
        raise SchemaError(f"{context}: outcomes list is empty")
    if len(set(outcomes)) != len(outcomes):
        raise SchemaError(f"{context}: duplicate outcomes")
    for outcome in outcomes:
        if outcome not in tax.subpoints:
            raise UnknownSubpoint(f"{context}: outcome {outcome!r} is not in the catalog")
    return CourseSpec(code=code, title=title, topics=tuple(topics),
                      covered_subpoints=tuple(outcomes))


def parse_course(text: str, tax: Taxonomy) -> CourseSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"course document: invalid JSON ({exc.msg})") from None
    return course_from_dict(doc, tax)


def serialize_course(course: CourseSpec) -> str:
    return canonical_json(course_to_dict(course)) + "\n"


def load_course(path: str | Path, tax: Taxonomy) -> CourseSpec:
    return parse_course(Path(path).read_text(encoding="utf-8"), tax)


# ---------------------------------------------------------------------------
# Validation reports / coverage matrices

def _hit_to_dict(hit: VerbHit) -> dict:
    return {
        "surface": hit.span.surface,
        "lemma": hit.span.lemma,
        "index": hit.span.index,
        "char_offset": hit.span.char_offset,
        "levels": _level_labels(hit.levels),
        "affective": hit.affective,
    }


def _hit_from_dict(record: Mapping, context: str) -> VerbHit:
    span = TokenSpan(
        surface=_require(record, "surface", str, context),
        lemma=_require(record, "lemma", str, context),
        index=_require(record, "index", int, context),
        char_offset=_require(record, "char_offset", int, context),
    )
    levels = frozenset(BloomLevel.from_label(l) for l in _string_list(record, "levels", context))
    return VerbHit(span=span, levels=levels, affective=_require(record, "affective", bool, context))


def report_to_dict(report: ValidationReport) -> dict:
    return {
        "question_id": report.question_id,
        "target_subpoint": report.target_subpoint,
        "compliant": report.compliant,
        "primary_verb": _hit_to_dict(report.primary_verb) if report.primary_verb else None,
        "all_hits": [_hit_to_dict(h) for h in report.all_hits],
        "matched_levels": _level_labels(report.matched_levels),
        "table_domain": report.table_domain.label if report.table_domain else None,
        "level_domain": report.level_domain.label if report.level_domain else None,
        "suggestions": list(report.suggestions),
        "diagnostics": list(report.diagnostics),
    }


def report_from_dict(record: Mapping, context: str = "report record") -> ValidationReport:
    if not isinstance(record, Mapping):
        raise SchemaError(f"{context}: expected an object")
    primary = record.get("primary_verb")
    table_domain = record.get("table_domain")
    level_domain = record.get("level_domain")
    return ValidationReport(
        question_id=_require(record, "question_id", str, context),
        target_subpoint=_require(record, "target_subpoint", str, context),
        compliant=_require(record, "compliant", bool, context),
        primary_verb=_hit_from_dict(primary, context) if primary else None,
        all_hits=tuple(_hit_from_dict(h, context) for h in record.get("all_hits", [])),
        matched_levels=frozenset(
            BloomLevel.from_label(l) for l in _string_list(record, "matched_levels", context)
        ),
        table_domain=NcaaaDomain.from_label(table_domain) if table_domain else None,
        level_domain=NcaaaDomain.from_label(level_domain) if level_domain else None,
        suggestions=tuple(_string_list(record, "suggestions", context)),
        diagnostics=tuple(_string_list(record, "diagnostics", context)),
    )


def matrix_to_dict(matrix: CoverageMatrix) -> dict:
    return {
        "by_subpoint": dict(sorted(matrix.by_subpoint.items())),
        "by_bloom_level": {
            lvl.label: n
            for lvl, n in sorted(matrix.by_bloom_level.items(), key=lambda kv: kv[0].ordinal)
        },
        "by_table_domain": {
            d.label: n for d, n in sorted(matrix.by_table_domain.items(), key=lambda kv: kv[0].label)
        },
        "by_level_domain": {
            d.label: n for d, n in sorted(matrix.by_level_domain.items(), key=lambda kv: kv[0].label)
        },
        "uncovered": list(matrix.uncovered),
        "total": matrix.total,
    }


def matrix_from_dict(record: Mapping, context: str = "matrix") -> CoverageMatrix:
    if not isinstance(record, Mapping):
        raise SchemaError(f"{context}: expected an object")
    return CoverageMatrix(
        by_subpoint=dict(_require(record, "by_subpoint", dict, context)),
        by_bloom_level={
            BloomLevel.from_label(k): v
            for k, v in _require(record, "by_bloom_level", dict, context).items()
        },
        by_table_domain={
            NcaaaDomain.from_label(k): v
            for k, v in _require(record, "by_table_domain", dict, context).items()
        },
        by_level_domain={
            NcaaaDomain.from_label(k): v
            for k, v in _require(record, "by_level_domain", dict, context).items()
        },
        uncovered=tuple(_string_list(record, "uncovered", context)),
        total=_require(record, "total", int, context),
    )


# ---------------------------------------------------------------------------
# report.v1

def build_report_doc(
    course: CourseSpec,
    reports: Sequence[ValidationReport],
    matrix: CoverageMatrix,
    generated_at: str,
) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "course": {
            "code": course.code,
            "title": course.title,
            "topics": list(course.topics),
            "outcomes": list(course.covered_subpoints),
        },
        "reports": [report_to_dict(r) for r in reports],
        "matrix": matrix_to_dict(matrix),
        "generated_at": generated_at,
    }


def parse_report_doc(text: str, tax: Taxonomy) -> tuple[CourseSpec, list[ValidationReport], CoverageMatrix, str]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"report document: invalid JSON ({exc.msg})") from None
    if not isinstance(doc, Mapping):
        raise SchemaError("report document: expected an object")
    _check_schema_tag(doc, REPORT_SCHEMA, "report document")
    course_doc = dict(_require(doc, "course", dict, "report document"))
    course_doc["schema"] = COURSE_SCHEMA
    course = course_from_dict(course_doc, tax, context="report course")
    reports = [
        report_from_dict(r, context=f"report entry {i}")
        for i, r in enumerate(_require(doc, "reports", list, "report document"))
    ]
    matrix = matrix_from_dict(_require(doc, "matrix", dict, "report document"))
    generated_at = _require(doc, "generated_at", str, "report document")
    return course, reports, matrix, generated_at


def serialize_report(doc: Mapping) -> str:
    return canonical_json(doc) + "\n"


# ---------------------------------------------------------------------------
# taxonomy-ext.v1 / client-script.v1

def load_extension(path: str | Path) -> dict:
    """Read a taxonomy-ext.v1 document; content validation happens at load_registry."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"extension document: invalid JSON ({exc.msg})") from None
    if not isinstance(doc, dict):
        raise SchemaError("extension document: expected an object")
    return doc


def parse_client_script(doc: Mapping) -> list:
    if not isinstance(doc, Mapping):
        raise SchemaError("client script: expected an object")
    _check_schema_tag(doc, CLIENT_SCRIPT_SCHEMA, "client script")
    responses = _require(doc, "responses", list, "client script")
    for i, entry in enumerate(responses):
        if isinstance(entry, str):
            continue
        if isinstance(entry, Mapping) and isinstance(entry.get("error"), str):
            continue
        raise SchemaError(
            f"client script: response {i} must be a string or an {{'error': msg}} object"
        )
    return list(responses)


def load_client_script(path: str | Path) -> list:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"client script: invalid JSON ({exc.msg})") from None
    return parse_client_script(doc)


# ---------------------------------------------------------------------------
# Coverage matrix CSV

def matrix_csv(matrix: CoverageMatrix, course: CourseSpec, tax: Taxonomy) -> str:
    """CSV rows per course subpoint: subpoint,count,bloom_levels,table_domain,level_domain."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["subpoint", "count", "bloom_levels", "table_domain", "level_domain"])
    for subpoint_id in sorted(course.covered_subpoints):
        spec = tax.subpoint(subpoint_id)
        if spec.any_level:
            levels = "any"
            level_domain = ""
        else:
            labels = _level_labels(spec.bloom_levels)
            levels = ";".join(labels)
            top = max(spec.bloom_levels, key=lambda l: l.ordinal)
            level_domain = tax.tables.level_to_domain[top].label
        writer.writerow([
            subpoint_id,
            matrix.by_subpoint.get(subpoint_id, 0),
            levels,
            spec.ncaaa_domain.label,
            level_domain,
        ])
    return buffer.getvalue()
