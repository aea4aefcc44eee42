"""HTTP JSON service exposing taxonomy, validation, repair, generation,
bank storage, blueprints and reports.

All endpoints speak JSON and report failures as {"error": code, "detail":
msg} — 400 for schema problems, 404 for unknown ids, 422 for questions that
cannot be repaired, 502 for completion-client failures. The taxonomy is
immutable shared state; the bank store serializes writers.
"""
from __future__ import annotations

import json
import re
import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse

from . import files
from .blueprint import BlueprintRequirement, CourseSpec, assemble, coverage_matrix, offline_filler
from .config import AppConfig
from .errors import (
    ClientFailure,
    ConflictingExtension,
    EmptyText,
    MalformedExtension,
    NoVerbFound,
    QgenError,
    SchemaError,
    UnknownOutcome,
    UnknownSubpoint,
)
from .generation import (
    ClientParams,
    GenerationRequest,
    HttpCompletionClient,
    generate,
    offline_result,
)
from .taxonomy import Taxonomy
from .validation import suggest_repair, validate_bank, validate_question, validate_text

_BANK_ID_RE = re.compile(r"[A-Za-z0-9][A-Za-z0-9._-]*\Z")

_STATUS_BY_ERROR = {
    SchemaError: 400,
    EmptyText: 400,
    MalformedExtension: 400,
    ConflictingExtension: 400,
    UnknownSubpoint: 404,
    UnknownOutcome: 404,
    NoVerbFound: 422,
    ClientFailure: 502,
}


class UnknownBank(QgenError):
    """Requested bank id does not exist in the store."""


_STATUS_BY_ERROR[UnknownBank] = 404


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


class BankStore:
    """Directory of bank.v1 files; one writer at a time, concurrent readers."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._write_lock = threading.Lock()

    def _path(self, bank_id: str) -> Path:
        if not _BANK_ID_RE.match(bank_id):
            raise SchemaError(f"invalid bank id {bank_id!r}")
        return self.root / f"{bank_id}.jsonl"

    def exists(self, bank_id: str) -> bool:
        return self._path(bank_id).exists()

    def load(self, bank_id: str):
        path = self._path(bank_id)
        if not path.exists():
            raise UnknownBank(f"bank {bank_id!r} does not exist")
        return files.bank_from_text(path.read_text(encoding="utf-8"))

    def _write(self, path: Path, questions) -> None:
        tmp = path.with_suffix(".jsonl.tmp")
        tmp.write_text(files.bank_to_text(questions), encoding="utf-8")
        tmp.replace(path)

    def _stamp(self, questions) -> list:
        from dataclasses import replace

        stamped = []
        now = _now()
        for question in questions:
            if question.created_at is None:
                question = replace(question, created_at=now)
            stamped.append(question)
        return stamped

    def append(self, bank_id: str, questions) -> int:
        with self._write_lock:
            path = self._path(bank_id)
            existing = self.load(bank_id) if path.exists() else []
            merged = existing + self._stamp(questions)
            ids = [q.id for q in merged]
            if len(set(ids)) != len(ids):
                raise SchemaError(f"append would duplicate question ids in bank {bank_id!r}")
            self._write(path, merged)
            return len(merged)

    def replace(self, bank_id: str, questions) -> int:
        with self._write_lock:
            stamped = self._stamp(questions)
            self._write(self._path(bank_id), stamped)
            return len(stamped)


async def _body(request: Request) -> dict:
    try:
        data = await request.json()
    except (json.JSONDecodeError, UnicodeDecodeError):
        raise SchemaError("request body is not valid JSON") from None
    if not isinstance(data, dict):
        raise SchemaError("request body must be a JSON object")
    return data


def _require_str(data: Mapping, key: str) -> str:
    value = data.get(key)
    if not isinstance(value, str):
        raise SchemaError(f"request field {key!r} must be a string")
    return value


def _taxonomy_doc(tax: Taxonomy) -> dict:
    registry = tax.registry
    return {
        "levels": [
            {
                "name": level.label,
                "ordinal": level.ordinal,
                "ncaaa_domain": tax.tables.level_to_domain[level].label,
            }
            for level in sorted(tax.tables.level_to_domain, key=lambda l: l.ordinal)
        ],
        "domains": ["Knowledge", "Skills", "Values"],
        "subpoints": [
            {
                "id": sp.id,
                "description": sp.description,
                "so": sp.so_id,
                "bloom_levels": [l.label for l in sorted(sp.bloom_levels, key=lambda l: l.ordinal)],
                "any_level": sp.any_level,
                "ncaaa_domain": sp.ncaaa_domain.label,
                "verbs": list(sp.verb_row),
            }
            for sp in tax.subpoints.values()
        ],
        "so_table": [
            {
                "so": row.so_id,
                "title": row.title,
                "ncaaa_domain": row.domain.label,
                "level_labels": list(row.level_labels),
            }
            for row in tax.tables.so_rows.values()
        ],
        "verbs": [
            {
                "lemma": entry.lemma,
                "levels": [l.label for l in sorted(entry.levels, key=lambda l: l.ordinal)],
                "affective": entry.affective,
                "forms": list(entry.irregular_forms),
            }
            for lemma in registry.lemmas
            for entry in [registry.entry(lemma)]
        ],
    }


def create_app(
    tax: Taxonomy | None = None,
    banks_dir: str | Path = "banks",
    config: AppConfig | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    tax = tax or Taxonomy.load()
    config = config or AppConfig()
    store = BankStore(banks_dir)
    app = FastAPI(title="qgen", version="0.1.0")

    @app.exception_handler(QgenError)
    async def qgen_error_handler(request: Request, exc: QgenError):
        status = _STATUS_BY_ERROR.get(type(exc), 400)
        return JSONResponse(
            status_code=status,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.exception_handler(ValueError)
    async def value_error_handler(request: Request, exc: ValueError):
        return JSONResponse(
            status_code=400,
            content={"error": "SchemaError", "detail": str(exc)},
        )

    @app.exception_handler(RequestValidationError)
    async def request_validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"error": "SchemaError", "detail": str(exc.errors())},
        )

    @app.get("/api/taxonomy")
    async def get_taxonomy():
        return _taxonomy_doc(tax)

    @app.post("/api/validate")
    async def post_validate(request: Request):
        data = await _body(request)
        text = _require_str(data, "text")
        subpoint = _require_str(data, "subpoint")
        question_id = data.get("id")
        if question_id is not None and not isinstance(question_id, str):
            raise SchemaError("request field 'id' must be a string")
        report = validate_text(text, subpoint, tax, question_id=question_id)
        return files.report_to_dict(report)

    @app.post("/api/repair")
    async def post_repair(request: Request):
        data = await _body(request)
        text = _require_str(data, "text")
        subpoint = _require_str(data, "subpoint")
        question_id = data.get("id")
        if question_id is not None and not isinstance(question_id, str):
            raise SchemaError("request field 'id' must be a string")
        from .validation import Question, default_question_id

        question = Question(
            id=question_id or default_question_id(text),
            text=text,
            target_subpoints=(subpoint,),
        )
        repaired = suggest_repair(question, subpoint, tax)
        report = validate_question(repaired, subpoint, tax)
        return {
            "text": repaired.text,
            "changed": repaired.text != text,
            "report": files.report_to_dict(report),
        }

    def _client_params(data: Mapping) -> ClientParams:
        raw = data.get("client_params", {})
        if not isinstance(raw, Mapping):
            raise SchemaError("client_params must be an object")
        defaults = ClientParams(timeout=config.client.timeout,
                                max_retries=config.client.max_retries)
        return ClientParams(
            max_output_tokens=int(raw.get("max_output_tokens", defaults.max_output_tokens)),
            temperature=float(raw.get("temperature", defaults.temperature)),
            timeout=float(raw.get("timeout", defaults.timeout)),
            max_retries=int(raw.get("max_retries", defaults.max_retries)),
        )

    def _generation_result(data: Mapping):
        request_obj = GenerationRequest(
            course_code=_require_str(data, "course_code"),
            topic=_require_str(data, "topic"),
            subpoint=_require_str(data, "subpoint"),
            count=int(data.get("count", 0)),
            style_notes=data.get("style_notes"),
            client_params=_client_params(data),
        )
        client_kind = data.get("client", "offline")
        seed = int(data.get("seed", 0))
        if client_kind == "offline":
            return offline_result(request_obj, tax, seed=seed)
        if client_kind == "http":
            if not config.client.endpoint:
                raise ClientFailure("no completion endpoint configured")
            client = HttpCompletionClient(
                endpoint=config.client.endpoint,
                profile=config.client.profile,
                model=config.client.model,
            )
            return generate(request_obj, client, tax)
        raise SchemaError(f"unknown client kind {client_kind!r}")

    @app.post("/api/generate")
    async def post_generate(request: Request):
        data = await _body(request)
        result = _generation_result(data)
        return {
            "questions": [files.question_to_dict(q) for q in result.questions],
            "rejected": [
                {"raw": raw, "report": files.report_to_dict(r)} for raw, r in result.rejected
            ],
            "attempts_used": result.attempts_used,
            "prompt_transcript": list(result.prompt_transcript),
            "diagnostics": list(result.diagnostics),
        }

    @app.get("/api/banks/{bank_id}")
    async def get_bank(bank_id: str, format: str | None = None):
        questions = store.load(bank_id)
        if format == "jsonl":
            return PlainTextResponse(files.bank_to_text(questions))
        return {"id": bank_id, "questions": [files.question_to_dict(q) for q in questions]}

    @app.post("/api/banks/{bank_id}")
    async def post_bank(bank_id: str, request: Request):
        data = await _body(request)
        raw_questions = data.get("questions")
        if not isinstance(raw_questions, list):
            raise SchemaError("request field 'questions' must be a list")
        questions = [
            files.question_from_dict(record, context=f"questions[{i}]")
            for i, record in enumerate(raw_questions)
        ]
        mode = data.get("mode", "append")
        if mode == "append":
            total = store.append(bank_id, questions)
        elif mode == "replace":
            total = store.replace(bank_id, questions)
        else:
            raise SchemaError(f"unknown mode {mode!r} (use 'append' or 'replace')")
        return {"id": bank_id, "count": total}

    def _course_from_payload(data: Mapping) -> CourseSpec:
        course_doc = data.get("course")
        if not isinstance(course_doc, Mapping):
            raise SchemaError("request field 'course' must be a course.v1 object")
        return files.course_from_dict(course_doc, tax)

    @app.post("/api/courses/parse")
    async def post_course_parse(request: Request):
        data = await _body(request)
        course = _course_from_payload(data)
        return files.course_to_dict(course)

    @app.post("/api/blueprint")
    async def post_blueprint(request: Request):
        data = await _body(request)
        course = _course_from_payload(data)
        if "questions" in data:
            raw = data["questions"]
            if not isinstance(raw, list):
                raise SchemaError("request field 'questions' must be a list")
            bank = [files.question_from_dict(r, context=f"questions[{i}]") for i, r in enumerate(raw)]
        elif "bank" in data:
            bank = store.load(_require_str(data, "bank"))
        else:
            raise SchemaError("blueprint needs 'questions' or a stored 'bank' id")
        if "requirement" in data:
            raw_req = data["requirement"]
            if not isinstance(raw_req, Mapping):
                raise SchemaError("request field 'requirement' must be an object")
            requirement = BlueprintRequirement({str(k): int(v) for k, v in raw_req.items()})
        else:
            per = int(data.get("per_subpoint", 1))
            requirement = BlueprintRequirement({sp: per for sp in course.covered_subpoints})
        filler = None
        if data.get("fill") == "offline":
            filler = offline_filler(course, tax, seed=int(data.get("seed", 0)))
        assembled = assemble(course, requirement, bank, tax, filler=filler)
        return {
            "exam": [files.question_to_dict(q) for q in assembled.exam],
            "matrix": files.matrix_to_dict(assembled.matrix),
            "deficits": dict(sorted(assembled.deficits.items())),
        }

    def _report_doc(course: CourseSpec, bank, generated_at: str | None) -> dict:
        reports, _ = validate_bank(bank, tax)
        matrix = coverage_matrix(reports, course)
        return files.build_report_doc(course, reports, matrix, generated_at or _now())

    @app.get("/api/report")
    async def get_report(bank: str, course: str):
        questions = store.load(bank)
        course_spec = files.load_course(course, tax)
        return _report_doc(course_spec, questions, None)

    @app.post("/api/report")
    async def post_report(request: Request):
        data = await _body(request)
        course = _course_from_payload(data)
        raw = data.get("questions")
        if not isinstance(raw, list):
            raise SchemaError("request field 'questions' must be a list")
        bank = [files.question_from_dict(r, context=f"questions[{i}]") for i, r in enumerate(raw)]
        generated_at = data.get("generated_at")
        if generated_at is not None and not isinstance(generated_at, str):
            raise SchemaError("request field 'generated_at' must be a string")
        return _report_doc(course, bank, generated_at)

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
