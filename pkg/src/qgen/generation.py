"""Accreditation-constrained question generation.

Builds prompts that pin a subpoint's approved verb row, calls a pluggable
completion client, parses "Q:"-prefixed output lines, and runs a
validate-then-repair loop: deterministic verb substitution is tried before a
model retry is spent, and a shortfall is reported as data rather than as an
error. A deterministic offline generator covers every subpoint without any
model in the loop.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from typing import Protocol, Sequence

from .errors import ClientFailure, NoVerbFound
from .taxonomy import Taxonomy
from .validation import Question, ValidationReport, suggest_repair, validate_question

QLINE_RE = re.compile(r"^\s*(?:\d+\s*[.):-]\s*)?Q:\s*(.+?)\s*$")


@dataclass(frozen=True)
class ClientParams:
    max_output_tokens: int = 512
    temperature: float = 0.0
    timeout: float = 30.0
    max_retries: int = 3

    def __post_init__(self):
        if self.max_output_tokens < 1:
            raise ValueError("max_output_tokens must be positive")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")


@dataclass(frozen=True)
class GenerationRequest:
    course_code: str
    topic: str
    subpoint: str
    count: int
    style_notes: str | None = None
    client_params: ClientParams = field(default_factory=ClientParams)

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be >= 1")


@dataclass(frozen=True)
class GenerationResult:
    questions: tuple[Question, ...]
    rejected: tuple[tuple[str, ValidationReport], ...]
    attempts_used: int
    prompt_transcript: tuple[str, ...]
    diagnostics: tuple[str, ...] = ()


class CompletionClient(Protocol):
    """Prompt -> raw text contract for any completion backend.

    Implementations must be deterministic for identical (prompt, params,
    seed) or declare themselves nondeterministic; concurrent complete()
    calls from independent requests must be tolerated.
    """

    def complete(self, prompt: str, params: ClientParams) -> str: ...


class ScriptedClient:
    """Deterministic test double replaying a fixed response transcript.

    Each entry is either the raw text to return or {"error": msg} to
    simulate a transport failure. Running past the end of the script also
    fails, mirroring a dead endpoint.
    """

    def __init__(self, responses: Sequence[str | dict]):
        self._responses = list(responses)
        self.calls: list[str] = []

    @classmethod
    def from_script(cls, document: dict) -> "ScriptedClient":
        from .files import parse_client_script

        return cls(parse_client_script(document))

    @classmethod
    def from_file(cls, path) -> "ScriptedClient":
        from .files import load_client_script

        return cls(load_client_script(path))

    def complete(self, prompt: str, params: ClientParams) -> str:
        self.calls.append(prompt)
        if len(self.calls) > len(self._responses):
            raise ClientFailure("script exhausted: no response for call "
                                f"{len(self.calls)}")
        entry = self._responses[len(self.calls) - 1]
        if isinstance(entry, dict):
            raise ClientFailure(str(entry.get("error", "scripted failure")))
        return entry


class HttpCompletionClient:
    """Completion client for an HTTP endpoint.

    The endpoint URL and provider profile come from config; the credential
    comes from the QGEN_API_KEY environment variable. Profiles:
    "generic" posts {prompt, max_tokens, temperature} and reads {text};
    "openai-chat" posts a chat-completions body and reads the first choice.
    """

    def __init__(self, endpoint: str, profile: str = "generic", model: str | None = None,
                 api_key: str | None = None):
        if profile not in ("generic", "openai-chat"):
            raise ValueError(f"unknown client profile {profile!r}")
        self.endpoint = endpoint
        self.profile = profile
        self.model = model
        self.api_key = api_key if api_key is not None else os.environ.get("QGEN_API_KEY")
        self._transport = None  # test hook: httpx transport override

    def _body(self, prompt: str, params: ClientParams) -> dict:
        if self.profile == "openai-chat":
            return {
                "model": self.model or "default",
                "messages": [{"role": "user", "content": prompt}],
                "max_tokens": params.max_output_tokens,
                "temperature": params.temperature,
            }
        return {
            "prompt": prompt,
            "max_tokens": params.max_output_tokens,
            "temperature": params.temperature,
        }

    def _extract(self, payload: dict) -> str:
        try:
            if self.profile == "openai-chat":
                return payload["choices"][0]["message"]["content"]
            return payload["text"]
        except (KeyError, IndexError, TypeError):
            raise ClientFailure(
                f"response body missing completion text for profile {self.profile!r}"
            ) from None

    def complete(self, prompt: str, params: ClientParams) -> str:
        import httpx

        headers = {}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        try:
            with httpx.Client(timeout=params.timeout, transport=self._transport) as client:
                response = client.post(self.endpoint, json=self._body(prompt, params),
                                       headers=headers)
                response.raise_for_status()
                payload = response.json()
        except httpx.HTTPError as exc:
            raise ClientFailure(f"completion request failed: {exc}") from exc
        except ValueError as exc:
            raise ClientFailure(f"completion response is not JSON: {exc}") from exc
        if not isinstance(payload, dict):
            raise ClientFailure("completion response is not a JSON object")
        return self._extract(payload)


def build_prompt(request: GenerationRequest, tax: Taxonomy) -> str:
    """Deterministic prompt pinning the approved verbs for the subpoint."""
    subpoint = tax.subpoint(request.subpoint)
    verbs = ", ".join(subpoint.verb_row)
    lines = [
        f"You are writing exam questions for course {request.course_code}.",
        f"Topic: {request.topic}",
        f"Assessed outcome {subpoint.id}: {subpoint.description}.",
        f"Approved action verbs for this outcome: {verbs}.",
        "Each question must begin with exactly one of the approved verbs.",
        f"Produce exactly {request.count} question(s).",
        'Emit one question per line, each line prefixed with "Q:".',
        "Output nothing else.",
    ]
    if request.style_notes:
        lines.insert(2, f"Style notes: {request.style_notes}")
    return "\n".join(lines)


def parse_generation_output(raw: str) -> list[str]:
    """Extract "Q:"-prefixed lines (optional numbering tolerated).

    Garbage input yields an empty list; this never raises.
    """
    if not isinstance(raw, str):
        return []
    questions = []
    for line in raw.splitlines():
        match = QLINE_RE.match(line)
        if match:
            questions.append(match.group(1))
    return questions


def _corrective_suffix(request: GenerationRequest, tax: Taxonomy,
                       failures: list[tuple[str, ValidationReport]], remaining: int) -> str:
    verbs = ", ".join(tax.verbs_for_subpoint(request.subpoint))
    lines = [
        "",
        f"The previous output was not acceptable; {remaining} more "
        "compliant question(s) are required.",
        "These candidates violated the verb rule:",
    ]
    for text, report in failures:
        reason = ("no registered action verb" if report.primary_verb is None
                  else f"verb '{report.primary_verb.lemma}' is not approved for "
                       f"{request.subpoint}")
        lines.append(f'- "{text}": {reason}')
    lines.append(f"Begin every question with one of: {verbs}.")
    lines.append(f'Emit exactly {remaining} corrected question(s), one per line, prefixed "Q:".')
    return "\n".join(lines)


def generate(request: GenerationRequest, client: CompletionClient, tax: Taxonomy) -> GenerationResult:
    """Run the generate -> validate -> repair -> re-prompt loop.

    Performs at most 1 + max_retries client calls. Candidates that cannot be
    repaired are collected in `rejected`; falling short of the requested
    count is flagged in diagnostics, not raised. ClientFailure propagates
    only when the final attempt itself failed at the transport level.
    """
    tax.subpoint(request.subpoint)  # fail fast on unknown targets
    base_prompt = build_prompt(request, tax)

    accepted: list[Question] = []
    rejected: list[tuple[str, ValidationReport]] = []
    transcript: list[str] = []
    diagnostics: list[str] = []
    max_calls = 1 + request.client_params.max_retries
    attempts = 0
    prompt = base_prompt
    transport_error: ClientFailure | None = None

    while attempts < max_calls and len(accepted) < request.count:
        attempts += 1
        transcript.append(prompt)
        try:
            raw = client.complete(prompt, request.client_params)
            transport_error = None
        except ClientFailure as exc:
            transport_error = exc
            continue

        attempt_failures: list[tuple[str, ValidationReport]] = []
        for ordinal, text in enumerate(parse_generation_output(raw)):
            if len(accepted) >= request.count:
                break
            candidate = Question(
                id=f"gen-{request.subpoint}-{attempts}-{ordinal}",
                text=text,
                target_subpoints=(request.subpoint,),
                source="generated",
                topic=request.topic,
            )
            report = validate_question(candidate, request.subpoint, tax)
            if report.compliant:
                accepted.append(candidate)
                continue
            try:
                repaired = suggest_repair(candidate, request.subpoint, tax)
            except NoVerbFound:
                rejected.append((text, report))
                attempt_failures.append((text, report))
                continue
            accepted.append(repaired)

        if len(accepted) < request.count:
            remaining = request.count - len(accepted)
            prompt = base_prompt + _corrective_suffix(request, tax, attempt_failures, remaining)

    if transport_error is not None and len(accepted) < request.count:
        raise ClientFailure(
            f"client failed on final attempt after {attempts} call(s): {transport_error}"
        )
    if len(accepted) < request.count:
        diagnostics.append(
            f"ShortfallFlagged: produced {len(accepted)} of {request.count} "
            f"compliant question(s) in {attempts} attempt(s)"
        )
    return GenerationResult(
        questions=tuple(accepted),
        rejected=tuple(rejected),
        attempts_used=attempts,
        prompt_transcript=tuple(transcript),
        diagnostics=tuple(diagnostics),
    )


def offline_generate(request: GenerationRequest, tax: Taxonomy, seed: int = 0) -> list[Question]:
    """Deterministic model-free generator used for tests and dry runs.

    Cycles through the subpoint's verb row starting at seed mod row length;
    every emitted question is compliant by construction.
    """
    row = tax.verbs_for_subpoint(request.subpoint)
    questions = []
    for i in range(request.count):
        verb = row[(seed + i) % len(row)]
        text = f"{verb.capitalize()} the {request.topic} material covered in {request.course_code}."
        questions.append(
            Question(
                id=f"off-{request.subpoint}-{seed}-{i}",
                text=text,
                target_subpoints=(request.subpoint,),
                source="generated",
                topic=request.topic,
            )
        )
    return questions


def offline_result(request: GenerationRequest, tax: Taxonomy, seed: int = 0) -> GenerationResult:
    """Package offline_generate output as a GenerationResult (no client calls)."""
    return GenerationResult(
        questions=tuple(offline_generate(request, tax, seed)),
        rejected=(),
        attempts_used=0,
        prompt_transcript=(),
        diagnostics=("offline generator: no completion client used",),
    )
