"""Accreditation-aware exam question validation, repair and generation."""

from .blueprint import (
    AssembledExam,
    BlueprintRequirement,
    CourseSpec,
    CoverageMatrix,
    assemble,
    coverage_matrix,
    offline_filler,
)
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
    CompletionClient,
    GenerationRequest,
    GenerationResult,
    HttpCompletionClient,
    ScriptedClient,
    build_prompt,
    generate,
    offline_generate,
    offline_result,
    parse_generation_output,
)
from .parsing import TokenSpan, VerbHit, extract_action_verbs, normalize_token, tokenize
from .taxonomy import (
    BloomLevel,
    LevelTag,
    MappingTables,
    NcaaaDomain,
    SubpointSpec,
    Taxonomy,
    VerbEntry,
    VerbRegistry,
    domain_for_so,
    load_registry,
    ncaaa_domain_for_level,
)
from .validation import (
    BankSummary,
    Question,
    ValidationReport,
    suggest_repair,
    validate_bank,
    validate_question,
    validate_text,
)

__version__ = "0.1.0"

__all__ = [
    "AssembledExam",
    "BankSummary",
    "BloomLevel",
    "BlueprintRequirement",
    "ClientFailure",
    "ClientParams",
    "CompletionClient",
    "ConflictingExtension",
    "CourseSpec",
    "CoverageMatrix",
    "EmptyText",
    "GenerationRequest",
    "GenerationResult",
    "HttpCompletionClient",
    "LevelTag",
    "MalformedExtension",
    "MappingTables",
    "NcaaaDomain",
    "NoVerbFound",
    "QgenError",
    "Question",
    "SchemaError",
    "ScriptedClient",
    "SubpointSpec",
    "Taxonomy",
    "TokenSpan",
    "UnknownOutcome",
    "UnknownSubpoint",
    "ValidationReport",
    "VerbEntry",
    "VerbHit",
    "VerbRegistry",
    "assemble",
    "build_prompt",
    "coverage_matrix",
    "domain_for_so",
    "extract_action_verbs",
    "generate",
    "load_registry",
    "ncaaa_domain_for_level",
    "normalize_token",
    "offline_filler",
    "offline_generate",
    "offline_result",
    "parse_generation_output",
    "suggest_repair",
    "tokenize",
    "validate_bank",
    "validate_question",
    "validate_text",
]
