"""Exception types shared across the package."""


class QgenError(Exception):
    """Base class for all qgen errors."""


class UnknownSubpoint(QgenError):
    """Subpoint id is not in the outcome catalog."""


class UnknownOutcome(QgenError):
    """Student-outcome number outside 1..6."""


class EmptyText(QgenError):
    """Question text is empty or whitespace-only."""


class MalformedExtension(QgenError):
    """Verb extension document violates the taxonomy-ext.v1 schema."""


class ConflictingExtension(QgenError):
    """Verb extension contradicts built-in registry data."""


class NoVerbFound(QgenError):
    """No registered action verb available to repair."""


class ClientFailure(QgenError):
    """Completion client failed after exhausting retries."""


class SchemaError(QgenError):
    """Persisted document violates its file schema."""
