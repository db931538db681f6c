"""Exception hierarchy shared across the curation engine."""

from __future__ import annotations


class CurationError(Exception):
    """Base class for all engine errors."""


class ConfigError(CurationError):
    """Invalid or unparseable configuration."""


class ManifestError(CurationError):
    """Manifest file violates the JSONL schema or its preconditions."""


class ProviderError(CurationError):
    """Base class for model-backend failures.

    `kind` names the backend the failure came from (``embed``, ``aesthetic``,
    ``ocr``, ``flow``, ``chat``) so callers can attribute it.
    """

    def __init__(self, message: str, *, kind: str = "provider"):
        super().__init__(message)
        self.kind = kind


class ProviderUnavailable(ProviderError):
    """Backend unreachable after the configured retry budget."""


class ProtocolViolation(ProviderError):
    """Backend replied, but the payload breaks the wire contract."""


class EmptyInput(ProviderError):
    """A provider call received an empty input it cannot embed."""


class DegenerateEmbedding(CurationError):
    """Zero-norm vector where a direction is required."""
