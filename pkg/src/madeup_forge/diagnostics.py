"""Source positions, diagnostics, and the error types shared across the pipeline."""

from __future__ import annotations

import enum
from dataclasses import dataclass


@dataclass(frozen=True)
class Span:
    """A 1-based (line, column) position in the source text."""

    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    message: str
    span: Span

    def __str__(self) -> str:
        return f"{self.span}: {self.severity.value}: {self.message}"


class MadeupError(Exception):
    """Base class for all errors raised by the pipeline."""


class MadeupSyntaxError(MadeupError):
    """Lexing or parsing failed; carries one or more diagnostics."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(str(d) for d in diagnostics))


class MadeupRuntimeError(MadeupError):
    """Evaluation failed; carries the span of the offending expression."""

    def __init__(self, message: str, span: Span):
        self.message = message
        self.span = span
        super().__init__(f"{span}: {message}")

    def to_diagnostic(self) -> Diagnostic:
        return Diagnostic(Severity.ERROR, self.message, self.span)


class MeshError(MadeupError):
    """A geometry operation received an input it cannot solidify."""
