"""Diagnostics and error types for model parsing and validation."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    message: str
    line: int = 0
    column: int = 0
    element: str | None = None

    def __str__(self) -> str:
        where = f"{self.line}:{self.column}" if self.line else "-"
        prefix = f"{self.severity} at {where}"
        if self.element:
            prefix += f" [{self.element}]"
        return f"{prefix}: {self.message}"

    def to_json(self) -> dict:
        return {
            "severity": self.severity,
            "message": self.message,
            "line": self.line,
            "column": self.column,
            "element": self.element,
        }


def error(message: str, line: int = 0, column: int = 0, element: str | None = None) -> Diagnostic:
    return Diagnostic("error", message, line, column, element)


def warning(message: str, line: int = 0, column: int = 0, element: str | None = None) -> Diagnostic:
    return Diagnostic("warning", message, line, column, element)


class ModelError(Exception):
    """Raised when source text does not yield a valid decision model."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        summary = "; ".join(str(d) for d in self.diagnostics[:5])
        if len(self.diagnostics) > 5:
            summary += f" (+{len(self.diagnostics) - 5} more)"
        super().__init__(summary or "invalid model")
