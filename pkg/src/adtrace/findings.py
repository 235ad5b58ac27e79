"""Findings are the universal result currency of every check.

A finding never raises; checks collect them and callers decide what an
error-severity finding means (the CLI maps it to exit code 1).
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field

_CODE_RE = re.compile(r"[A-Z]{3}[0-9]{3}")


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"

    @property
    def rank(self) -> int:
        return {"error": 0, "warning": 1, "info": 2}[self.value]


@dataclass(frozen=True, order=True)
class SourcePos:
    file: str | None
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.file or '<input>'}:{self.line}:{self.col}"


@dataclass(frozen=True)
class Finding:
    code: str
    severity: Severity
    subject: str
    message: str
    position: SourcePos | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not _CODE_RE.fullmatch(self.code):
            raise ValueError(f"malformed rule code {self.code!r}")

    def sort_key(self) -> tuple:
        return (self.severity.rank, self.code, self.subject, self.message)


def error(code: str, subject: str, message: str, pos: SourcePos | None = None) -> Finding:
    return Finding(code, Severity.ERROR, subject, message, pos)


def warning(code: str, subject: str, message: str, pos: SourcePos | None = None) -> Finding:
    return Finding(code, Severity.WARNING, subject, message, pos)


def has_errors(findings: list[Finding]) -> bool:
    return any(f.severity is Severity.ERROR for f in findings)


def sort_findings(findings: list[Finding]) -> list[Finding]:
    return sorted(findings, key=Finding.sort_key)
