"""Exception types shared across the toolchain."""

from __future__ import annotations


class AdtError(Exception):
    """Base class for all toolchain errors."""


class ParseError(AdtError):
    """Syntax error carrying the source position and what was expected."""

    def __init__(self, message: str, file: str | None = None, line: int = 0, col: int = 0):
        super().__init__(message)
        self.message = message
        self.file = file
        self.line = line
        self.col = col

    def __str__(self) -> str:
        return f"{self.file or '<input>'}:{self.line}:{self.col}: {self.message}"


class ResolutionError(AdtError):
    """An identifier did not resolve against the loaded declarations."""


class GenerationError(AdtError):
    """Profile generation could not cover the ontology with the given rules."""

    def __init__(self, message: str, uncovered: tuple[str, ...] = ()):
        super().__init__(message)
        self.uncovered = uncovered


class TraceBuildError(AdtError):
    """Trace graph construction failed (duplicate ids, self loops, parallel edges)."""
