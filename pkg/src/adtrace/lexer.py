"""Tokenizer for the `.adt` modeling language.

Whitespace-insensitive; `#` starts a comment running to end of line.
Keywords are contextual (handled by the parser), so the lexer only knows
identifiers, integers, strings and punctuation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError

# Order matters: two-character operators must be tried first.
_PUNCT = ("->", "=>", "..", "{", "}", "(", ")", "[", "]", ":", ",", ".", "=", "*")


@dataclass(frozen=True)
class Token:
    kind: str  # "IDENT", "INT", "STRING", or the punctuation text itself
    value: str
    line: int
    col: int


def _is_ident_start(ch: str) -> bool:
    return ch.isascii() and ch.isalpha()


def _is_ident_char(ch: str) -> bool:
    return ch.isascii() and (ch.isalnum() or ch == "_")


def tokenize(source: str, file: str | None = None) -> list[Token]:
    tokens: list[Token] = []
    i, n = 0, len(source)
    line, col = 1, 1

    def advance(count: int) -> None:
        nonlocal i, col
        i += count
        col += count

    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            advance(1)
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue
        if ch == '"':
            start_line, start_col = line, col
            advance(1)
            buf: list[str] = []
            while True:
                if i >= n or source[i] == "\n":
                    raise ParseError("unterminated string literal", file, start_line, start_col)
                c = source[i]
                if c == "\\":
                    if i + 1 >= n:
                        raise ParseError("unterminated string literal", file, start_line, start_col)
                    esc = source[i + 1]
                    if esc not in ('"', "\\"):
                        raise ParseError(f"unknown escape '\\{esc}'", file, line, col)
                    buf.append(esc)
                    advance(2)
                    continue
                if c == '"':
                    advance(1)
                    break
                buf.append(c)
                advance(1)
            tokens.append(Token("STRING", "".join(buf), start_line, start_col))
            continue
        if ch.isdigit():
            start_col = col
            j = i
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token("INT", source[i:j], line, start_col))
            advance(j - i)
            continue
        if _is_ident_start(ch):
            start_col = col
            j = i
            while j < n and _is_ident_char(source[j]):
                j += 1
            tokens.append(Token("IDENT", source[i:j], line, start_col))
            advance(j - i)
            continue
        for punct in _PUNCT:
            if source.startswith(punct, i):
                tokens.append(Token(punct, punct, line, col))
                advance(len(punct))
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", file, line, col)
    return tokens
