"""Tokeniser for the decision-model language.

Structural keywords are reserved; kind names (boolean, number, ...) are
contextual and lex as identifiers. `--` starts a line comment. ISO-8601
dates (2023-01-31) are a distinct literal token, matched before numbers.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import Diagnostic, error

KEYWORDS = frozenset({
    "model", "object", "rule", "service", "if", "then", "source",
    "relates_to", "as", "in", "out", "unit", "and", "or", "not",
    "true", "false",
})

# longest-match first for multi-char operators
_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>--[^\n]*)
  | (?P<date>\d{4}-\d{2}-\d{2}(?!\d))
  | (?P<number>\d+(?:\.\d+)?(?![\w.]))
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"(?:\\.|[^"\\\n])*")
  | (?P<op><=|>=|!=|[=<>+\-*/(){}\[\]:,])
    """,
    re.VERBOSE,
)

_STRING_ESCAPES = {"\\": "\\", '"': '"', "n": "\n", "t": "\t"}


@dataclass(frozen=True)
class Token:
    type: str  # KEYWORD IDENT STRING NUMBER DATE OP EOF
    value: str
    line: int
    column: int

    def __str__(self) -> str:
        return "end of input" if self.type == "EOF" else repr(self.value)


def tokenize(text: str) -> tuple[list[Token], list[Diagnostic]]:
    tokens: list[Token] = []
    diagnostics: list[Diagnostic] = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            col = pos - line_start + 1
            diagnostics.append(error(f"unexpected character {text[pos]!r}", line, col))
            pos += 1
            continue
        kind = match.lastgroup
        value = match.group()
        col = pos - line_start + 1
        if kind == "ws":
            for i, ch in enumerate(value):
                if ch == "\n":
                    line += 1
                    line_start = pos + i + 1
        elif kind == "comment":
            pass
        elif kind == "ident":
            ttype = "KEYWORD" if value in KEYWORDS else "IDENT"
            tokens.append(Token(ttype, value, line, col))
        elif kind == "string":
            tokens.append(Token("STRING", _unescape(value), line, col))
        elif kind == "number":
            tokens.append(Token("NUMBER", value, line, col))
        elif kind == "date":
            tokens.append(Token("DATE", value, line, col))
        else:
            tokens.append(Token("OP", value, line, col))
        pos = match.end()
    tokens.append(Token("EOF", "", line, len(text) - line_start + 1))
    return tokens, diagnostics


def _unescape(raw: str) -> str:
    body = raw[1:-1]
    out: list[str] = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "\\" and i + 1 < len(body):
            out.append(_STRING_ESCAPES.get(body[i + 1], body[i + 1]))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)
