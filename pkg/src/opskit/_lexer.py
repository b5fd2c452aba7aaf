"""Regex scanner and positioned diagnostics shared by the Turtle and SPARQL parsers."""
from __future__ import annotations

import bisect
import enum
import re
from dataclasses import dataclass
from typing import List, NamedTuple, Sequence, Tuple

MAX_DIAGNOSTICS = 20


class DiagnosticKind(str, enum.Enum):
    SYNTAX = "syntax"
    BAD_IRI = "badIri"
    BAD_LITERAL = "badLiteral"
    UNKNOWN_PREFIX = "unknownPrefix"


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    kind: DiagnosticKind
    message: str

    def __str__(self):
        return f"{self.line}:{self.column}: {self.kind.value}: {self.message}"

    def to_json(self) -> dict:
        return {"line": self.line, "column": self.column, "kind": self.kind.value, "message": self.message}


class ParseError(ValueError):
    """Raised with every diagnostic collected before giving up."""

    def __init__(self, diagnostics: Sequence[ParseDiagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


class Token(NamedTuple):
    kind: str
    text: str
    offset: int


PN_CHARS_BASE = "A-Za-z\u00C0-\u00D6\u00D8-\u00F6\u00F8-\u02FF\u0370-\u037D\u037F-\u1FFF\u200C-\u200D\u2070-\u218F\u2C00-\u2FEF\u3001-\uD7FF\uF900-\uFDCF\uFDF0-\uFFFD"
PN_CHARS_U = PN_CHARS_BASE + "_"
PN_CHARS = PN_CHARS_U + "\\-0-9\u00B7\u0300-\u036F\u203F-\u2040"
PN_PREFIX = f"[{PN_CHARS_BASE}](?:[{PN_CHARS}.]*[{PN_CHARS}])?"
_PLX = "%[0-9A-Fa-f]{2}"
PN_LOCAL = f"(?:[{PN_CHARS_U}:0-9]|{_PLX})(?:(?:[{PN_CHARS}.:]|{_PLX})*(?:[{PN_CHARS}:]|{_PLX}))?"

COMMON_TOKENS: List[Tuple[str, str]] = [
    ("WS", r"[ \t\r\n]+"),
    ("COMMENT", r"#[^\n]*"),
    ("IRIREF", r"<[^<>\"{}|^`\\\x00-\x20]*(?:\\u[0-9A-Fa-f]{4}[^<>\"{}|^`\\\x00-\x20]*|\\U[0-9A-Fa-f]{8}[^<>\"{}|^`\\\x00-\x20]*)*>"),
    ("BAD_IRIREF", r"<[^<>\n]*>"),
    ("STRING_LONG2", r'"""(?:[^"\\]|\\.|"(?!""))*"""'),
    ("STRING_LONG1", r"'''(?:[^'\\]|\\.|'(?!''))*'''"),
    ("STRING2", r'"(?:[^"\\\n\r]|\\.)*"'),
    ("STRING1", r"'(?:[^'\\\n\r]|\\.)*'"),
    ("BNODE", rf"_:[{PN_CHARS_U}0-9](?:[{PN_CHARS}.]*[{PN_CHARS}])?"),
    ("PNAME", rf"(?:{PN_PREFIX})?:(?:{PN_LOCAL})?"),
    ("DTYPE", r"\^\^"),
    ("DOUBLE", r"[+-]?(?:\d+\.\d*[eE][+-]?\d+|\.\d+[eE][+-]?\d+|\d+[eE][+-]?\d+)"),
    ("DECIMAL", r"[+-]?\d*\.\d+"),
    ("INTEGER", r"[+-]?\d+"),
]


class Scanner:
    def __init__(self, spec: Sequence[Tuple[str, str]]):
        self._regex = re.compile("|".join(f"(?P<{name}>{pat})" for name, pat in spec))

    def tokens(self, text: str) -> List[Token]:
        """Tokenize, emitting ``ERROR`` tokens for characters no rule accepts."""
        out = []
        pos, end = 0, len(text)
        match = self._regex.match
        while pos < end:
            m = match(text, pos)
            if m is None or m.end() == pos:
                out.append(Token("ERROR", text[pos], pos))
                pos += 1
                continue
            kind = m.lastgroup
            if kind not in ("WS", "COMMENT"):
                out.append(Token(kind, m.group(), pos))
            pos = m.end()
        out.append(Token("EOF", "", end))
        return out


class Positions:
    """Offset -> (line, column), both 1-based."""

    def __init__(self, text: str):
        self._starts = [0] + [i + 1 for i, ch in enumerate(text) if ch == "\n"]
        self._len = len(text)

    def at(self, offset: int) -> Tuple[int, int]:
        offset = max(0, min(offset, self._len))
        line = bisect.bisect_right(self._starts, offset) - 1
        return line + 1, offset - self._starts[line] + 1


_ESCAPES = {'"': '"', "'": "'", "\\": "\\", "n": "\n", "t": "\t", "r": "\r"}


def unescape_string(body: str) -> str:
    """Decode the escapes allowed in literals; raise ValueError on anything else."""
    if "\\" not in body:
        return body
    out = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        nxt = body[i + 1 : i + 2]
        if nxt in _ESCAPES:
            out.append(_ESCAPES[nxt])
            i += 2
        elif nxt in ("u", "U"):
            width = 4 if nxt == "u" else 8
            digits = body[i + 2 : i + 2 + width]
            if len(digits) != width or not re.fullmatch(r"[0-9A-Fa-f]+", digits):
                raise ValueError(f"bad \\{nxt} escape")
            out.append(chr(int(digits, 16)))
            i += 2 + width
        else:
            raise ValueError(f"unsupported escape \\{nxt}")
    return "".join(out)


def unescape_iri(body: str) -> str:
    if "\\" not in body:
        return body
    return re.sub(r"\\u([0-9A-Fa-f]{4})|\\U([0-9A-Fa-f]{8})", lambda m: chr(int(m.group(1) or m.group(2), 16)), body)


def string_body(token: Token) -> str:
    if token.kind.startswith("STRING_LONG"):
        return token.text[3:-3]
    return token.text[1:-1]
