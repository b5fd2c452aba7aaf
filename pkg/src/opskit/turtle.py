"""Turtle reader and deterministic writer.

The accepted subset covers directives (``@prefix``, ``@base`` and their
SPARQL-style spellings), predicate-object lists, object lists, blank node
labels, language-tagged/typed/numeric/boolean literals and long strings.
Collections ``( )`` and anonymous blank nodes ``[ ]`` are rejected with a
diagnostic naming the construct.
"""
from __future__ import annotations

import re
from typing import Dict, List, Optional, Tuple, Union
from urllib.parse import urljoin

from opskit._lexer import (
    COMMON_TOKENS,
    MAX_DIAGNOSTICS,
    DiagnosticKind,
    ParseDiagnostic,
    ParseError,
    Positions,
    Scanner,
    Token,
    string_body,
    unescape_iri,
    unescape_string,
)
from opskit.rdf import (
    RDF_TYPE,
    XSD,
    BlankNode,
    Graph,
    InvalidIri,
    Iri,
    Literal,
    PrefixMap,
    Triple,
    escape_string,
)

MEDIA_TYPE = "text/turtle"


class TurtleSyntaxError(ParseError):
    pass


_SCANNER = Scanner(
    COMMON_TOKENS
    + [
        ("LANGTAG", r"@[a-zA-Z]+(?:-[a-zA-Z0-9]+)*"),
        ("WORD", r"[A-Za-z][A-Za-z0-9_]*"),
        ("PUNCT", r"[.;,\[\]()]"),
    ]
)

_NUMERIC_TYPES = {"INTEGER": XSD + "integer", "DECIMAL": XSD + "decimal", "DOUBLE": XSD + "double"}


class _Abort(Exception):
    """Unwinds the current statement after a diagnostic was recorded."""


_SCHEME = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")


def resolve_iri(base: str, ref: str) -> str:
    """Resolve ``ref`` against ``base``; unlike bare urljoin, an empty ``#`` fragment survives."""
    if _SCHEME.match(ref):
        return ref
    ref, hash_, fragment = ref.partition("#")
    resolved = urljoin(base, ref) if ref else base.partition("#")[0]
    return resolved + hash_ + fragment


class _Parser:
    def __init__(self, text: str, base: Optional[str]):
        self.text = text
        self.tokens = _SCANNER.tokens(text)
        self.pos = 0
        self.positions = Positions(text)
        self.base = base
        self.prefixes = PrefixMap()
        self.diagnostics: List[ParseDiagnostic] = []
        self.graph = Graph()

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "EOF":
            self.pos += 1
        return t

    def is_punct(self, ch: str) -> bool:
        return self.tok.kind == "PUNCT" and self.tok.text == ch

    def fail(self, token: Token, kind: DiagnosticKind, message: str):
        line, col = self.positions.at(token.offset)
        self.diagnostics.append(ParseDiagnostic(line, col, kind, message))
        raise _Abort()

    def expect_punct(self, ch: str):
        if not self.is_punct(ch):
            self.fail(self.tok, DiagnosticKind.SYNTAX, f"expected '{ch}', found {self.describe(self.tok)}")
        return self.advance()

    @staticmethod
    def describe(token: Token) -> str:
        if token.kind == "EOF":
            return "end of input"
        return repr(token.text[:30])

    # -- grammar
    def parse(self) -> None:
        while self.tok.kind != "EOF" and len(self.diagnostics) < MAX_DIAGNOSTICS:
            start = self.pos
            pending: List[Triple] = []
            try:
                self.statement(pending)
            except _Abort:
                self.recover(start)
                continue
            for t in pending:
                self.graph.insert(t)

    def recover(self, start: int) -> None:
        if self.pos == start:
            self.advance()
        while self.tok.kind != "EOF":
            t = self.advance()
            if t.kind == "PUNCT" and t.text == ".":
                return

    def statement(self, pending: List[Triple]) -> None:
        tok = self.tok
        if tok.kind == "LANGTAG" and tok.text in ("@prefix", "@base"):
            self.advance()
            if tok.text == "@prefix":
                self.prefix_decl()
            else:
                self.base_decl()
            self.expect_punct(".")
            return
        if tok.kind == "WORD" and tok.text.upper() in ("PREFIX", "BASE"):
            self.advance()
            if tok.text.upper() == "PREFIX":
                self.prefix_decl()
            else:
                self.base_decl()
            return
        subject = self.subject()
        self.predicate_object_list(subject, pending)
        self.expect_punct(".")

    def prefix_decl(self) -> None:
        tok = self.tok
        if tok.kind != "PNAME" or not tok.text.endswith(":") or tok.text.count(":") != 1:
            self.fail(tok, DiagnosticKind.SYNTAX, f"expected prefix name ending in ':', found {self.describe(tok)}")
        self.advance()
        iri = self.iriref(self.advance_iriref())
        self.prefixes.bind(tok.text[:-1], iri.value)

    def base_decl(self) -> None:
        iri = self.iriref(self.advance_iriref())
        self.base = iri.value

    def advance_iriref(self) -> Token:
        if self.tok.kind == "BAD_IRIREF":
            self.bad_iri(self.tok)
        if self.tok.kind != "IRIREF":
            self.fail(self.tok, DiagnosticKind.SYNTAX, f"expected <IRI>, found {self.describe(self.tok)}")
        return self.advance()

    def iriref(self, tok: Token) -> Iri:
        raw = unescape_iri(tok.text[1:-1])
        if self.base is not None:
            raw = resolve_iri(self.base, raw)
        try:
            return Iri(raw)
        except InvalidIri as exc:
            self.fail(tok, DiagnosticKind.BAD_IRI, str(exc))

    def pname(self, tok: Token) -> Iri:
        prefix, local = tok.text.split(":", 1)
        if prefix not in self.prefixes:
            self.fail(tok, DiagnosticKind.UNKNOWN_PREFIX, f"undeclared prefix '{prefix}:'")
        try:
            return Iri(self.prefixes[prefix] + local)
        except InvalidIri as exc:
            self.fail(tok, DiagnosticKind.BAD_IRI, str(exc))

    def unsupported(self, tok: Token):
        construct = "collection '( )'" if tok.text in "()" else "blank node property list '[ ]'"
        self.fail(tok, DiagnosticKind.SYNTAX, f"unsupported construct: {construct}")

    def bad_iri(self, tok: Token):
        self.fail(tok, DiagnosticKind.BAD_IRI, f"malformed IRI {tok.text!r} (whitespace is not allowed in IRIs)")

    def subject(self):
        tok = self.tok
        if tok.kind == "BAD_IRIREF":
            self.bad_iri(tok)
        if tok.kind == "IRIREF":
            return self.iriref(self.advance())
        if tok.kind == "PNAME":
            return self.pname(self.advance())
        if tok.kind == "BNODE":
            self.advance()
            try:
                return BlankNode(tok.text[2:])
            except ValueError:
                self.fail(tok, DiagnosticKind.SYNTAX, f"unsupported blank node label {tok.text!r}")
        if tok.kind == "PUNCT" and tok.text in "[(":
            self.unsupported(tok)
        if tok.kind.startswith("STRING") or tok.kind in _NUMERIC_TYPES:
            self.fail(tok, DiagnosticKind.SYNTAX, "literal in subject position")
        self.fail(tok, DiagnosticKind.SYNTAX, f"expected subject, found {self.describe(tok)}")

    def verb(self) -> Iri:
        tok = self.tok
        if tok.kind == "BAD_IRIREF":
            self.bad_iri(tok)
        if tok.kind == "WORD" and tok.text == "a":
            self.advance()
            return RDF_TYPE
        if tok.kind == "IRIREF":
            return self.iriref(self.advance())
        if tok.kind == "PNAME":
            return self.pname(self.advance())
        self.fail(tok, DiagnosticKind.SYNTAX, f"expected predicate, found {self.describe(tok)}")

    def predicate_object_list(self, subject, pending: List[Triple]) -> None:
        while True:
            predicate = self.verb()
            pending.append(Triple(subject, predicate, self.object()))
            while self.is_punct(","):
                self.advance()
                pending.append(Triple(subject, predicate, self.object()))
            if not self.is_punct(";"):
                return
            while self.is_punct(";"):
                self.advance()
            if self.is_punct(".") or self.tok.kind == "EOF":
                return

    def object(self):
        tok = self.tok
        kind = tok.kind
        if kind in ("IRIREF", "PNAME", "BNODE", "BAD_IRIREF"):
            return self.subject()
        if kind.startswith("STRING"):
            self.advance()
            try:
                lexical = unescape_string(string_body(tok))
            except ValueError as exc:
                self.fail(tok, DiagnosticKind.BAD_LITERAL, str(exc))
            if self.tok.kind == "LANGTAG" and self.tok.text not in ("@prefix", "@base"):
                return Literal(lexical, language=self.advance().text[1:])
            if self.tok.kind == "DTYPE":
                self.advance()
                dt_tok = self.tok
                if dt_tok.kind == "IRIREF":
                    datatype = self.iriref(self.advance())
                elif dt_tok.kind == "PNAME":
                    datatype = self.pname(self.advance())
                else:
                    self.fail(dt_tok, DiagnosticKind.BAD_LITERAL, "expected datatype IRI after '^^'")
                return Literal(lexical, datatype=datatype)
            return Literal(lexical)
        if kind in _NUMERIC_TYPES:
            self.advance()
            return Literal(tok.text, datatype=Iri(_NUMERIC_TYPES[kind]))
        if kind == "WORD" and tok.text in ("true", "false"):
            self.advance()
            return Literal(tok.text, datatype=Iri(XSD + "boolean"))
        if kind == "PUNCT" and tok.text in "[(":
            self.unsupported(tok)
        if kind == "ERROR":
            self.fail(tok, DiagnosticKind.SYNTAX, f"unexpected character {tok.text!r}")
        self.fail(tok, DiagnosticKind.SYNTAX, f"expected object, found {self.describe(tok)}")


def _decode(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        head = data[: exc.start]
        line = head.count(b"\n") + 1
        col = exc.start - (head.rfind(b"\n") + 1) + 1
        raise TurtleSyntaxError(
            [ParseDiagnostic(line, col, DiagnosticKind.SYNTAX, f"invalid UTF-8 byte 0x{data[exc.start]:02x}")]
        ) from None


def parse_turtle(text: Union[str, bytes], base: Optional[str] = None) -> Tuple[Graph, PrefixMap]:
    """Parse a Turtle document into a graph and the prefixes it declared.

    Raises TurtleSyntaxError carrying up to 20 positioned diagnostics.
    """
    if isinstance(text, bytes):
        text = _decode(text)
    if text.startswith("\ufeff"):
        text = text[1:]
    parser = _Parser(text, base)
    parser.parse()
    if parser.diagnostics:
        raise TurtleSyntaxError(parser.diagnostics[:MAX_DIAGNOSTICS])
    return parser.graph, parser.prefixes


def _format_term(term, pm: PrefixMap, is_predicate: bool = False) -> str:
    if isinstance(term, Iri):
        if is_predicate and term == RDF_TYPE:
            return "a"
        short = pm.compact(term)
        return short if short is not None else term.n3()
    if isinstance(term, Literal) and term.datatype is not None and term.datatype.value != XSD + "string":
        short = pm.compact(term.datatype)
        if short is not None:
            return '"' + escape_string(term.lexical) + '"^^' + short
    return term.n3()


def serialize_turtle(graph: Graph, pm: Optional[PrefixMap] = None) -> str:
    """Deterministic Turtle: subjects, predicates and objects in sorted order."""
    pm = pm or PrefixMap()
    lines = [f"@prefix {prefix}: <{pm[prefix]}> ." for prefix in sorted(pm)]
    by_subject: Dict = {}
    for t in graph:
        by_subject.setdefault(t.subject, {}).setdefault(t.predicate, []).append(t.object)
    if by_subject and lines:
        lines.append("")
    previous = 1
    for subject in sorted(by_subject, key=lambda s: s.sort_key):
        preds = by_subject[subject]
        chunks = []
        for predicate in sorted(preds, key=lambda p: p.sort_key):
            objs = sorted(preds[predicate], key=lambda o: o.sort_key)
            chunks.append(
                _format_term(predicate, pm, is_predicate=True) + " " + " , ".join(_format_term(o, pm) for o in objs)
            )
        head = _format_term(subject, pm)
        # runs of one-line subjects stay compact; multi-line blocks get blank lines around them
        if (previous > 1 or len(chunks) > 1) and lines and lines[-1] != "":
            lines.append("")
        if len(chunks) == 1:
            lines.append(f"{head} {chunks[0]} .")
        else:
            lines.append(f"{head} {chunks[0]} ;")
            for chunk in chunks[1:-1]:
                lines.append(f"    {chunk} ;")
            lines.append(f"    {chunks[-1]} .")
        previous = len(chunks)
    return "\n".join(lines) + "\n"
