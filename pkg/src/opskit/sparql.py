"""SELECT queries over basic graph patterns.

Grammar::

    query   := prefix* SELECT DISTINCT? (var+ | '*') WHERE? '{' pattern ('.' pattern)* '.'? '}' (LIMIT n)?
    prefix  := PREFIX pname_ns <iri>
    pattern := term term term      # 'a' allowed as predicate

Solutions are sorted so results are reproducible without ORDER BY.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

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
    XSD_STRING,
    BlankNode,
    Graph,
    InvalidIri,
    Iri,
    Literal,
    PrefixMap,
    Term,
    Triple,
)


class QuerySyntaxError(ParseError):
    pass


class ProjectedVariableUnused(QuerySyntaxError):
    pass


@dataclass(frozen=True)
class Variable:
    name: str

    def __str__(self):
        return "?" + self.name


PatternTerm = Union[Variable, Iri, Literal, BlankNode]


@dataclass(frozen=True)
class TriplePattern:
    subject: PatternTerm
    predicate: PatternTerm
    object: PatternTerm

    def __iter__(self):
        return iter((self.subject, self.predicate, self.object))

    def variables(self) -> List[Variable]:
        return [t for t in self if isinstance(t, Variable)]


@dataclass
class Query:
    prefixes: PrefixMap
    projection: Optional[List[Variable]]  # None means '*'
    patterns: List[TriplePattern]
    distinct: bool = False
    limit: Optional[int] = None

    def variables(self) -> List[Variable]:
        seen: List[Variable] = []
        for pat in self.patterns:
            for v in pat.variables():
                if v not in seen:
                    seen.append(v)
        return seen

    @property
    def header(self) -> List[str]:
        return [v.name for v in (self.projection if self.projection is not None else self.variables())]


@dataclass
class ResultTable:
    header: List[str]
    rows: List[Tuple[Term, ...]] = field(default_factory=list)

    def __len__(self):
        return len(self.rows)

    def column(self, name: str) -> List[Term]:
        i = self.header.index(name)
        return [row[i] for row in self.rows]

    def bindings(self) -> Iterator[Dict[str, Term]]:
        for row in self.rows:
            yield dict(zip(self.header, row))

    def to_json(self) -> dict:
        return {
            "head": {"vars": list(self.header)},
            "results": {"bindings": [{k: term_to_json(v) for k, v in b.items()} for b in self.bindings()]},
        }

    def to_sparql_json(self) -> str:
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False) + "\n"

    def to_tsv(self) -> str:
        lines = ["\t".join("?" + h for h in self.header)]
        lines += ["\t".join(term.n3() for term in row) for row in self.rows]
        return "\n".join(lines) + "\n"


def term_to_json(term: Term) -> dict:
    if isinstance(term, Iri):
        return {"type": "uri", "value": term.value}
    if isinstance(term, BlankNode):
        return {"type": "bnode", "value": term.id}
    out = {"type": "literal", "value": term.lexical}
    if term.language:
        out["xml:lang"] = term.language
    elif term.datatype != XSD_STRING:
        out["datatype"] = term.datatype.value
    return out


_SCANNER = Scanner(
    COMMON_TOKENS[:4]
    + [("VAR", r"\?[A-Za-z_][A-Za-z0-9_]*")]
    + COMMON_TOKENS[4:]
    + [
        ("LANGTAG", r"@[a-zA-Z]+(?:-[a-zA-Z0-9]+)*"),
        ("WORD", r"[A-Za-z][A-Za-z0-9_]*"),
        ("PUNCT", r"[.{}*;,\[\]()]"),
    ]
)

_NUMERIC_TYPES = {"INTEGER": XSD + "integer", "DECIMAL": XSD + "decimal", "DOUBLE": XSD + "double"}


class _Abort(Exception):
    pass


class _QueryParser:
    def __init__(self, text: str, prefixes: Optional[PrefixMap]):
        self.tokens = _SCANNER.tokens(text)
        self.pos = 0
        self.positions = Positions(text)
        self.prefixes = prefixes.copy() if prefixes is not None else PrefixMap()
        self.diagnostics: List[ParseDiagnostic] = []

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "EOF":
            self.pos += 1
        return t

    def note(self, token: Token, kind: DiagnosticKind, message: str) -> None:
        if len(self.diagnostics) < MAX_DIAGNOSTICS:
            line, col = self.positions.at(token.offset)
            self.diagnostics.append(ParseDiagnostic(line, col, kind, message))

    def fail(self, token: Token, kind: DiagnosticKind, message: str):
        self.note(token, kind, message)
        raise _Abort()

    def keyword(self, word: str) -> bool:
        return self.tok.kind == "WORD" and self.tok.text.upper() == word

    def punct(self, ch: str) -> bool:
        return self.tok.kind == "PUNCT" and self.tok.text == ch

    def expect_punct(self, ch: str) -> None:
        if not self.punct(ch):
            self.fail(self.tok, DiagnosticKind.SYNTAX, f"expected '{ch}', found {self.describe(self.tok)}")
        self.advance()

    @staticmethod
    def describe(token: Token) -> str:
        return "end of input" if token.kind == "EOF" else repr(token.text[:30])

    def parse(self) -> Query:
        while self.keyword("PREFIX"):
            self.advance()
            tok = self.tok
            if tok.kind != "PNAME" or not tok.text.endswith(":") or tok.text.count(":") != 1:
                self.fail(tok, DiagnosticKind.SYNTAX, f"expected prefix name, found {self.describe(tok)}")
            self.advance()
            self.prefixes.bind(tok.text[:-1], self.iriref().value)
        if not self.keyword("SELECT"):
            self.fail(self.tok, DiagnosticKind.SYNTAX, f"expected SELECT, found {self.describe(self.tok)}")
        self.advance()
        distinct = False
        if self.keyword("DISTINCT"):
            self.advance()
            distinct = True
        projection: Optional[List[Tuple[Variable, Token]]] = []
        if self.punct("*"):
            self.advance()
            projection = None
        else:
            while self.tok.kind == "VAR":
                tok = self.advance()
                projection.append((Variable(tok.text[1:]), tok))
            if not projection:
                self.fail(self.tok, DiagnosticKind.SYNTAX, f"expected variables or '*', found {self.describe(self.tok)}")
        if self.keyword("WHERE"):
            self.advance()
        open_tok = self.tok
        self.expect_punct("{")
        patterns = self.group()
        if not patterns and not self.diagnostics:
            self.fail(open_tok, DiagnosticKind.SYNTAX, "empty pattern group")
        limit = None
        if self.keyword("LIMIT"):
            self.advance()
            tok = self.tok
            if tok.kind != "INTEGER" or int(tok.text) <= 0:
                self.fail(tok, DiagnosticKind.SYNTAX, "LIMIT expects a positive integer")
            limit = int(self.advance().text)
        if self.tok.kind != "EOF":
            self.fail(self.tok, DiagnosticKind.SYNTAX, f"unexpected {self.describe(self.tok)} after query")
        query = Query(
            prefixes=self.prefixes,
            projection=[v for v, _ in projection] if projection is not None else None,
            patterns=patterns,
            distinct=distinct,
            limit=limit,
        )
        if projection is not None and not self.diagnostics:
            used = set(query.variables())
            unused = [(v, tok) for v, tok in projection if v not in used]
            if unused:
                for v, tok in unused:
                    self.note(tok, DiagnosticKind.SYNTAX, f"projected variable {v} does not occur in the pattern")
                raise ProjectedVariableUnused(self.diagnostics)
        return query

    def group(self) -> List[TriplePattern]:
        patterns = []
        while not self.punct("}"):
            if self.tok.kind == "EOF":
                self.fail(self.tok, DiagnosticKind.SYNTAX, "unterminated pattern group, expected '}'")
            try:
                s = self.term(position="subject")
                p = self.term(position="predicate")
                o = self.term(position="object")
                patterns.append(TriplePattern(s, p, o))
                if self.punct("."):
                    self.advance()
                elif not self.punct("}"):
                    self.fail(self.tok, DiagnosticKind.SYNTAX, f"expected '.' or '}}', found {self.describe(self.tok)}")
            except _Abort:
                if len(self.diagnostics) >= MAX_DIAGNOSTICS:
                    raise
                # skip to the next pattern boundary and keep collecting
                while self.tok.kind != "EOF" and not self.punct(".") and not self.punct("}"):
                    self.advance()
                if self.punct("."):
                    self.advance()
        self.advance()
        return patterns

    def iriref(self) -> Iri:
        tok = self.tok
        if tok.kind == "BAD_IRIREF":
            self.fail(tok, DiagnosticKind.BAD_IRI, f"malformed IRI {tok.text!r}")
        if tok.kind != "IRIREF":
            self.fail(tok, DiagnosticKind.SYNTAX, f"expected <IRI>, found {self.describe(tok)}")
        self.advance()
        try:
            return Iri(unescape_iri(tok.text[1:-1]))
        except InvalidIri as exc:
            self.fail(tok, DiagnosticKind.BAD_IRI, str(exc))

    def pname(self) -> Iri:
        tok = self.advance()
        prefix, local = tok.text.split(":", 1)
        if prefix not in self.prefixes:
            self.fail(tok, DiagnosticKind.UNKNOWN_PREFIX, f"undeclared prefix '{prefix}:'")
        try:
            return Iri(self.prefixes[prefix] + local)
        except InvalidIri as exc:
            self.fail(tok, DiagnosticKind.BAD_IRI, str(exc))

    def term(self, position: str) -> PatternTerm:
        tok = self.tok
        if tok.kind == "VAR":
            self.advance()
            return Variable(tok.text[1:])
        if tok.kind in ("IRIREF", "BAD_IRIREF"):
            return self.iriref()
        if tok.kind == "PNAME":
            return self.pname()
        if position == "predicate":
            if tok.kind == "WORD" and tok.text == "a":
                self.advance()
                return RDF_TYPE
            self.fail(tok, DiagnosticKind.SYNTAX, f"expected predicate, found {self.describe(tok)}")
        if tok.kind == "BNODE":
            self.fail(tok, DiagnosticKind.SYNTAX, "blank nodes are not supported in query patterns")
        if position == "object":
            if tok.kind.startswith("STRING"):
                self.advance()
                try:
                    lexical = unescape_string(string_body(tok))
                except ValueError as exc:
                    self.fail(tok, DiagnosticKind.BAD_LITERAL, str(exc))
                if self.tok.kind == "LANGTAG":
                    return Literal(lexical, language=self.advance().text[1:])
                if self.tok.kind == "DTYPE":
                    self.advance()
                    if self.tok.kind == "PNAME":
                        return Literal(lexical, datatype=self.pname())
                    return Literal(lexical, datatype=self.iriref())
                return Literal(lexical)
            if tok.kind in _NUMERIC_TYPES:
                self.advance()
                return Literal(tok.text, datatype=Iri(_NUMERIC_TYPES[tok.kind]))
            if tok.kind == "WORD" and tok.text in ("true", "false"):
                self.advance()
                return Literal(tok.text, datatype=Iri(XSD + "boolean"))
        if tok.kind == "PUNCT" and tok.text in "[(":
            self.fail(tok, DiagnosticKind.SYNTAX, "unsupported construct: " + ("collection" if tok.text == "(" else "blank node property list"))
        if position == "subject" and tok.kind.startswith("STRING"):
            self.fail(tok, DiagnosticKind.SYNTAX, "literal in subject position")
        self.fail(tok, DiagnosticKind.SYNTAX, f"expected {position}, found {self.describe(tok)}")


def parse_query(text: str, prefixes: Optional[PrefixMap] = None) -> Query:
    """Parse a SELECT query; ``prefixes`` are pre-bound and may be overridden by PREFIX lines.

    Raises QuerySyntaxError (or its subclass ProjectedVariableUnused).
    """
    parser = _QueryParser(text, prefixes)
    try:
        query = parser.parse()
    except _Abort:
        raise QuerySyntaxError(parser.diagnostics) from None
    if parser.diagnostics:
        raise QuerySyntaxError(parser.diagnostics)
    return query


def _bind(pattern: TriplePattern, binding: Dict[Variable, Term]) -> Tuple[Optional[Term], ...]:
    return tuple(binding.get(t) if isinstance(t, Variable) else t for t in pattern)


def _solutions(patterns: Sequence[TriplePattern], g: Graph) -> Iterator[Dict[Variable, Term]]:
    """Left-to-right nested-loop join using the graph's indexes."""

    def extend(i: int, binding: Dict[Variable, Term]):
        if i == len(patterns):
            yield dict(binding)
            return
        pat = patterns[i]
        s, p, o = _bind(pat, binding)
        if isinstance(s, Literal) or (p is not None and not isinstance(p, Iri)):
            return
        for t in g.match(s, p, o):
            new = dict(binding)
            ok = True
            for slot, value in zip(pat, t):
                if isinstance(slot, Variable):
                    if slot in new and new[slot] != value:
                        ok = False
                        break
                    new[slot] = value
            if ok:
                yield from extend(i + 1, new)

    yield from extend(0, {})


def row_key(row: Tuple[Term, ...]):
    return tuple(t.sort_key for t in row)


def evaluate(query: Query, g: Graph) -> ResultTable:
    header_vars = query.projection if query.projection is not None else query.variables()
    rows = [tuple(sol[v] for v in header_vars) for sol in _solutions(query.patterns, g)]
    if query.distinct:
        rows = list(set(rows))
    rows.sort(key=row_key)
    if query.limit is not None:
        rows = rows[: query.limit]
    return ResultTable([v.name for v in header_vars], rows)


def run_query(text: str, g: Graph, prefixes: Optional[PrefixMap] = None) -> ResultTable:
    return evaluate(parse_query(text, prefixes), g)
