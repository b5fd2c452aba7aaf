"""CSV to OPS-typed RDF.

Mapping files are INI-style. Each ``[entity]`` section maps every CSV row to
one typed resource::

    [prefixes]
    ex = http://example.org/

    [actor]
    subject = ex:actor/{id}
    type = ops:Person
    col.name = rdfs:label,literal
    col.bio = rdfs:comment,lang-literal,pt-br
    col.joined = schema:startDate,typed-literal,xsd:date
    col.org = ops:theme,iri-template,ex:org/{org}

``{col}`` percent-encodes the cell, ``{+col}`` inserts it raw. A template
whose result contains whitespace is never turned into an IRI.
"""
from __future__ import annotations

import configparser
import csv
import io
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union
from urllib.parse import quote

from opskit.ontology.schema import OntologySchema
from opskit.ontology.vocab import default_prefixes, is_external
from opskit.rdf import RDF_TYPE, Graph, InvalidIri, Iri, Literal, PrefixMap, Triple, UnknownPrefix


class MappingError(ValueError):
    pass


class UnknownColumn(MappingError):
    pass


class UnknownTerm(MappingError):
    pass


class IriTemplateProducedWhitespace(MappingError):
    pass


class ObjectKind(str, Enum):
    IRI_TEMPLATE = "iri-template"
    LITERAL = "literal"
    TYPED_LITERAL = "typed-literal"
    LANG_LITERAL = "lang-literal"


_PLACEHOLDER = re.compile(r"\{(\+?)([^{}]+)\}")


@dataclass(frozen=True)
class Template:
    text: str

    def columns(self) -> List[str]:
        return [m.group(2) for m in _PLACEHOLDER.finditer(self.text)]

    def expand(self, row: Dict[str, str]) -> Optional[str]:
        """None when a referenced cell is empty."""
        missing = False

        def sub(m):
            nonlocal missing
            value = row.get(m.group(2), "")
            if value == "":
                missing = True
                return ""
            if any(ch.isspace() for ch in value):
                raise IriTemplateProducedWhitespace(f"column {m.group(2)!r} value {value!r} contains whitespace")
            return value if m.group(1) else quote(value, safe="")

        out = _PLACEHOLDER.sub(sub, self.text)
        return None if missing else out

    def to_iri(self, row: Dict[str, str]) -> Optional[Iri]:
        text = self.expand(row)
        if text is None:
            return None
        if any(ch.isspace() for ch in text):
            raise IriTemplateProducedWhitespace(f"template {self.text!r} produced {text!r}")
        return Iri(text)


@dataclass(frozen=True)
class ColumnRule:
    column: str
    property: Iri
    kind: ObjectKind
    template: Optional[Template] = None
    datatype: Optional[Iri] = None
    language: Optional[str] = None

    def columns(self) -> List[str]:
        return self.template.columns() if self.template else [self.column]


@dataclass(frozen=True)
class MappingSpec:
    name: str
    subject: Template
    type: Iri
    rules: Tuple[ColumnRule, ...] = ()

    def columns(self) -> List[str]:
        cols = self.subject.columns()
        for rule in self.rules:
            cols += rule.columns()
        return cols

    def predicates(self) -> List[Iri]:
        return [RDF_TYPE] + [r.property for r in self.rules]


@dataclass
class SkipRecord:
    row: int  # 1-based, counting data rows only
    entity: str
    reason: str
    detail: str

    def __str__(self):
        return f"row {self.row} [{self.entity}]: {self.reason}: {self.detail}"


@dataclass
class IngestReport:
    rows_read: int = 0
    triples_emitted: int = 0
    rows_skipped: int = 0
    skips: List[SkipRecord] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "rowsRead": self.rows_read,
            "triplesEmitted": self.triples_emitted,
            "rowsSkipped": self.rows_skipped,
            "skips": [{"row": s.row, "entity": s.entity, "reason": s.reason, "detail": s.detail} for s in self.skips],
        }

    def to_text(self) -> str:
        lines = [f"rows read: {self.rows_read}", f"triples emitted: {self.triples_emitted}", f"rows skipped: {self.rows_skipped}"]
        lines += [str(s) for s in self.skips]
        return "\n".join(lines) + "\n"


def _resolve(text: str, prefixes: PrefixMap) -> Iri:
    text = text.strip()
    if text.startswith("<") and text.endswith(">"):
        return Iri(text[1:-1])
    if ":" in text and not re.match(r"^[A-Za-z][A-Za-z0-9+.\-]*://", text):
        return prefixes.expand(text)
    return Iri(text)


def _expand_template(text: str, prefixes: PrefixMap) -> Template:
    """Expand a leading prefixed name; placeholders stay untouched."""
    text = text.strip()
    m = re.match(r"^([A-Za-z][A-Za-z0-9_\-]*)?:(?!//)", text)
    if m and (m.group(1) or "") in prefixes:
        return Template(prefixes[m.group(1) or ""] + text[m.end():])
    return Template(text)


def _check_term(iri: Iri, schema: Optional[OntologySchema], what: str) -> None:
    if schema is None or is_external(iri):
        return
    known = schema.class_iris() if what == "class" else schema.property_iris()
    if iri not in known:
        raise UnknownTerm(f"{what} {iri} is neither in the schema nor in a whitelisted vocabulary")


def parse_mapping(text: str, schema: Optional[OntologySchema] = None) -> List[MappingSpec]:
    """Parse a mapping file; every term is checked against ``schema`` when given."""
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise MappingError(str(exc)) from None
    prefixes = default_prefixes(schema.base) if schema is not None else default_prefixes()
    if cp.has_section("prefixes"):
        for name, ns in cp["prefixes"].items():
            prefixes.bind(name, ns.strip())
    specs = []
    for name in cp.sections():
        if name == "prefixes":
            continue
        sec = cp[name]
        for key in ("subject", "type"):
            if key not in sec:
                raise MappingError(f"[{name}] is missing '{key}'")
        try:
            rules = []
            for key, value in sec.items():
                if key in ("subject", "type"):
                    continue
                if not key.startswith("col."):
                    raise MappingError(f"[{name}] unknown key {key!r}")
                column = key[4:]
                parts = [p.strip() for p in value.split(",", 2)]
                if len(parts) < 2:
                    raise MappingError(f"[{name}] {key}: expected '<property>,<kind>[,arg]'")
                prop = _resolve(parts[0], prefixes)
                _check_term(prop, schema, "property")
                try:
                    kind = ObjectKind(parts[1])
                except ValueError:
                    raise MappingError(f"[{name}] {key}: unknown object kind {parts[1]!r}") from None
                arg = parts[2] if len(parts) > 2 else None
                if kind == ObjectKind.IRI_TEMPLATE:
                    rule = ColumnRule(column, prop, kind, template=_expand_template(arg or "{+" + column + "}", prefixes))
                elif kind == ObjectKind.TYPED_LITERAL:
                    if not arg:
                        raise MappingError(f"[{name}] {key}: typed-literal needs a datatype")
                    rule = ColumnRule(column, prop, kind, datatype=_resolve(arg, prefixes))
                elif kind == ObjectKind.LANG_LITERAL:
                    if not arg:
                        raise MappingError(f"[{name}] {key}: lang-literal needs a language tag")
                    rule = ColumnRule(column, prop, kind, language=arg)
                else:
                    rule = ColumnRule(column, prop, kind)
                rules.append(rule)
            type_iri = _resolve(sec["type"], prefixes)
            _check_term(type_iri, schema, "class")
            subject = _expand_template(sec["subject"], prefixes)
        except UnknownPrefix as exc:
            raise MappingError(f"[{name}] {exc.args[0]}") from None
        except InvalidIri as exc:
            raise MappingError(f"[{name}] {exc}") from None
        if not subject.columns():
            raise MappingError(f"[{name}] subject template has no placeholders")
        specs.append(MappingSpec(name, subject, type_iri, tuple(rules)))
    if not specs:
        raise MappingError("mapping defines no entities")
    return specs


def load_mapping(path, schema: Optional[OntologySchema] = None) -> List[MappingSpec]:
    return parse_mapping(Path(path).read_text(encoding="utf-8"), schema)


def _object(rule: ColumnRule, row: Dict[str, str]):
    value = row.get(rule.column, "")
    if rule.kind == ObjectKind.IRI_TEMPLATE:
        return rule.template.to_iri(row)
    if value == "":
        return None
    if rule.kind == ObjectKind.TYPED_LITERAL:
        return Literal(value, datatype=rule.datatype)
    if rule.kind == ObjectKind.LANG_LITERAL:
        return Literal(value, language=rule.language)
    return Literal(value)


def ingest_csv(
    spec: Union[MappingSpec, Sequence[MappingSpec]],
    csv_text: str,
    schema: Optional[OntologySchema] = None,
) -> Tuple[Graph, IngestReport]:
    """Triplify ``csv_text``; dirty rows are skipped and recorded, never fatal."""
    specs = [spec] if isinstance(spec, MappingSpec) else list(spec)
    if schema is not None:
        for s in specs:
            _check_term(s.type, schema, "class")
            for r in s.rules:
                _check_term(r.property, schema, "property")
    if csv_text.startswith("\ufeff"):
        csv_text = csv_text[1:]
    reader = csv.reader(io.StringIO(csv_text, newline=""), strict=True)
    try:
        header = next(reader, None)
    except csv.Error as exc:
        raise MappingError(f"CSV header: {exc}") from None
    if header is None:
        raise MappingError("CSV has no header row")
    for s in specs:
        for col in s.columns():
            if col not in header:
                raise UnknownColumn(f"[{s.name}] column {col!r} is not in the CSV header")
    g = Graph()
    report = IngestReport()
    skipped_rows = set()
    while True:
        try:
            cells = next(reader)
        except StopIteration:
            break
        except csv.Error as exc:
            raise MappingError(f"CSV line {reader.line_num}: {exc}") from None
        if not cells:
            continue
        report.rows_read += 1
        n = report.rows_read
        row = dict(zip(header, cells))
        for s in specs:
            try:
                subject = s.subject.to_iri(row)
                if subject is None:
                    empty = [c for c in s.subject.columns() if row.get(c, "") == ""]
                    report.skips.append(SkipRecord(n, s.name, "EmptySubjectColumn", ", ".join(empty)))
                    skipped_rows.add(n)
                    continue
                out = [Triple(subject, RDF_TYPE, s.type)]
                for rule in s.rules:
                    obj = _object(rule, row)
                    if obj is not None:
                        out.append(Triple(subject, rule.property, obj))
            except IriTemplateProducedWhitespace as exc:
                report.skips.append(SkipRecord(n, s.name, "IriTemplateProducedWhitespace", str(exc)))
                skipped_rows.add(n)
                continue
            except (InvalidIri, ValueError) as exc:
                report.skips.append(SkipRecord(n, s.name, "InvalidIri", str(exc)))
                skipped_rows.add(n)
                continue
            g.add_all(out)
            report.triples_emitted += len(out)
    report.rows_skipped = len(skipped_rows)
    return g, report
