"""Forward-chaining materialization and closed-world validation over OPS data."""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from opskit.ontology.schema import OntologySchema, SchemaError
from opskit.rdf import RDF_TYPE, RDFS, Graph, Iri, Literal, Term, Triple

ClosureTable = Dict[Iri, FrozenSet[Iri]]


class CycleDetected(SchemaError):
    pass


def _reachability(edges: Mapping[Iri, Iterable[Iri]], nodes: Iterable[Iri]) -> ClosureTable:
    table = {}
    for start in nodes:
        seen = {start}
        stack = [start]
        while stack:
            for nxt in edges.get(stack.pop(), ()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        table[start] = frozenset(seen)
    return table


def subclass_closure(schema: OntologySchema) -> ClosureTable:
    """Reflexive-transitive closure of declared subclass edges, upper ontologies included."""
    edges: Dict[Iri, set] = {}
    nodes = set(schema.class_iris())
    for sub, sup in schema.subclass_edges():
        edges.setdefault(sub, set()).add(sup)
        nodes.add(sup)
    table = _reachability(edges, nodes)
    for node, ancestors in table.items():
        for anc in ancestors:
            if anc != node and node in table.get(anc, ()):
                raise CycleDetected(f"subclass cycle through {node} and {anc}")
    return table


def _data_closure(g: Graph, schema: OntologySchema) -> ClosureTable:
    """Schema closure widened with rdfs:subClassOf edges asserted in the data itself."""
    edges: Dict[Iri, set] = {}
    nodes = set(schema.class_iris())
    for sub, sup in schema.subclass_edges():
        edges.setdefault(sub, set()).add(sup)
        nodes.add(sup)
    for t in g.match(None, RDFS.subClassOf, None):
        if isinstance(t.subject, Iri) and isinstance(t.object, Iri):
            edges.setdefault(t.subject, set()).add(t.object)
            nodes.update((t.subject, t.object))
    return _reachability(edges, nodes)


def materialize(g: Graph, schema: OntologySchema) -> Graph:
    """Least fixpoint of the subclass, range, domain, inverse and defined-class rules.

    The input graph is left untouched.
    """
    ancestors = _data_closure(g, schema)
    ranges = {p.iri: p.range for p in schema.properties.values() if p.range}
    domains = {p.iri: p.domain for p in schema.properties.values() if p.domain}
    inverses = {p.iri: schema.inverse_of(p.iri) for p in schema.properties.values()}
    inverses = {k: v for k, v in inverses.items() if v is not None}
    by_base: Dict[Iri, list] = {}
    by_filler: Dict[Iri, list] = {}
    by_prop: Dict[Iri, list] = {}
    for d in schema.defined:
        by_base.setdefault(d.base_class, []).append(d)
        by_filler.setdefault(d.filler_class, []).append(d)
        by_prop.setdefault(d.property, []).append(d)

    out = g.copy()
    queue = deque(out)

    def emit(t: Triple):
        if out.insert(t):
            queue.append(t)

    def has_type(x, c) -> bool:
        return not isinstance(x, Literal) and Triple(x, RDF_TYPE, c) in out

    while queue:
        s, p, o = queue.popleft()
        if p == RDF_TYPE and isinstance(o, Iri):
            for anc in ancestors.get(o, ()):
                emit(Triple(s, RDF_TYPE, anc))
            for d in by_base.get(o, ()):
                if any(has_type(t.object, d.filler_class) for t in out.match(s, d.property, None)):
                    emit(Triple(s, RDF_TYPE, d.defined_class))
            for d in by_filler.get(o, ()):
                for t in out.match(None, d.property, s):
                    if has_type(t.subject, d.base_class):
                        emit(Triple(t.subject, RDF_TYPE, d.defined_class))
        if p in domains:
            emit(Triple(s, RDF_TYPE, domains[p]))
        if isinstance(o, Literal):
            continue
        if p in ranges:
            emit(Triple(o, RDF_TYPE, ranges[p]))
        if p in inverses:
            emit(Triple(o, inverses[p], s))
        for d in by_prop.get(p, ()):
            if has_type(s, d.base_class) and has_type(o, d.filler_class):
                emit(Triple(s, RDF_TYPE, d.defined_class))
    return out


@dataclass(frozen=True)
class Violation:
    kind: str  # "disjointness" | "missingRestrictionFiller"
    focus: Term
    detail: Tuple[Iri, ...]
    message: str

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "focus": str(self.focus) if isinstance(self.focus, Iri) else self.focus.n3(),
            "detail": [d.value for d in self.detail],
            "message": self.message,
        }


def _short(schema: OntologySchema, iri: Iri) -> str:
    return schema.local_name(iri) or iri.value


def check_disjointness(g: Graph, schema: OntologySchema) -> List[Violation]:
    """One violation per (individual, disjoint pair) where both classes type the individual."""
    found = []
    for pair in sorted(schema.disjointness, key=lambda d: (d.class_a.value, d.class_b.value)):
        members_a = set(g.subjects(RDF_TYPE, pair.class_a))
        for x in sorted(members_a, key=lambda n: n.sort_key):
            if Triple(x, RDF_TYPE, pair.class_b) in g:
                a, b = _short(schema, pair.class_a), _short(schema, pair.class_b)
                found.append(
                    Violation("disjointness", x, (pair.class_a, pair.class_b), f"{x} is typed by disjoint classes {a} and {b}")
                )
    return found


def validate_restrictions(g: Graph, schema: OntologySchema) -> List[Violation]:
    """Closed-world lint of existential restrictions.

    Unlike OWL entailment, a member of the restricted class with no
    qualifying edge is reported rather than assumed to have an unknown one.
    """
    found = []
    rows = sorted(schema.restrictions, key=lambda r: (r.on_class.value, r.property.value, r.filler.value))
    for r in rows:
        for x in sorted(set(g.subjects(RDF_TYPE, r.on_class)), key=lambda n: n.sort_key):
            if not any(Triple(t.object, RDF_TYPE, r.filler) in g for t in g.match(x, r.property, None)):
                c, p, f = (_short(schema, i) for i in (r.on_class, r.property, r.filler))
                found.append(
                    Violation(
                        "missingRestrictionFiller",
                        x,
                        (r.on_class, r.property, r.filler),
                        f"{x} is a {c} but has no {p} edge to a {f}",
                    )
                )
    return found


def validate(g: Graph, schema: OntologySchema, inferred: Optional[Graph] = None) -> List[Violation]:
    """Materialize (unless given) and run both checks."""
    m = inferred if inferred is not None else materialize(g, schema)
    return check_disjointness(m, schema) + validate_restrictions(m, schema)


def violations_to_text(violations: List[Violation]) -> str:
    if not violations:
        return "no violations\n"
    return "".join(f"{v.kind}\t{v.to_json()['focus']}\t{v.message}\n" for v in violations)


def violations_to_json(violations: List[Violation]) -> str:
    return json.dumps([v.to_json() for v in violations], indent=2, ensure_ascii=False)
