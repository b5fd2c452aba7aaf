"""OntologySchema <-> OWL/RDF graph."""
from __future__ import annotations

from typing import Dict, List, Optional, Set, Tuple

from opskit.ontology.schema import (
    ClassDecl,
    DefinedClassDecl,
    DisjointnessDecl,
    OntologySchema,
    PropertyDecl,
    RestrictionDecl,
    SchemaError,
)
from opskit.ontology.vocab import ALTERNATE_NAME, INTENDED_DOMAIN, INTENDED_RANGE, default_prefixes, is_external
from opskit.rdf import OWL, RDF, RDF_TYPE, RDFS, BlankNode, Graph, Iri, Literal, PrefixMap, Triple
from opskit.turtle import parse_turtle, serialize_turtle


class MalformedRestriction(SchemaError):
    pass


class DanglingReference(SchemaError):
    pass


def _restriction_node(g: Graph, node: BlankNode, prop: Iri, filler: Iri) -> None:
    g.insert(Triple(node, RDF_TYPE, OWL.Restriction))
    g.insert(Triple(node, OWL.onProperty, prop))
    g.insert(Triple(node, OWL.someValuesFrom, filler))


def schema_to_graph(schema: OntologySchema) -> Tuple[Graph, PrefixMap]:
    g = Graph()
    add = g.insert
    add(Triple(schema.base, RDF_TYPE, OWL.Ontology))
    for c in schema.classes.values():
        add(Triple(c.iri, RDF_TYPE, OWL.Class))
        for lang, text in c.labels:
            add(Triple(c.iri, RDFS.label, Literal(text, language=lang)))
        add(Triple(c.iri, RDFS.comment, Literal(c.comment, language="en")))
        for sup in c.superclasses:
            add(Triple(c.iri, RDFS.subClassOf, sup))
    for p in schema.properties.values():
        add(Triple(p.iri, RDF_TYPE, OWL.ObjectProperty))
        for lang, text in p.labels:
            add(Triple(p.iri, RDFS.label, Literal(text, language=lang)))
        for pred, value in (
            (RDFS.domain, p.domain),
            (RDFS.range, p.range),
            (OWL.inverseOf, p.inverse),
            (INTENDED_DOMAIN, p.intended_domain),
            (INTENDED_RANGE, p.intended_range),
        ):
            if value is not None:
                add(Triple(p.iri, pred, value))
        for alt in p.alt_names:
            add(Triple(p.iri, ALTERNATE_NAME, Literal(alt)))
    for r in schema.restrictions:
        names = [schema.local_name(i) or "x" for i in (r.on_class, r.property, r.filler)]
        node = BlankNode("r-" + "-".join(names))
        add(Triple(r.on_class, RDFS.subClassOf, node))
        _restriction_node(g, node, r.property, r.filler)
    for d in schema.disjointness:
        add(Triple(d.class_a, OWL.disjointWith, d.class_b))
    for d in schema.defined:
        stem = "d-" + (schema.local_name(d.defined_class) or "x")
        node, first, second, inner = (BlankNode(stem + s) for s in ("", "-l1", "-l2", "-r"))
        add(Triple(d.defined_class, OWL.equivalentClass, node))
        add(Triple(node, RDF_TYPE, OWL.Class))
        add(Triple(node, OWL.intersectionOf, first))
        add(Triple(first, RDF.first, d.base_class))
        add(Triple(first, RDF.rest, second))
        add(Triple(second, RDF.first, inner))
        add(Triple(second, RDF.rest, RDF.nil))
        _restriction_node(g, inner, d.property, d.filler_class)
    return g, default_prefixes(schema.base.value)


def _single(g: Graph, s, p, what: str, error=MalformedRestriction):
    values = list(g.objects(s, p))
    if len(values) != 1:
        raise error(f"{s}: expected exactly one {what}, found {len(values)}")
    return values[0]


def _parse_restriction(g: Graph, node: BlankNode) -> Tuple[Iri, Iri]:
    if Triple(node, RDF_TYPE, OWL.Restriction) not in g:
        raise MalformedRestriction(f"{node} is not typed owl:Restriction")
    prop = _single(g, node, OWL.onProperty, "owl:onProperty")
    filler = _single(g, node, OWL.someValuesFrom, "owl:someValuesFrom")
    if not isinstance(prop, Iri) or not isinstance(filler, Iri):
        raise MalformedRestriction(f"{node}: property and filler must be IRIs")
    return prop, filler


def _parse_list(g: Graph, head) -> List:
    items = []
    seen: Set = set()
    while head != RDF.nil:
        if head in seen or not isinstance(head, BlankNode):
            raise MalformedRestriction(f"malformed RDF list at {head}")
        seen.add(head)
        items.append(_single(g, head, RDF.first, "rdf:first"))
        head = _single(g, head, RDF.rest, "rdf:rest")
    return items


def _labels(g: Graph, subject) -> Dict[str, str]:
    return {
        o.language: o.lexical
        for o in g.objects(subject, RDFS.label)
        if isinstance(o, Literal) and o.language
    }


def _optional_iri(g: Graph, s, p) -> Optional[Iri]:
    values = [o for o in g.objects(s, p) if isinstance(o, Iri)]
    if len(values) > 1:
        raise SchemaError(f"{s}: more than one value for {p}")
    return values[0] if values else None


def graph_to_schema(g: Graph, base) -> OntologySchema:
    """Rebuild the schema whose terms live under ``base``.

    Raises MalformedRestriction for incomplete restriction/intersection
    nodes and DanglingReference for IRIs that are neither declared nor
    external.
    """
    base = Iri(str(base).rstrip("/"))
    ns = base.value + "/"

    def local(iri) -> Optional[str]:
        if isinstance(iri, Iri) and iri.value.startswith(ns):
            return iri.value[len(ns):]
        return None

    class_iris = {s for s in g.subjects(RDF_TYPE, OWL.Class) if local(s)}
    prop_iris = {s for s in g.subjects(RDF_TYPE, OWL.ObjectProperty) if local(s)}

    def resolve(iri: Iri, context: str) -> Iri:
        if iri in class_iris or iri in prop_iris or is_external(iri):
            return iri
        raise DanglingReference(f"{context}: {iri} is neither declared nor external")

    classes, restrictions = [], []
    for c in sorted(class_iris, key=lambda i: i.value):
        comments = [o.lexical for o in g.objects(c, RDFS.comment) if isinstance(o, Literal)]
        supers = set()
        for sup in g.objects(c, RDFS.subClassOf):
            if isinstance(sup, BlankNode):
                prop, filler = _parse_restriction(g, sup)
                restrictions.append(
                    RestrictionDecl(c, resolve(prop, f"restriction on {c}"), resolve(filler, f"restriction on {c}"))
                )
            elif isinstance(sup, Iri):
                supers.add(resolve(sup, f"superclass of {c}"))
        classes.append(ClassDecl(local(c), c, _labels(g, c), sorted(comments)[0] if comments else "", supers))

    properties = []
    for p in sorted(prop_iris, key=lambda i: i.value):
        refs = {}
        for key, pred in (
            ("domain", RDFS.domain),
            ("range", RDFS.range),
            ("inverse", OWL.inverseOf),
            ("intended_domain", INTENDED_DOMAIN),
            ("intended_range", INTENDED_RANGE),
        ):
            value = _optional_iri(g, p, pred)
            refs[key] = resolve(value, f"{key} of {p}") if value is not None else None
        alts = {o.lexical for o in g.objects(p, ALTERNATE_NAME) if isinstance(o, Literal)}
        properties.append(PropertyDecl(local(p), p, _labels(g, p), alt_names=alts, **refs))

    disjoint = []
    for t in g.match(None, OWL.disjointWith, None):
        if not isinstance(t.subject, Iri) or not isinstance(t.object, Iri):
            raise SchemaError(f"owl:disjointWith between non-IRIs: {t}")
        disjoint.append(DisjointnessDecl(resolve(t.subject, "disjointness"), resolve(t.object, "disjointness")))

    defined = []
    for t in g.match(None, OWL.equivalentClass, None):
        if not isinstance(t.object, BlankNode):
            continue
        members = _parse_list(g, _single(g, t.object, OWL.intersectionOf, "owl:intersectionOf"))
        bases = [m for m in members if isinstance(m, Iri)]
        conds = [m for m in members if isinstance(m, BlankNode)]
        if len(bases) != 1 or len(conds) != 1:
            raise MalformedRestriction(f"{t.subject}: expected a class and one restriction in the intersection")
        prop, filler = _parse_restriction(g, conds[0])
        ctx = f"definition of {t.subject}"
        defined.append(
            DefinedClassDecl(resolve(t.subject, ctx), resolve(bases[0], ctx), resolve(prop, ctx), resolve(filler, ctx))
        )

    return OntologySchema(
        base=base,
        classes=classes,
        properties=properties,
        restrictions=restrictions,
        disjointness=disjoint,
        defined=defined,
    )


def ontology_base(g: Graph) -> Iri:
    """The IRI of the single owl:Ontology node in ``g``."""
    found = sorted((s for s in g.subjects(RDF_TYPE, OWL.Ontology) if isinstance(s, Iri)), key=lambda i: i.value)
    if len(found) != 1:
        raise SchemaError(f"expected exactly one owl:Ontology declaration, found {len(found)}")
    return found[0]


def schema_to_turtle(schema: OntologySchema) -> str:
    return serialize_turtle(*schema_to_graph(schema))


def schema_from_turtle(text) -> OntologySchema:
    g, _ = parse_turtle(text)
    return graph_to_schema(g, ontology_base(g))
