"""Declarative ontology model: classes, properties and class axioms."""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Optional, Tuple, Union

from opskit.ontology.vocab import LANGUAGES, is_external
from opskit.rdf import Iri

CAMEL_CASE = re.compile(r"^[A-Z][A-Za-z0-9]*$")
HEADLESS_CAMEL_CASE = re.compile(r"^[a-z][A-Za-z0-9]*$")

LabelsArg = Union[Mapping[str, str], Iterable[Tuple[str, str]]]


class SchemaError(ValueError):
    pass


def _freeze_labels(labels: LabelsArg) -> Tuple[Tuple[str, str], ...]:
    items = dict(labels.items() if isinstance(labels, Mapping) else labels)
    return tuple(sorted(items.items()))


def _check_labels(owner: str, labels: Tuple[Tuple[str, str], ...]) -> None:
    langs = [lang for lang, _ in labels]
    if sorted(langs) != sorted(LANGUAGES):
        raise SchemaError(f"{owner}: labels must be exactly {LANGUAGES}, got {langs}")
    for lang, text in labels:
        if not text.strip():
            raise SchemaError(f"{owner}: empty {lang} label")


class _Labelled:
    labels: Tuple[Tuple[str, str], ...]

    def label(self, lang: str) -> Optional[str]:
        for tag, text in self.labels:
            if tag == lang:
                return text
        return None

    @property
    def label_map(self) -> Dict[str, str]:
        return dict(self.labels)


@dataclass(frozen=True)
class ClassDecl(_Labelled):
    name: str
    iri: Iri
    labels: Tuple[Tuple[str, str], ...]
    comment: str
    superclasses: FrozenSet[Iri] = frozenset()

    def __post_init__(self):
        if not CAMEL_CASE.match(self.name):
            raise SchemaError(f"class name {self.name!r} is not CamelCase")
        object.__setattr__(self, "labels", _freeze_labels(self.labels))
        object.__setattr__(self, "superclasses", frozenset(self.superclasses))
        _check_labels(self.name, self.labels)
        if not self.comment.strip():
            raise SchemaError(f"class {self.name} has no comment")

    @property
    def upper(self) -> FrozenSet[Iri]:
        """Superclasses that live in an upper ontology (BFO/FOAF)."""
        return frozenset(s for s in self.superclasses if is_external(s))


@dataclass(frozen=True)
class PropertyDecl(_Labelled):
    name: str
    iri: Iri
    labels: Tuple[Tuple[str, str], ...]
    domain: Optional[Iri] = None
    range: Optional[Iri] = None
    inverse: Optional[Iri] = None
    alt_names: FrozenSet[str] = frozenset()
    intended_domain: Optional[Iri] = None
    intended_range: Optional[Iri] = None

    def __post_init__(self):
        if not HEADLESS_CAMEL_CASE.match(self.name):
            raise SchemaError(f"property name {self.name!r} is not headlessCamelCase")
        object.__setattr__(self, "labels", _freeze_labels(self.labels))
        object.__setattr__(self, "alt_names", frozenset(self.alt_names))
        _check_labels(self.name, self.labels)


@dataclass(frozen=True)
class RestrictionDecl:
    """Existential restriction: every ``on_class`` member has a ``property`` edge to a ``filler``."""

    on_class: Iri
    property: Iri
    filler: Iri
    kind: str = "existential"

    def __post_init__(self):
        if self.kind != "existential":
            raise SchemaError(f"unsupported restriction kind {self.kind!r}")


@dataclass(frozen=True)
class DisjointnessDecl:
    class_a: Iri
    class_b: Iri

    def __post_init__(self):
        if self.class_a == self.class_b:
            raise SchemaError(f"class {self.class_a} cannot be disjoint with itself")
        # unordered pair: store in canonical order
        if self.class_b.value < self.class_a.value:
            a, b = self.class_b, self.class_a
            object.__setattr__(self, "class_a", a)
            object.__setattr__(self, "class_b", b)

    def __contains__(self, iri):
        return iri == self.class_a or iri == self.class_b


@dataclass(frozen=True)
class DefinedClassDecl:
    """``defined_class`` is equivalent to ``base_class`` and some ``property`` edge to ``filler_class``."""

    defined_class: Iri
    base_class: Iri
    property: Iri
    filler_class: Iri


def _readonly(mapping) -> Mapping:
    return MappingProxyType(dict(mapping))


@dataclass(frozen=True)
class OntologySchema:
    base: Iri
    classes: Mapping[str, ClassDecl] = field(default_factory=dict)
    properties: Mapping[str, PropertyDecl] = field(default_factory=dict)
    restrictions: FrozenSet[RestrictionDecl] = frozenset()
    disjointness: FrozenSet[DisjointnessDecl] = frozenset()
    defined: FrozenSet[DefinedClassDecl] = frozenset()

    def __post_init__(self):
        if isinstance(self.base, str):
            object.__setattr__(self, "base", Iri(self.base.rstrip("/")))
        classes = self.classes if isinstance(self.classes, Mapping) else {c.name: c for c in self.classes}
        props = self.properties if isinstance(self.properties, Mapping) else {p.name: p for p in self.properties}
        object.__setattr__(self, "classes", _readonly(classes))
        object.__setattr__(self, "properties", _readonly(props))
        object.__setattr__(self, "restrictions", frozenset(self.restrictions))
        object.__setattr__(self, "disjointness", frozenset(self.disjointness))
        object.__setattr__(self, "defined", frozenset(self.defined))

    def __eq__(self, other):
        if not isinstance(other, OntologySchema):
            return NotImplemented
        return (
            self.base == other.base
            and dict(self.classes) == dict(other.classes)
            and dict(self.properties) == dict(other.properties)
            and self.restrictions == other.restrictions
            and self.disjointness == other.disjointness
            and self.defined == other.defined
        )

    __hash__ = None

    @property
    def namespace(self) -> str:
        return self.base.value + "/"

    def iri(self, name: str) -> Iri:
        return Iri(self.namespace + name)

    def local_name(self, iri: Iri) -> Optional[str]:
        if iri.value.startswith(self.namespace):
            return iri.value[len(self.namespace):]
        return None

    def class_by_iri(self, iri: Iri) -> Optional[ClassDecl]:
        name = self.local_name(iri)
        decl = self.classes.get(name) if name else None
        return decl if decl is not None and decl.iri == iri else None

    def property_by_iri(self, iri: Iri) -> Optional[PropertyDecl]:
        name = self.local_name(iri)
        decl = self.properties.get(name) if name else None
        return decl if decl is not None and decl.iri == iri else None

    def class_iris(self) -> FrozenSet[Iri]:
        return frozenset(c.iri for c in self.classes.values())

    def property_iris(self) -> FrozenSet[Iri]:
        return frozenset(p.iri for p in self.properties.values())

    def subclass_edges(self) -> Iterator[Tuple[Iri, Iri]]:
        for c in self.classes.values():
            for sup in c.superclasses:
                yield c.iri, sup

    def range_of(self, prop: Iri) -> Optional[Iri]:
        decl = self.property_by_iri(prop)
        return decl.range if decl else None

    def domain_of(self, prop: Iri) -> Optional[Iri]:
        decl = self.property_by_iri(prop)
        return decl.domain if decl else None

    def inverse_of(self, prop: Iri) -> Optional[Iri]:
        decl = self.property_by_iri(prop)
        if decl and decl.inverse:
            return decl.inverse
        for other in self.properties.values():
            if other.inverse == prop:
                return other.iri
        return None

    def disjoint(self, a: Iri, b: Iri) -> bool:
        if a == b:
            return False
        return DisjointnessDecl(a, b) in self.disjointness

    def resolves(self, iri: Iri) -> bool:
        return iri in self.class_iris() or iri in self.property_iris() or is_external(iri)

    def without_restrictions(self) -> "OntologySchema":
        return replace(self, restrictions=frozenset())

    def extend(self, classes=(), properties=(), restrictions=(), disjointness=(), defined=()) -> "OntologySchema":
        """A new schema with the given declarations added (same-name entries replaced)."""
        cls = dict(self.classes)
        cls.update({c.name: c for c in classes})
        props = dict(self.properties)
        props.update({p.name: p for p in properties})
        return OntologySchema(
            base=self.base,
            classes=cls,
            properties=props,
            restrictions=self.restrictions | frozenset(restrictions),
            disjointness=self.disjointness | frozenset(disjointness),
            defined=self.defined | frozenset(defined),
        )

    def check(self) -> None:
        """Raise SchemaError if any structural invariant fails."""
        for name, c in self.classes.items():
            if c.name != name or c.iri != self.iri(name):
                raise SchemaError(f"class {name}: IRI {c.iri} is not {self.iri(name)}")
            for sup in c.superclasses:
                if not self.resolves(sup):
                    raise SchemaError(f"class {name}: superclass {sup} does not resolve")
        for name, p in self.properties.items():
            if p.name != name or p.iri != self.iri(name):
                raise SchemaError(f"property {name}: IRI {p.iri} is not {self.iri(name)}")
            for ref in (p.domain, p.range, p.inverse, p.intended_domain, p.intended_range):
                if ref is not None and not self.resolves(ref):
                    raise SchemaError(f"property {name}: reference {ref} does not resolve")
        for r in self.restrictions:
            for ref in (r.on_class, r.property, r.filler):
                if not self.resolves(ref):
                    raise SchemaError(f"restriction {r}: {ref} does not resolve")
        for d in self.disjointness:
            for ref in (d.class_a, d.class_b):
                if not self.resolves(ref):
                    raise SchemaError(f"disjointness {d}: {ref} does not resolve")
        for d in self.defined:
            for ref in (d.defined_class, d.base_class, d.property, d.filler_class):
                if not self.resolves(ref):
                    raise SchemaError(f"defined class {d}: {ref} does not resolve")
        self._check_acyclic()

    def _check_acyclic(self) -> None:
        edges: Dict[Iri, set] = {}
        for sub, sup in self.subclass_edges():
            edges.setdefault(sub, set()).add(sup)
        state: Dict[Iri, int] = {}

        def visit(node, path):
            state[node] = 1
            for nxt in edges.get(node, ()):
                if state.get(nxt) == 1:
                    raise SchemaError("subclass cycle: " + " -> ".join(str(n) for n in path + [nxt]))
                if nxt not in state:
                    visit(nxt, path + [nxt])
            state[node] = 2

        for node in sorted(edges, key=lambda i: i.value):
            if node not in state:
                visit(node, [node])
