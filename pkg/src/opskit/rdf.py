"""RDF terms, triples and an indexed in-memory graph."""
from __future__ import annotations

import itertools
import re
import threading
from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, Mapping, Optional, Set, Tuple, Union

_SCHEME = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
_BNODE_ID = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_\-]*$")


class InvalidIri(ValueError):
    pass


class WhitespaceInIri(InvalidIri):
    pass


class MissingScheme(InvalidIri):
    pass


class UnknownPrefix(KeyError):
    pass


@dataclass(frozen=True, slots=True)
class Iri:
    value: str

    def __post_init__(self):
        if not isinstance(self.value, str):
            raise TypeError(f"IRI value must be str, got {type(self.value).__name__}")
        if any(ch.isspace() for ch in self.value):
            raise WhitespaceInIri(f"whitespace in IRI {self.value!r}")
        m = _SCHEME.match(self.value)
        if not m or len(self.value) == m.end():
            raise MissingScheme(f"no scheme in IRI {self.value!r}")

    def __str__(self):
        return self.value

    def __add__(self, suffix: str) -> "Iri":
        return Iri(self.value + suffix)

    @property
    def sort_key(self):
        return (0, self.value, "")

    def n3(self) -> str:
        return "<" + escape_iri(self.value) + ">"


@dataclass(frozen=True, slots=True)
class BlankNode:
    id: str

    def __post_init__(self):
        if not self.id or not _BNODE_ID.match(self.id):
            raise ValueError(f"invalid blank node id {self.id!r}")

    def __str__(self):
        return "_:" + self.id

    @property
    def sort_key(self):
        return (1, self.id, "")

    def n3(self) -> str:
        return "_:" + self.id


XSD = "http://www.w3.org/2001/XMLSchema#"
XSD_STRING = Iri(XSD + "string")


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    language: Optional[str] = None
    datatype: Optional[Iri] = None

    def __post_init__(self):
        if self.language is not None and self.datatype is not None:
            raise ValueError("a literal cannot carry both a language tag and a datatype")
        if self.language is not None and not self.language:
            raise ValueError("empty language tag")
        if self.language is None and self.datatype is None:
            object.__setattr__(self, "datatype", XSD_STRING)

    def __str__(self):
        return self.lexical

    @property
    def sort_key(self):
        suffix = "@" + self.language if self.language else "^^" + self.datatype.value
        return (2, self.lexical, suffix)

    def n3(self) -> str:
        text = '"' + escape_string(self.lexical) + '"'
        if self.language:
            return text + "@" + self.language
        if self.datatype != XSD_STRING:
            return text + "^^" + self.datatype.n3()
        return text


Term = Union[Iri, Literal, BlankNode]
Subject = Union[Iri, BlankNode]


def make_iri(text: str) -> Iri:
    """Validate ``text`` and return it as an :class:`Iri`.

    Raises WhitespaceInIri or MissingScheme.
    """
    return Iri(text)


_STRING_ESCAPES = {'"': '\\"', "\\": "\\\\", "\n": "\\n", "\t": "\\t", "\r": "\\r"}


def escape_string(text: str) -> str:
    out = []
    for ch in text:
        if ch in _STRING_ESCAPES:
            out.append(_STRING_ESCAPES[ch])
        elif ord(ch) < 0x20 or ord(ch) == 0x7F:
            out.append("\\u%04X" % ord(ch))
        else:
            out.append(ch)
    return "".join(out)


def escape_iri(text: str) -> str:
    out = []
    for ch in text:
        if ch in '<>"{}|^`\\' or ord(ch) < 0x20:
            out.append("\\u%04X" % ord(ch))
        else:
            out.append(ch)
    return "".join(out)


@dataclass(frozen=True, slots=True)
class Triple:
    subject: Subject
    predicate: Iri
    object: Term

    def __post_init__(self):
        if not isinstance(self.subject, (Iri, BlankNode)):
            raise TypeError(f"subject must be an IRI or blank node, got {self.subject!r}")
        if not isinstance(self.predicate, Iri):
            raise TypeError(f"predicate must be an IRI, got {self.predicate!r}")
        if not isinstance(self.object, (Iri, BlankNode, Literal)):
            raise TypeError(f"object must be an RDF term, got {self.object!r}")

    def __iter__(self):
        return iter((self.subject, self.predicate, self.object))

    @property
    def sort_key(self):
        return (self.subject.sort_key, self.predicate.sort_key, self.object.sort_key)


class Namespace(str):
    """String namespace with attribute and item access to terms."""

    def term(self, name: str) -> Iri:
        return Iri(str(self) + name)

    def __getattr__(self, name: str) -> Iri:
        if name.startswith("__"):
            raise AttributeError(name)
        return self.term(name)

    def __getitem__(self, name):
        if isinstance(name, str):
            return self.term(name)
        return str.__getitem__(self, name)


RDF = Namespace("http://www.w3.org/1999/02/22-rdf-syntax-ns#")
RDFS = Namespace("http://www.w3.org/2000/01/rdf-schema#")
OWL = Namespace("http://www.w3.org/2002/07/owl#")
XSDNS = Namespace(XSD)
RDF_TYPE = RDF.type


class PrefixMap:
    """Bidirectional prefix <-> namespace table."""

    def __init__(self, bindings: Optional[Mapping[str, str]] = None):
        self._ns: Dict[str, str] = {}
        for prefix, ns in (bindings or {}).items():
            self.bind(prefix, ns)

    def bind(self, prefix: str, namespace) -> None:
        self._ns[prefix] = str(namespace)

    def __contains__(self, prefix):
        return prefix in self._ns

    def __getitem__(self, prefix) -> str:
        return self._ns[prefix]

    def __iter__(self):
        return iter(self._ns)

    def __len__(self):
        return len(self._ns)

    def __eq__(self, other):
        return isinstance(other, PrefixMap) and self._ns == other._ns

    def __repr__(self):
        return f"PrefixMap({self._ns!r})"

    def items(self):
        return self._ns.items()

    def copy(self) -> "PrefixMap":
        return PrefixMap(self._ns)

    def update(self, other: Union["PrefixMap", Mapping[str, str]]) -> None:
        for prefix, ns in other.items():
            self.bind(prefix, ns)

    def expand(self, qname: str) -> Iri:
        if qname.count(":") < 1:
            raise ValueError(f"not a prefixed name: {qname!r}")
        prefix, local = qname.split(":", 1)
        if prefix not in self._ns:
            raise UnknownPrefix(prefix)
        return Iri(self._ns[prefix] + local)

    def compact(self, iri: Iri, local_pattern: re.Pattern = re.compile(r"^[A-Za-z_][A-Za-z0-9_\-]*$")) -> Optional[str]:
        """Shortest prefixed form of ``iri`` whose local part matches ``local_pattern``."""
        best = None
        for prefix, ns in sorted(self._ns.items()):
            if iri.value.startswith(ns):
                local = iri.value[len(ns):]
                if local_pattern.match(local) and (best is None or len(ns) > len(self._ns[best[0]])):
                    best = (prefix, local)
        if best is None:
            return None
        return f"{best[0]}:{best[1]}"


def _add(index, a, b, c) -> None:
    index[a][b].add(c)


def _discard(index, a, b, c) -> None:
    inner = index.get(a)
    if inner is None:
        return
    leaf = inner.get(b)
    if leaf is None:
        return
    leaf.discard(c)
    if not leaf:
        del inner[b]
        if not inner:
            del index[a]


class Graph:
    """A set of triples with SPO, POS and OSP permutation indexes.

    Writers take an exclusive lock; ``match`` snapshots its answer under
    the same lock so readers never observe a half-applied insert.
    """

    def __init__(self, triples: Iterable[Triple] = ()):
        self._triples: Set[Triple] = set()
        self._spo = defaultdict(lambda: defaultdict(set))
        self._pos = defaultdict(lambda: defaultdict(set))
        self._osp = defaultdict(lambda: defaultdict(set))
        self._lock = threading.RLock()
        for t in triples:
            self.insert(t)

    def insert(self, t: Triple) -> bool:
        with self._lock:
            if t in self._triples:
                return False
            self._triples.add(t)
            s, p, o = t.subject, t.predicate, t.object
            _add(self._spo, s, p, o)
            _add(self._pos, p, o, s)
            _add(self._osp, o, s, p)
            return True

    add = insert

    def add_all(self, triples: Iterable[Triple]) -> int:
        return sum(1 for t in triples if self.insert(t))

    def remove(self, t: Triple) -> bool:
        with self._lock:
            if t not in self._triples:
                return False
            self._triples.discard(t)
            s, p, o = t.subject, t.predicate, t.object
            _discard(self._spo, s, p, o)
            _discard(self._pos, p, o, s)
            _discard(self._osp, o, s, p)
            return True

    def __len__(self):
        return len(self._triples)

    def __contains__(self, t):
        return t in self._triples

    def __iter__(self) -> Iterator[Triple]:
        with self._lock:
            snapshot = list(self._triples)
        return iter(snapshot)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    __hash__ = None

    def __repr__(self):
        return f"<Graph {len(self)} triples>"

    def triples(self) -> Set[Triple]:
        with self._lock:
            return set(self._triples)

    def copy(self) -> "Graph":
        return Graph(self._triples)

    def __or__(self, other: "Graph") -> "Graph":
        g = self.copy()
        g.add_all(other)
        return g

    def __sub__(self, other: "Graph") -> "Graph":
        return Graph(t for t in self._triples if t not in other)

    def issubset(self, other: "Graph") -> bool:
        return all(t in other for t in self._triples)

    def match(self, s: Optional[Term] = None, p: Optional[Iri] = None, o: Optional[Term] = None) -> Iterator[Triple]:
        """Yield the triples agreeing with every bound position."""
        with self._lock:
            found = list(self._lookup(s, p, o))
        return iter(found)

    def _lookup(self, s, p, o):
        if s is not None:
            by_p = self._spo.get(s)
            if not by_p:
                return
            if p is not None:
                objects = by_p.get(p, ())
                if o is not None:
                    if o in objects:
                        yield Triple(s, p, o)
                    return
                for obj in objects:
                    yield Triple(s, p, obj)
                return
            if o is not None:
                for pred in self._osp.get(o, {}).get(s, ()):
                    yield Triple(s, pred, o)
                return
            for pred, objects in by_p.items():
                for obj in objects:
                    yield Triple(s, pred, obj)
            return
        if p is not None:
            by_o = self._pos.get(p)
            if not by_o:
                return
            if o is not None:
                for subj in by_o.get(o, ()):
                    yield Triple(subj, p, o)
                return
            for obj, subjects in by_o.items():
                for subj in subjects:
                    yield Triple(subj, p, obj)
            return
        if o is not None:
            for subj, preds in self._osp.get(o, {}).items():
                for pred in preds:
                    yield Triple(subj, pred, o)
            return
        yield from self._triples

    def objects(self, s=None, p=None) -> Iterator[Term]:
        return (t.object for t in self.match(s, p, None))

    def subjects(self, p=None, o=None) -> Iterator[Subject]:
        return (t.subject for t in self.match(None, p, o))

    def value(self, s=None, p=None, o=None) -> Optional[Term]:
        """First unbound-position value of a single matching triple, sorted for determinism."""
        found = sorted(self.match(s, p, o), key=lambda t: t.sort_key)
        if not found:
            return None
        t = found[0]
        if o is None:
            return t.object
        if s is None:
            return t.subject
        return t.predicate

    def blank_nodes(self) -> Set[BlankNode]:
        nodes = set()
        for t in self._triples:
            if isinstance(t.subject, BlankNode):
                nodes.add(t.subject)
            if isinstance(t.object, BlankNode):
                nodes.add(t.object)
        return nodes

    def merge(self, other: "Graph") -> Dict[BlankNode, BlankNode]:
        """Add ``other`` into this graph, renaming its blank nodes that collide with ours.

        Returns the renaming applied.
        """
        taken = {b.id for b in self.blank_nodes()} | {b.id for b in other.blank_nodes()}
        counter = itertools.count(1)
        renames: Dict[BlankNode, BlankNode] = {}
        ours = self.blank_nodes()
        for b in sorted(other.blank_nodes(), key=lambda n: n.id):
            if b in ours:
                while True:
                    fresh = f"{b.id}-m{next(counter)}"
                    if fresh not in taken:
                        break
                taken.add(fresh)
                renames[b] = BlankNode(fresh)

        def rn(term):
            return renames.get(term, term)

        for t in other:
            self.insert(Triple(rn(t.subject), t.predicate, rn(t.object)))
        return renames

    def isomorphic(self, other: "Graph") -> bool:
        return isomorphic(self, other)


def _signature_refine(graph: Graph, nodes: Set[BlankNode]) -> Dict[BlankNode, int]:
    """Iterated colour refinement of blank nodes by their ground neighbourhood."""
    colour = {b: 0 for b in nodes}
    for _ in range(len(nodes) + 1):
        sigs = {}
        for b in nodes:
            parts = []
            for t in graph.match(b, None, None):
                o = ("B", colour[t.object]) if isinstance(t.object, BlankNode) else ("G", t.object.sort_key)
                parts.append(("out", t.predicate.value, o))
            for t in graph.match(None, None, b):
                s = ("B", colour[t.subject]) if isinstance(t.subject, BlankNode) else ("G", t.subject.sort_key)
                parts.append(("in", t.predicate.value, s))
            sigs[b] = (colour[b], tuple(sorted(parts, key=repr)))
        ranked = {sig: i for i, sig in enumerate(sorted(set(sigs.values()), key=repr))}
        new = {b: ranked[sigs[b]] for b in nodes}
        if len(set(new.values())) == len(set(colour.values())):
            colour = new
            break
        colour = new
    return colour


def isomorphic(g1: Graph, g2: Graph) -> bool:
    """Graph equality up to blank-node relabelling."""
    if len(g1) != len(g2):
        return False
    b1, b2 = g1.blank_nodes(), g2.blank_nodes()
    if len(b1) != len(b2):
        return False
    ground1 = {t for t in g1 if not isinstance(t.subject, BlankNode) and not isinstance(t.object, BlankNode)}
    ground2 = {t for t in g2 if not isinstance(t.subject, BlankNode) and not isinstance(t.object, BlankNode)}
    if ground1 != ground2:
        return False
    if not b1:
        return True
    # colours are only comparable if computed jointly, so refine over the disjoint union
    union = Graph()
    tag1 = {b: BlankNode("l" + b.id) for b in b1}
    tag2 = {b: BlankNode("r" + b.id) for b in b2}
    for t in g1:
        union.insert(Triple(tag1.get(t.subject, t.subject), t.predicate, tag1.get(t.object, t.object)))
    for t in g2:
        union.insert(Triple(tag2.get(t.subject, t.subject), t.predicate, tag2.get(t.object, t.object)))
    joint = _signature_refine(union, set(tag1.values()) | set(tag2.values()))
    c1 = {b: joint[tag1[b]] for b in b1}
    c2 = {b: joint[tag2[b]] for b in b2}
    if sorted(c1.values()) != sorted(c2.values()):
        return False
    target = g2.triples()
    order = sorted(b1, key=lambda b: (sum(1 for v in c1.values() if v == c1[b]), c1[b], b.id))
    candidates = {b: [x for x in b2 if c2[x] == c1[b]] for b in b1}
    nonground1 = [t for t in g1 if t not in ground1]

    def consistent(mapping):
        for t in nonground1:
            s = mapping.get(t.subject, t.subject) if isinstance(t.subject, BlankNode) else t.subject
            o = mapping.get(t.object, t.object) if isinstance(t.object, BlankNode) else t.object
            if (isinstance(t.subject, BlankNode) and t.subject not in mapping) or (
                isinstance(t.object, BlankNode) and t.object not in mapping
            ):
                continue
            if Triple(s, t.predicate, o) not in target:
                return False
        return True

    def search(i, mapping, used):
        if i == len(order):
            return True
        b = order[i]
        for cand in candidates[b]:
            if cand in used:
                continue
            mapping[b] = cand
            used.add(cand)
            if consistent(mapping) and search(i + 1, mapping, used):
                return True
            del mapping[b]
            used.discard(cand)
        return False

    return search(0, {}, set())


def term_key(term: Term) -> Tuple:
    return term.sort_key
