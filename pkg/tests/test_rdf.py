import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_isomorphic
from opskit.ontology import build_ops_expanded
from opskit.ontology.vocab import default_prefixes
from opskit.rdf import (
    RDF_TYPE,
    XSD_STRING,
    BlankNode,
    Graph,
    InvalidIri,
    Iri,
    Literal,
    MissingScheme,
    PrefixMap,
    Triple,
    UnknownPrefix,
    WhitespaceInIri,
    isomorphic,
    make_iri,
)

EX = "http://example.org/"
OPS = "http://purl.org/socialparticipation/ops/"

iris = st.sampled_from([Iri(EX + n) for n in ("a", "b", "c", "d")])
preds = st.sampled_from([Iri(EX + "p"), Iri(EX + "q"), RDF_TYPE])
bnodes = st.sampled_from([BlankNode(f"b{i}") for i in range(4)])
literals = st.builds(Literal, st.sampled_from(["x", "y", ""]), st.sampled_from([None, "en"]))
subjects = st.one_of(iris, bnodes)
objects = st.one_of(iris, bnodes, literals)
triples = st.builds(Triple, subjects, preds, objects)


# terms


def test_make_iri_accepts_ontology_iris():
    assert make_iri(OPS + "SocialActor").value == OPS + "SocialActor"
    assert make_iri("http://lumii.lv/ontologies/Corais.owl").value == "http://lumii.lv/ontologies/Corais.owl"
    assert make_iri("urn:isbn:0451450523").value.startswith("urn:")


@pytest.mark.parametrize("text", ["http://ex.org/Espaço de Ação", "http://ex.org/a\tb", "http://ex.org/a\nb"])
def test_make_iri_rejects_whitespace(text):
    with pytest.raises(WhitespaceInIri):
        make_iri(text)


@pytest.mark.parametrize("text", ["SocialActor", "", "/relative/path", "1http://x"])
def test_make_iri_rejects_missing_scheme(text):
    with pytest.raises(MissingScheme):
        make_iri(text)


@given(st.text(min_size=0, max_size=20))
def test_make_iri_rejects_any_space(suffix):
    with pytest.raises(InvalidIri):
        make_iri("http://ex.org/" + suffix + " ")


def test_every_golden_iri_is_accepted():
    from opskit.data import data_path
    from opskit.turtle import parse_turtle

    for name in ("ops-core.ttl", "ops-restricted.ttl", "ops-expanded.ttl", "demo.ttl"):
        g, _ = parse_turtle(data_path(name).read_bytes())
        for t in g:
            for term in t:
                if isinstance(term, Iri):
                    assert make_iri(term.value) == term


def test_literal_defaults_and_exclusivity():
    assert Literal("x").datatype == XSD_STRING
    assert Literal("x", language="en").datatype is None
    with pytest.raises(ValueError):
        Literal("x", language="en", datatype=Iri(EX + "dt"))


def test_literal_n3():
    assert Literal("plain").n3() == '"plain"'
    assert Literal("Escopo", language="pt-br").n3() == '"Escopo"@pt-br'
    assert Literal('a "q"\n').n3() == '"a \\"q\\"\\n"'
    assert Literal("1", datatype=Iri(EX + "dt")).n3() == f'"1"^^<{EX}dt>'


def test_blank_node_id_must_be_non_empty():
    with pytest.raises(ValueError):
        BlankNode("")


def test_triple_position_constraints():
    with pytest.raises(TypeError):
        Triple(Literal("x"), RDF_TYPE, Iri(EX + "a"))
    with pytest.raises(TypeError):
        Triple(Iri(EX + "a"), BlankNode("p"), Iri(EX + "b"))


# prefixes


def test_expand_and_unknown_prefix():
    pm = PrefixMap({"ops": OPS})
    assert pm.expand("ops:Cause") == Iri(OPS + "Cause")
    with pytest.raises(UnknownPrefix):
        pm.expand("foo:Bar")


def test_compact_expand_round_trip_over_schema():
    schema = build_ops_expanded()
    pm = default_prefixes(schema.base)
    for iri in schema.class_iris() | schema.property_iris():
        q = pm.compact(iri)
        assert q is not None and q.startswith("ops:")
        assert pm.expand(q) == iri


def test_compact_prefers_longest_namespace():
    pm = PrefixMap({"ex": EX, "exs": EX + "sub/"})
    assert pm.compact(Iri(EX + "sub/x")) == "exs:x"
    assert pm.compact(Iri(EX + "sub/x/y")) is None


# graph


def test_insert_set_semantics():
    g = Graph()
    t = Triple(Iri(EX + "a"), RDF_TYPE, Iri(OPS + "Person"))
    assert g.insert(t) is True
    assert g.insert(t) is False
    assert len(g) == 1


def test_match_by_type():
    g = Graph()
    for name in ("alice", "bob"):
        g.add(Triple(Iri(EX + name), RDF_TYPE, Iri(OPS + "Person")))
    g.add(Triple(Iri(EX + "acme"), RDF_TYPE, Iri(OPS + "Organization")))
    assert len(list(g.match(None, RDF_TYPE, Iri(OPS + "Person")))) == 2
    assert list(Graph().match()) == []


def _scan(triple_set, s, p, o):
    return {t for t in triple_set if (s is None or t.subject == s) and (p is None or t.predicate == p) and (o is None or t.object == o)}


@settings(max_examples=150)
@given(st.lists(st.tuples(st.booleans(), triples), max_size=40), subjects, preds, objects)
def test_indexes_agree_with_scan(ops, s, p, o):
    g = Graph()
    reference = set()
    for add, t in ops:
        if add:
            assert g.insert(t) == (t not in reference)
            reference.add(t)
        else:
            assert g.remove(t) == (t in reference)
            reference.discard(t)
    assert len(g) == len(reference)
    assert g.triples() == reference
    for mask in range(8):
        bound = (s if mask & 1 else None, p if mask & 2 else None, o if mask & 4 else None)
        assert set(g.match(*bound)) == _scan(reference, *bound)


def test_merge_renames_colliding_blank_nodes():
    a = Graph([Triple(BlankNode("x"), RDF_TYPE, Iri(EX + "A"))])
    b = Graph([Triple(BlankNode("x"), RDF_TYPE, Iri(EX + "B"))])
    renames = a.merge(b)
    assert len(a) == 2
    assert len(a.blank_nodes()) == 2
    assert BlankNode("x") in renames


def _relabel(g, suffix):
    def r(x):
        return BlankNode(x.id + suffix) if isinstance(x, BlankNode) else x

    return Graph(Triple(r(t.subject), t.predicate, r(t.object)) for t in g)


@settings(max_examples=150)
@given(st.lists(triples, max_size=20))
def test_isomorphism_matches_bijection_search(ts):
    g = Graph(ts)
    h = _relabel(g, "z")
    assert isomorphic(g, g)
    assert isomorphic(g, h) and isomorphic(h, g)
    assert isomorphic(Graph(reversed(ts)), g)
    assert brute_isomorphic(g, h)


@settings(max_examples=150)
@given(st.lists(triples, max_size=12), st.lists(triples, max_size=12))
def test_isomorphism_agrees_with_oracle_on_pairs(a, b):
    g, h = Graph(a), Graph(b)
    assert isomorphic(g, h) == brute_isomorphic(g, h)


def test_isomorphism_distinguishes_structure():
    p = Iri(EX + "p")
    ring = Graph([Triple(BlankNode("a"), p, BlankNode("b")), Triple(BlankNode("b"), p, BlankNode("a"))])
    loops = Graph([Triple(BlankNode("a"), p, BlankNode("a")), Triple(BlankNode("b"), p, BlankNode("b"))])
    assert not isomorphic(ring, loops)
    assert ring != _relabel(ring, "q")
    assert isomorphic(ring, _relabel(ring, "q"))


def test_concurrent_writers_and_readers():
    g = Graph()

    def writer(k):
        for i in range(200):
            g.add(Triple(Iri(f"{EX}w{k}/{i}"), RDF_TYPE, Iri(EX + "T")))

    def reader():
        for _ in range(50):
            list(g.match(None, RDF_TYPE, None))

    threads = [threading.Thread(target=writer, args=(k,)) for k in range(4)] + [threading.Thread(target=reader) for _ in range(2)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(g) == 800
    assert len(list(g.match(None, None, Iri(EX + "T")))) == 800
