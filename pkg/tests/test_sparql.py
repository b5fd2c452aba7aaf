import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_evaluate, query_text, random_bgp_case, random_schema_graph
from opskit.demo import MANIFEST, QUERY_ACTIONS, QUERY_ACTORS, QUERY_CAUSES, demo_graph, demo_prefixes
from opskit.ontology import build_ops_expanded, build_ops_restricted
from opskit.ontology.vocab import DEFAULT_BASE, default_prefixes
from opskit.rdf import RDF_TYPE, BlankNode, Graph, Iri, Literal, Namespace, Triple
from opskit.reasoner import materialize
from opskit.sparql import (
    ProjectedVariableUnused,
    Query,
    QuerySyntaxError,
    ResultTable,
    TriplePattern,
    Variable,
    evaluate,
    parse_query,
    run_query,
)

OPS = Namespace(DEFAULT_BASE + "/")
EX = Namespace("http://example.org/q/")
PM = default_prefixes()

seeds = st.integers(min_value=0, max_value=2**31)


def errors(text):
    with pytest.raises(QuerySyntaxError) as info:
        parse_query(text, PM)
    return info.value


# parsing


def test_actor_query_has_three_patterns():
    q = parse_query(QUERY_ACTORS, PM)
    assert len(q.patterns) == 3
    assert q.header == ["s", "s2", "s3"]
    assert q.patterns[0] == TriplePattern(Variable("s"), RDF_TYPE, OPS.SocialActor)


def test_keywords_are_case_insensitive_and_prefixes_declared_inline():
    q = parse_query("PREFIX ex: <http://example.org/q/>\nSeLeCt DISTINCT * WhErE { ?a ex:p \"v\"@en } limit 2")
    assert q.projection is None and q.distinct and q.limit == 2
    assert q.patterns[0].object == Literal("v", language="en")


def test_empty_pattern_group():
    assert "empty pattern group" in str(errors("select ?x where { }"))


def test_projected_variable_unused():
    with pytest.raises(ProjectedVariableUnused):
        parse_query("select ?z where {?s ?p ?o}", PM)


@pytest.mark.parametrize(
    "text",
    [
        "select ?s where { ?s a nope:X }",
        "select ?s where { ?s ?p _:b }",
        "select ?s where { ?s ?p ?o } limit 0",
        "select ?s where { ?s ?p ?o",
        "select ?s { ?s ?p ?o } order by ?s",
        "construct { ?s ?p ?o } where { ?s ?p ?o }",
    ],
)
def test_rejected_queries(text):
    err = errors(text)
    assert err.diagnostics and all(d.line >= 1 and d.column >= 1 for d in err.diagnostics)


def test_earlier_errors_suppress_follow_on_diagnostics():
    err = errors("select ?z where { ?s a nope:X }")
    assert len(err.diagnostics) == 1
    assert not isinstance(err, ProjectedVariableUnused)


# evaluation


def test_cause_query_on_single_edge():
    g = Graph([Triple(EX.x, OPS.starts, EX.c)])
    assert run_query(QUERY_CAUSES, g, PM).rows == [(EX.x, EX.c)]


@pytest.mark.parametrize("text", [QUERY_ACTORS, QUERY_CAUSES, QUERY_ACTIONS])
def test_empty_graph_gives_no_rows(text):
    assert run_query(text, Graph(), PM).rows == []


def test_bag_semantics_and_distinct():
    g = Graph([Triple(EX.a, EX.p, EX.b), Triple(EX.a, EX.q, EX.b)])
    assert len(run_query("select ?s where { ?s ?p ?o }", g)) == 2
    assert len(run_query("select distinct ?s where { ?s ?p ?o }", g)) == 1


def test_limit_applies_after_sorting():
    g = Graph(Triple(EX.term(f"n{i}"), EX.p, EX.o) for i in (3, 1, 2))
    table = run_query("select ?s where { ?s <http://example.org/q/p> ?o } limit 2", g)
    assert table.column("s") == [EX.n1, EX.n2]


def test_repeated_variable_joins_within_pattern():
    g = Graph([Triple(EX.a, EX.p, EX.a), Triple(EX.a, EX.p, EX.b)])
    assert run_query("select ?x where { ?x <http://example.org/q/p> ?x }", g).rows == [(EX.a,)]


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_evaluate_matches_exhaustive_enumeration(seed):
    q, g = random_bgp_case(random.Random(seed))
    assert evaluate(q, g).rows == brute_evaluate(q, g)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_text_round_trip_preserves_results(seed):
    q, g = random_bgp_case(random.Random(seed))
    assert evaluate(parse_query(query_text(q)), g).rows == evaluate(q, g).rows


@settings(max_examples=100, deadline=None)
@given(seeds, st.randoms(use_true_random=False))
def test_join_order_independence(seed, shuffler):
    q, g = random_bgp_case(random.Random(seed))
    patterns = list(q.patterns)
    shuffler.shuffle(patterns)
    permuted = Query(q.prefixes, q.projection, patterns, True, None)
    original = Query(q.prefixes, q.projection, q.patterns, True, None)
    # compare by name: with '*' the column order follows first appearance
    def solutions(query):
        return {frozenset(b.items()) for b in evaluate(query, g).bindings()}

    assert solutions(permuted) == solutions(original)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_inference_only_adds_rows(seed):
    schema = build_ops_expanded()
    rng = random.Random(seed)
    g = random_schema_graph(rng, schema)
    cls = rng.choice(sorted(schema.class_iris(), key=lambda c: c.value))
    q = parse_query(f"select ?s ?p ?o where {{ ?s a {cls.n3()} . ?s ?p ?o }}")
    assert set(evaluate(q, g).rows) <= set(evaluate(q, materialize(g, schema)).rows)


# the three demo queries


def _demo():
    return materialize(demo_graph(), build_ops_restricted())


def test_actor_column_covers_people_and_organizations():
    table = run_query(QUERY_ACTORS, _demo(), demo_prefixes())
    actors = set(table.column("s"))
    assert set(table.column("s2")) | set(table.column("s3")) <= actors
    assert actors == set(MANIFEST.social_actors)


def test_cause_and_action_queries_against_manifest():
    g = _demo()
    causes = run_query(QUERY_CAUSES, g, demo_prefixes())
    assert set(causes.rows) == {(MANIFEST.iri(i), MANIFEST.iri(c)) for i, c in MANIFEST.initiatives}
    actions = run_query(QUERY_ACTIONS, g, demo_prefixes())
    assert set(actions.rows) == {
        (MANIFEST.iri(a), MANIFEST.iri(e), MANIFEST.iri(s), MANIFEST.iri(r)) for a, s, e, r in MANIFEST.actions
    }


# output shapes


def test_sparql_json_shape():
    table = ResultTable(
        ["s", "o"],
        [(EX.a, Literal("x", language="en")), (BlankNode("b"), Literal("1", datatype=Iri("http://www.w3.org/2001/XMLSchema#integer")))],
    )
    data = json.loads(table.to_sparql_json())
    assert data["head"] == {"vars": ["s", "o"]}
    first, second = data["results"]["bindings"]
    assert first == {"s": {"type": "uri", "value": EX.a.value}, "o": {"type": "literal", "value": "x", "xml:lang": "en"}}
    assert second["s"] == {"type": "bnode", "value": "b"}
    assert second["o"]["datatype"].endswith("#integer")
    assert "datatype" not in json.loads(ResultTable(["o"], [(Literal("plain"),)]).to_sparql_json())["results"]["bindings"][0]["o"]


def test_tsv_shape():
    table = ResultTable(["s", "o"], [(EX.a, Literal("x"))])
    assert table.to_tsv() == f"?s\t?o\n<{EX.a.value}>\t\"x\"\n"
    assert ResultTable(["s"], []).to_tsv() == "?s\n"
