import json
from pathlib import Path
from urllib.parse import quote, urlencode

import pytest

from opskit.data import SERVICE_CONFIG, data_path
from opskit.demo import MANIFEST, QUERY_ACTORS, demo_graph
from opskit.ontology import build_ops_core, schema_to_graph
from opskit.ontology.vocab import DEFAULT_BASE
from opskit.rdf import RDF_TYPE, RDFS, Graph, Iri, Namespace, Triple
from opskit.service import (
    HTML_TYPE,
    SPARQL_JSON_TYPE,
    TSV_TYPE,
    TURTLE_TYPE,
    ConfigError,
    Format,
    LinkedDataService,
    NotFound,
    ServiceConfig,
    describe,
    extract_embedded_turtle,
    handle_sparql,
    load_config,
    negotiate,
    negotiate_results,
    parse_config,
    query_graph,
)
from opskit.sparql import QuerySyntaxError
from opskit.turtle import parse_turtle

OPS = Namespace(DEFAULT_BASE + "/")
PATH = "/socialparticipation/ops/"
CORE_CLASSES = sorted(build_ops_core().classes)


@pytest.fixture(scope="module")
def service():
    return LinkedDataService(ServiceConfig(profile="expanded"), demo_graph())


def get(service, target, accept=None):
    return service.handle("GET", target, {"Accept": accept} if accept else {})


# describe


def test_social_actor_inbound_subclass_edges():
    g, _ = schema_to_graph(build_ops_core())
    desc = describe(OPS.SocialActor, g)
    subs = {t.subject for t in desc.inbound if t.predicate == RDFS.subClassOf}
    assert {OPS.Person, OPS.Organization, OPS.Executor, OPS.Initiator, OPS.Supporter} <= subs
    assert set(desc.labels) == {"pt-br", "es", "en"}


def test_unknown_focus_is_not_found():
    with pytest.raises(NotFound):
        describe(OPS.Nothing, schema_to_graph(build_ops_core())[0])


def test_describe_matches_full_scan():
    g = query_graph(demo_graph(), build_ops_core())
    foci = {t.subject for t in g if isinstance(t.subject, Iri)} | {OPS.SocialActor}
    for focus in sorted(foci, key=lambda x: x.value)[:60]:
        desc = describe(focus, g)
        scan = {t for t in g.triples() if focus in (t.subject, t.object)}
        assert set(desc.outbound) | set(desc.inbound) == scan


def test_describe_with_schema_argument():
    desc = describe(OPS.Cause, Graph(), build_ops_core())
    assert Triple(OPS.Cause, RDF_TYPE, Iri("http://www.w3.org/2002/07/owl#Class")) in desc.outbound


# negotiation


@pytest.mark.parametrize(
    "accept, expected",
    [
        ("text/html,application/xhtml+xml", Format.HTML),
        ("text/turtle", Format.TURTLE),
        ("", Format.TURTLE),
        (None, Format.TURTLE),
        ("application/rdf+xml", Format.TURTLE),
        ("image/png", Format.TURTLE),
        ("text/html;q=0.5, text/turtle", Format.TURTLE),
        ("text/turtle;q=0.2, text/html;q=0.9", Format.HTML),
        ("text/html;q=0, */*", Format.TURTLE),
        ("text/html,application/xhtml+xml,application/xml;q=0.9,*/*;q=0.8", Format.HTML),
    ],
)
def test_negotiate(accept, expected):
    assert negotiate(accept) == expected


def test_negotiate_results():
    assert negotiate_results(None) == Format.SPARQL_JSON
    assert negotiate_results(TSV_TYPE) == Format.TSV
    assert negotiate_results("text/html") == Format.SPARQL_JSON


# sparql


def test_handle_sparql_covers_seeded_actors():
    g = query_graph(demo_graph(), build_ops_core())
    table = handle_sparql("select distinct ?s where { ?s a ops:SocialActor }", g)
    assert set(table.column("s")) >= set(MANIFEST.social_actors)


def test_handle_sparql_errors_and_empty():
    with pytest.raises(QuerySyntaxError):
        handle_sparql("select ?s where { ?s a }", Graph())
    assert len(handle_sparql("select ?s where { ?s a ops:Cause }", Graph())) == 0


def test_endpoint_get_and_post(service):
    q = "select distinct ?s where { ?s a ops:SocialActor }"
    by_get = get(service, "/sparql?" + urlencode({"query": q}))
    assert by_get.status == 200 and by_get.content_type.startswith(SPARQL_JSON_TYPE)
    by_form = service.handle("POST", "/sparql", {"Content-Type": "application/x-www-form-urlencoded"}, urlencode({"query": q}).encode())
    by_body = service.handle("POST", "/sparql", {"Content-Type": "application/sparql-query"}, q.encode())
    assert by_get.body == by_form.body == by_body.body
    rows = json.loads(by_get.body)["results"]["bindings"]
    assert {r["s"]["value"] for r in rows} >= {a.value for a in MANIFEST.social_actors}


def test_endpoint_errors(service):
    bad = get(service, "/sparql?" + urlencode({"query": "select ?s where { ?s a nope:X }"}))
    assert bad.status == 400 and "nope" in bad.text
    assert get(service, "/sparql").status == 400
    assert service.handle("DELETE", "/sparql", {}).status == 405


def test_endpoint_tsv(service):
    resp = get(service, "/sparql?" + urlencode({"query": QUERY_ACTORS}), TSV_TYPE)
    assert resp.content_type.startswith(TSV_TYPE)
    assert resp.text.splitlines()[0] == "?s\t?s2\t?s3"


def test_health(service):
    assert get(service, "/health").text == "ok"


# dereferencing


@pytest.mark.parametrize("name", CORE_CLASSES)
def test_every_core_class_dereferences(service, name):
    turtle = get(service, PATH + name, "text/turtle")
    page = get(service, PATH + name, "text/html")
    assert turtle.status == page.status == 200
    assert turtle.content_type.startswith(TURTLE_TYPE) and page.content_type.startswith(HTML_TYPE)
    g, _ = parse_turtle(turtle.body)
    assert g == describe(OPS.term(name), service.snapshot.graph).graph()
    h, _ = parse_turtle(extract_embedded_turtle(page.text))
    assert g == h


def test_responses_are_byte_identical(service):
    assert get(service, PATH + "Person").body == get(service, PATH + "Person").body


def test_unknown_resource_is_404(service):
    assert get(service, PATH + "Nothing").status == 404
    assert get(service, "/" + quote("has space")).status == 404
    assert service.handle("POST", PATH + "Person", {}).status == 405


def test_instances_dereference_under_their_own_origin():
    base = "http://example.org/demo"
    svc = LinkedDataService(ServiceConfig(base=base), demo_graph())
    assert get(svc, "/demo/ana").status == 200


def test_reload_swaps_snapshot():
    svc = LinkedDataService(ServiceConfig(), Graph())
    ex = Iri("http://purl.org/extra/thing")
    assert get(svc, "/extra/thing").status == 404
    before = svc.snapshot
    svc.reload(Graph([Triple(ex, RDF_TYPE, OPS.Cause)]))
    assert svc.snapshot is not before
    assert get(svc, "/extra/thing").status == 200


def test_inference_flag():
    data = Graph([Triple(Iri("http://example.org/x"), RDF_TYPE, OPS.Person)])
    q = "/sparql?" + urlencode({"query": "select ?s where { ?s a ops:SocialActor }"})
    on = LinkedDataService(ServiceConfig(inference=True), data)
    off = LinkedDataService(ServiceConfig(inference=False), data)
    assert len(json.loads(get(on, q).body)["results"]["bindings"]) == 1
    assert len(json.loads(get(off, q).body)["results"]["bindings"]) == 0


# config


def test_bind_defaults():
    assert (parse_config("bind = :9000\n").host, parse_config("bind = localhost\n").port) == ("127.0.0.1", 8080)


def test_parse_config():
    cfg = parse_config(
        "bind = 0.0.0.0:9000\nbase = http://example.org/ops/\nprofile = expanded\n"
        "data = a.ttl, b.ttl\ninference = off\nprefix.ex = http://example.org/\n",
        relative_to=Path("/srv"),
    )
    assert (cfg.host, cfg.port, cfg.base, cfg.profile, cfg.inference) == ("0.0.0.0", 9000, "http://example.org/ops", "expanded", False)
    assert cfg.data == [Path("/srv/a.ttl"), Path("/srv/b.ttl")]
    assert cfg.prefixes == {"ex": "http://example.org/"}


@pytest.mark.parametrize(
    "text",
    ["profile = huge\n", "base = not an iri\n", "inference = maybe\n", "colour = blue\n", "bind = host:port\n", "bind = :70000\n"],
)
def test_config_errors(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_bundled_config_loads_demo():
    cfg = load_config(data_path("service.conf"))
    assert data_path("service.conf").read_text(encoding="utf-8") == SERVICE_CONFIG
    svc = LinkedDataService(cfg)
    assert len(svc.snapshot.data) == len(demo_graph())
