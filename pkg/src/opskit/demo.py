"""Synthetic participation dataset used by the examples, golden files and tests.

Everything here is invented. It is small enough to check by hand yet covers
every core class, and it satisfies the restricted profile's lint.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

from opskit.ontology.vocab import DEFAULT_BASE, default_prefixes
from opskit.rdf import RDF_TYPE, RDFS, Graph, Iri, Literal, Namespace, PrefixMap, Triple

DEMO_NS = Namespace("http://example.org/demo/")

QUERY_ACTORS = "select ?s ?s2 ?s3 where {?s a ops:SocialActor . ?s2 a ops:Person . ?s3 a ops:Organization}"
QUERY_CAUSES = "select ?s ?o where {?s ops:starts ?o}"
QUERY_ACTIONS = "select ?s ?s2 ?o ?o2 where {?s a ops:Action . ?s ops:belongsTo ?o . ?s2 ops:executes ?s . ?s ops:produces ?o2}"
QUERIES = (QUERY_ACTORS, QUERY_CAUSES, QUERY_ACTIONS)


@dataclass(frozen=True)
class DemoManifest:
    persons: Tuple[str, ...] = ("ana", "bruno", "carla")
    organizations: Tuple[str, ...] = ("riverCollective", "neighborhoodAssociation")
    # (initiator, cause)
    initiatives: Tuple[Tuple[str, str], ...] = (("ana", "cleanRiver"), ("neighborhoodAssociation", "safeBikeLanes"))
    # (action, scope, executor, result)
    actions: Tuple[Tuple[str, str, str, str], ...] = (
        ("cleanupDay", "riverbank", "carla", "cleanerRiverbank"),
        ("lanePainting", "downtown", "riverCollective", "paintedLanes"),
    )
    # (supporter, cause)
    supports: Tuple[Tuple[str, str], ...] = (("bruno", "cleanRiver"),)
    # cause -> (theme, problem, solution, action)
    cause_details: Tuple[Tuple[str, str, str, str, str], ...] = (
        ("cleanRiver", "environment", "pollution", "riverRestoration", "cleanupDay"),
        ("safeBikeLanes", "mobility", "traffic", "protectedLanes", "lanePainting"),
    )
    # result -> solution
    contributions: Tuple[Tuple[str, str], ...] = (
        ("cleanerRiverbank", "riverRestoration"),
        ("paintedLanes", "protectedLanes"),
    )

    @staticmethod
    def iri(name: str) -> Iri:
        return DEMO_NS.term(name)

    @property
    def social_actors(self) -> List[Iri]:
        return [self.iri(n) for n in self.persons + self.organizations]


MANIFEST = DemoManifest()


def demo_prefixes(base: str = DEFAULT_BASE) -> PrefixMap:
    pm = default_prefixes(base)
    pm.bind("demo", str(DEMO_NS))
    return pm


def demo_graph(base: str = DEFAULT_BASE, manifest: DemoManifest = MANIFEST) -> Graph:
    ops = Namespace(base.rstrip("/") + "/")
    d = manifest.iri
    g = Graph()

    def add(s, p, o):
        g.add(Triple(d(s), ops.term(p) if isinstance(p, str) else p, d(o) if isinstance(o, str) else o))

    def typed(s, cls):
        add(s, RDF_TYPE, ops.term(cls))

    def label(s, text):
        add(s, RDFS.label, Literal(text, language="en"))

    typed("engaged", "ParticipationCharacteristic")
    label("engaged", "engaged")
    for name in manifest.persons:
        typed(name, "Person")
        label(name, name.capitalize())
    for name in manifest.organizations:
        typed(name, "Organization")
    for name in manifest.persons + manifest.organizations:
        add(name, "trait", "engaged")
    for who, cause in manifest.initiatives:
        typed(who, "Initiator")
        add(who, "starts", cause)
    for who, cause in manifest.supports:
        typed(who, "Supporter")
        add(who, "supports", cause)
    for cause, theme, problem, solution, action in manifest.cause_details:
        typed(cause, "Cause")
        add(cause, "theme", theme)
        add(cause, "proposes", solution)
        add(cause, "action", action)
        typed(theme, "Theme")
        typed(problem, "Problem")
        add(problem, "generates", cause)
        typed(solution, "Solution")
        add(solution, "solves", problem)
    for action, scope, executor, result in manifest.actions:
        typed(action, "Action")
        add(action, "belongsTo", scope)
        add(action, "produces", result)
        typed(scope, "Scope")
        typed(executor, "Executor")
        add(executor, "executes", action)
        typed(result, "Result")
    for result, solution in manifest.contributions:
        add(result, "contributesTo", solution)
    return g


# a "participation platform export"; row 4 has a space in its id
DEMO_CSV = """\
user_id,display_name,joined,bio,cause_id
u101,Dora Lima,2015-03-02,"moradora do bairro, ciclista",safeBikeLanes
u102,Eduardo Reis,2015-04-18,,cleanRiver
u103,"Fernanda ""Nanda"" Souza",2016-01-09,professora,
u 104,Gil Alves,2016-02-27,,cleanRiver
"""

DEMO_MAPPING = """\
[prefixes]
demo = http://example.org/demo/

[participant]
subject = demo:participant/{user_id}
type = ops:Person
col.display_name = rdfs:label,literal
col.joined = schema:startDate,typed-literal,xsd:date
col.bio = rdfs:comment,lang-literal,pt-br
col.cause_id = ops:supports,iri-template,demo:{cause_id}
"""
