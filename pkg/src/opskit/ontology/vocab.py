"""Namespace constants, including the upper-ontology class IRIs.

BFO identifiers follow the BFO 1.1 ``snap``/``span`` split. Swap them here
if a different BFO release is targeted; nothing else hardcodes them.
"""
import os

from opskit.rdf import OWL, RDF, RDFS, XSDNS, Iri, Namespace, PrefixMap

DEFAULT_BASE = "http://purl.org/socialparticipation/ops"
VCPS_BASE = "http://lumii.lv/ontologies/Corais.owl"

FOAF = Namespace("http://xmlns.com/foaf/0.1/")
SNAP = Namespace("http://www.ifomis.org/bfo/1.1/snap#")
SPAN = Namespace("http://www.ifomis.org/bfo/1.1/span#")
SKOS = Namespace("http://www.w3.org/2004/02/skos/core#")
SCHEMA = Namespace("http://schema.org/")
DCTERMS = Namespace("http://purl.org/dc/terms/")

BFO_MATERIAL_ENTITY = SNAP.MaterialEntity
BFO_DEPENDENT_CONTINUANT = SNAP.DependentContinuant
BFO_INDEPENDENT_CONTINUANT = SNAP.IndependentContinuant
BFO_PROCESSUAL_ENTITY = SPAN.ProcessualEntity
FOAF_PERSON = FOAF.Person
FOAF_ORGANIZATION = FOAF.Organization

# non-normative hints for the property arrows of the overview diagram
INTENDED_DOMAIN = SCHEMA.domainIncludes
INTENDED_RANGE = SCHEMA.rangeIncludes
ALTERNATE_NAME = SKOS.altLabel

EXTERNAL_NAMESPACES = (
    str(RDF),
    str(RDFS),
    str(OWL),
    str(XSDNS),
    str(FOAF),
    str(SNAP),
    str(SPAN),
    str(SKOS),
    str(SCHEMA),
    str(DCTERMS),
)

LANGUAGES = ("pt-br", "es", "en")


def is_external(iri: Iri) -> bool:
    """True for IRIs in a whitelisted external vocabulary."""
    return iri.value.startswith(EXTERNAL_NAMESPACES)


def default_base() -> str:
    return os.environ.get("OPS_BASE_IRI", DEFAULT_BASE).rstrip("/")


def default_prefixes(base=DEFAULT_BASE) -> PrefixMap:
    """The prefix set used by the golden files, the CLI and the query endpoint."""
    base = getattr(base, "value", base)
    return PrefixMap(
        {
            "ops": base.rstrip("/") + "/",
            "rdf": str(RDF),
            "rdfs": str(RDFS),
            "owl": str(OWL),
            "xsd": str(XSDNS),
            "foaf": str(FOAF),
            "snap": str(SNAP),
            "span": str(SPAN),
            "skos": str(SKOS),
            "schema": str(SCHEMA),
        }
    )
