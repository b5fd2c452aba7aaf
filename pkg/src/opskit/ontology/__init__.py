from opskit.ontology.convert import (
    DanglingReference,
    MalformedRestriction,
    graph_to_schema,
    ontology_base,
    schema_from_turtle,
    schema_to_graph,
    schema_to_turtle,
)
from opskit.ontology.diff import ChangeReport, diff_schemas
from opskit.ontology.profiles import (
    PROFILES,
    build_ops_core,
    build_ops_expanded,
    build_ops_restricted,
    build_profile,
    build_vcps_fixture,
)
from opskit.ontology.schema import (
    ClassDecl,
    DefinedClassDecl,
    DisjointnessDecl,
    OntologySchema,
    PropertyDecl,
    RestrictionDecl,
    SchemaError,
)

__all__ = [
    "ChangeReport",
    "ClassDecl",
    "DanglingReference",
    "DefinedClassDecl",
    "DisjointnessDecl",
    "MalformedRestriction",
    "OntologySchema",
    "PROFILES",
    "PropertyDecl",
    "RestrictionDecl",
    "SchemaError",
    "build_ops_core",
    "build_ops_expanded",
    "build_ops_restricted",
    "build_profile",
    "build_vcps_fixture",
    "diff_schemas",
    "graph_to_schema",
    "ontology_base",
    "schema_from_turtle",
    "schema_to_graph",
    "schema_to_turtle",
]
