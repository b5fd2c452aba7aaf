"""The OPS profiles (core, restricted, expanded) and the VCPS comparison fixture."""
from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Tuple

from opskit.ontology.schema import (
    ClassDecl,
    DefinedClassDecl,
    DisjointnessDecl,
    OntologySchema,
    PropertyDecl,
    RestrictionDecl,
)
from opskit.ontology.vocab import (
    BFO_DEPENDENT_CONTINUANT,
    BFO_INDEPENDENT_CONTINUANT,
    BFO_MATERIAL_ENTITY,
    BFO_PROCESSUAL_ENTITY,
    FOAF_ORGANIZATION,
    FOAF_PERSON,
    VCPS_BASE,
    default_base,
)
from opskit.rdf import Iri

PROFILES = ("core", "restricted", "expanded")

# name, pt-br, es, en, definition, OPS superclasses, upper-ontology classes
CORE_CLASSES: List[Tuple[str, str, str, str, str, Tuple[str, ...], Tuple[Iri, ...]]] = [
    ("Person", "Pessoa", "Persona", "Person", "a person (social actor is a person)",
     ("SocialActor",), (BFO_MATERIAL_ENTITY, FOAF_PERSON)),
    ("Organization", "Organização", "Organización", "Organization",
     "social actor is a group of individuals, organized formally or informally (e.g. movements, collectives)",
     ("SocialActor",), (BFO_MATERIAL_ENTITY, FOAF_ORGANIZATION)),
    ("Executor", "Executor", "Ejecutor", "Executor", "performs action directly and is responsible for results",
     ("SocialActor",), (BFO_MATERIAL_ENTITY,)),
    ("Initiator", "Iniciador", "Iniciador", "Initiator", "originates cause, individually or collaboratively",
     ("SocialActor",), (BFO_MATERIAL_ENTITY,)),
    ("Supporter", "Apoiador", "Apoyador", "Supporter",
     "supports cause with resources of any kind (e.g. cognitive, financial, equipments)",
     ("SocialActor",), (BFO_MATERIAL_ENTITY,)),
    ("SocialActor", "Ator Social", "Actor Social", "Social Actor", "entity that might have a participatory role",
     (), (BFO_MATERIAL_ENTITY,)),
    ("ParticipationCharacteristic", "Característica de Participação", "Característica de Participación",
     "Participation Characteristic", "the way the participation of the specific actor is happening",
     (), (BFO_DEPENDENT_CONTINUANT,)),
    ("Cause", "Causa", "Causa", "Cause", "the motivation for Action", (), (BFO_DEPENDENT_CONTINUANT,)),
    ("Scope", "Escopo", "Ambito", "Scope", "the scope of Action", (), (BFO_DEPENDENT_CONTINUANT,)),
    ("Result", "Resultado", "Resultado", "Result", "the result obtained with action", (), (BFO_DEPENDENT_CONTINUANT,)),
    ("Solution", "Solução", "Solución", "Solution", "solution achieved with Action", (), (BFO_DEPENDENT_CONTINUANT,)),
    ("Problem", "Problema", "Problema", "Problem", "the problem that the Action aims to solve",
     (), (BFO_INDEPENDENT_CONTINUANT,)),
    ("Theme", "Tema", "Tema", "Theme", "the theme in focus by Action", (), (BFO_INDEPENDENT_CONTINUANT,)),
    ("Action", "Ação", "Acción", "Action", "what is done in terms of social participation",
     (), (BFO_PROCESSUAL_ENTITY,)),
]

# name, pt-br, es, en, range, intended domain, intended range, alternate names
CORE_PROPERTIES: List[Tuple[str, str, str, str, Optional[str], str, str, Tuple[str, ...]]] = [
    ("theme", "tema", "tema", "theme", "Theme", "Cause", "Theme", ()),
    ("belongsTo", "pertence ao", "pertence al", "belongs to", "Scope", "Action", "Scope", ()),
    ("action", "ação", "acción", "action", "Action", "Cause", "Action", ()),
    ("supports", "apoia", "apoya", "supports", None, "Supporter", "Cause", ()),
    ("contributesTo", "contribui para", "contribuye para", "contributes to", None, "Result", "Solution", ()),
    ("executes", "executa", "ejecuta", "executes", None, "Executor", "Action", ()),
    ("generates", "gera", "genera", "generates", None, "Problem", "Cause", ()),
    ("starts", "inicia", "inicializa", "starts", None, "Initiator", "Cause", ()),
    ("solves", "soluciona", "resuelve", "solves", None, "Solution", "Problem", ()),
    ("produces", "produz", "produce", "produces", None, "Action", "Result", ()),
    ("proposes", "propõe", "propone", "proposes", None, "Cause", "Solution", ()),
    ("trait", "traço", "rasgo", "trait", None, "SocialActor", "ParticipationCharacteristic",
     ("hasParticipationCharacteristic",)),
]

# Appendix table rows, with Executer->Executor, Results->Result, and the
# dropped Role row restated over the social actor's participation trait.
RESTRICTIONS: List[Tuple[str, str, str]] = [
    ("Initiator", "starts", "Cause"),
    ("Supporter", "supports", "Cause"),
    ("Executor", "executes", "Action"),
    ("Solution", "solves", "Problem"),
    ("SocialActor", "trait", "ParticipationCharacteristic"),
    ("Action", "produces", "Result"),
    ("Result", "contributesTo", "Solution"),
    ("Cause", "action", "Action"),
    ("Action", "belongsTo", "Scope"),
    ("Cause", "theme", "Theme"),
    ("Cause", "proposes", "Solution"),
    ("Problem", "generates", "Cause"),
]

# name, superclass, pt-br, es, en, description
EXPANSION_CLASSES: List[Tuple[str, str, str, str, str, str]] = [
    ("SocialNetwork", "Organization", "Rede Social", "Red Social", "Social Network",
     "a social structure made up of social actors (such as individuals or organizations) and a set of dyadic ties between these actors"),
    ("FreeScaleNetwork", "SocialNetwork", "Rede Livre de Escala", "Red Libre de Escala", "Free Scale Network",
     "a network whose connectivity follows a power law"),
    ("ErdosRenyiNetwork", "SocialNetwork", "Rede Erdős-Rényi", "Red Erdős-Rényi", "Erdős-Rényi Network",
     "also known as Poisson network, this network sets, with equal probability, an edge between each pair of nodes"),
    ("GeographicNetwork", "SocialNetwork", "Rede Geográfica", "Red Geográfica", "Geographic Network",
     "a network whose connectivity is related to the distance of nodes in a metric space"),
    ("SmallWorldNetwork", "SocialNetwork", "Rede Mundo Pequeno", "Red de Mundo Pequeño", "Small World Network",
     "a network where most nodes can be reached from other nodes with few hops or steps"),
    ("InformalOrganization", "Organization", "Organização Informal", "Organización Informal", "Informal Organization",
     "an organization that is not formalized"),
    ("Mob", "InformalOrganization", "Multidão", "Multitud", "Mob", "a crowd of individuals"),
    ("GiantMob", "Mob", "Multidão Gigante", "Multitud Gigante", "Giant Mob",
     "a crowd with more than 10,000 individuals"),
    ("DownloadedMob", "Mob", "Multidão Convocada", "Multitud Convocada", "Downloaded Mob",
     "a Mob convoqued by a network"),
    ("Institution", "Organization", "Instituição", "Institución", "Institution",
     "a mechanism of social order that governs a set of individuals"),
    ("PublicInstitution", "Institution", "Instituição Pública", "Institución Pública", "Public Institution",
     "an institution backed through public funds and controlled by the state"),
    ("PrivateInstitution", "Institution", "Instituição Privada", "Institución Privada", "Private Institution",
     "an institution backed through private funding and controlled by private parties"),
    ("AcademicInstitution", "Institution", "Instituição Acadêmica", "Institución Académica", "Academic Institution",
     "an institution dedicated to education and research, which grants academic degrees"),
    ("NGO", "Institution", "ONG", "ONG", "NGO",
     "a legally constituted corporation created by natural or legal people that operate independently from any form of government"),
    ("SpuriousInstitution", "Institution", "Instituição Espúria", "Institución Espuria", "Spurious Institution",
     "an institution that holds prominent illegitimate or corrupt characteristics"),
    ("ExoticInstitution", "Institution", "Instituição Exótica", "Institución Exótica", "Exotic Institution",
     "an institution that does not fit previous classes or is characterized by very unique traits"),
    ("VoluntaryExecutor", "Executor", "Executor Voluntário", "Ejecutor Voluntario", "Voluntary Executor",
     "an executor that receives no formal reward for the tasks"),
    ("PaidExecutor", "Executor", "Executor Remunerado", "Ejecutor Remunerado", "Paid Executor",
     "an Executor that receives formal reward for the tasks accomplished"),
]

# the expansion table's "UniformrandomNetwork" is the Erdős-Rényi (uniform random) network
EXPANSION_DISJOINT: List[Tuple[str, str]] = [
    ("FreeScaleNetwork", "ErdosRenyiNetwork"),
    ("FreeScaleNetwork", "GeographicNetwork"),
    ("ErdosRenyiNetwork", "GeographicNetwork"),
    ("InformalOrganization", "Institution"),
    ("PublicInstitution", "PrivateInstitution"),
    ("VoluntaryExecutor", "PaidExecutor"),
]

# name, pt-br, es, en, inverse, intended domain, intended range
EXPANSION_PROPERTIES: List[Tuple[str, str, str, str, Optional[str], str, str]] = [
    ("receivesFrom", "recebe de", "recibe de", "receives from", "paysTo", "Executor", "SocialActor"),
    ("paysTo", "paga a", "paga a", "pays to", "receivesFrom", "SocialActor", "Executor"),
    ("convoquedBy", "convocado por", "convocado por", "convoqued by", None, "Mob", "SocialNetwork"),
]

# defined class, base class, property, filler
EXPANSION_DEFINED: List[Tuple[str, str, str, str]] = [
    ("PaidExecutor", "Executor", "receivesFrom", "SocialActor"),
    ("DownloadedMob", "Mob", "convoquedBy", "SocialNetwork"),
]


def _labels(pt: str, es: str, en: str) -> Dict[str, str]:
    return {"pt-br": pt, "es": es, "en": en}


def _base(base: Optional[str]) -> Iri:
    return Iri((base or default_base()).rstrip("/"))


def build_ops_core(base: Optional[str] = None) -> OntologySchema:
    """The current OPS: 14 classes, 12 properties, no restrictions, no domains."""
    b = _base(base)
    ns = b.value + "/"
    classes = [
        ClassDecl(
            name=name,
            iri=Iri(ns + name),
            labels=_labels(pt, es, en),
            comment=definition,
            superclasses=frozenset(Iri(ns + s) for s in supers) | frozenset(upper),
        )
        for name, pt, es, en, definition, supers, upper in CORE_CLASSES
    ]
    props = [
        PropertyDecl(
            name=name,
            iri=Iri(ns + name),
            labels=_labels(pt, es, en),
            range=Iri(ns + rng) if rng else None,
            alt_names=frozenset(alts),
            intended_domain=Iri(ns + idom),
            intended_range=Iri(ns + irng),
        )
        for name, pt, es, en, rng, idom, irng, alts in CORE_PROPERTIES
    ]
    schema = OntologySchema(base=b, classes=classes, properties=props)
    schema.check()
    return schema


def build_ops_restricted(base: Optional[str] = None) -> OntologySchema:
    """Core plus the twelve existential restrictions of the preliminary OPS."""
    core = build_ops_core(base)
    schema = core.extend(
        restrictions=[RestrictionDecl(core.iri(c), core.iri(p), core.iri(f)) for c, p, f in RESTRICTIONS]
    )
    schema.check()
    return schema


def build_ops_expanded(base: Optional[str] = None) -> OntologySchema:
    """Core plus the toy expansion: network/organization/executor subclasses and two defined classes."""
    core = build_ops_core(base)
    iri = core.iri
    classes = [
        ClassDecl(
            name=name,
            iri=iri(name),
            labels=_labels(pt, es, en),
            comment=description,
            superclasses=frozenset({iri(sup)}),
        )
        for name, sup, pt, es, en, description in EXPANSION_CLASSES
    ]
    props = [
        PropertyDecl(
            name=name,
            iri=iri(name),
            labels=_labels(pt, es, en),
            inverse=iri(inv) if inv else None,
            intended_domain=iri(idom),
            intended_range=iri(irng),
        )
        for name, pt, es, en, inv, idom, irng in EXPANSION_PROPERTIES
    ]
    schema = core.extend(
        classes=classes,
        properties=props,
        disjointness=[DisjointnessDecl(iri(a), iri(b)) for a, b in EXPANSION_DISJOINT],
        defined=[DefinedClassDecl(iri(d), iri(b), iri(p), iri(f)) for d, b, p, f in EXPANSION_DEFINED],
    )
    schema.check()
    return schema


def build_profile(profile: str, base: Optional[str] = None) -> OntologySchema:
    builders = {"core": build_ops_core, "restricted": build_ops_restricted, "expanded": build_ops_expanded}
    if profile not in builders:
        raise ValueError(f"unknown profile {profile!r}; expected one of {', '.join(PROFILES)}")
    return builders[profile](base)


# VCPS-era names for the OPS terms, keyed by OPS name. Labels are shared
# with OPS so that renames are detectable; Role and its property only exist here.
VCPS_CLASS_NAMES = {
    "Person": "Pessoa",
    "Organization": "Organizacao",
    "Executor": "Executor",
    "Initiator": "Iniciador",
    "Supporter": "Apoiador",
    "SocialActor": "Ator",
    "Cause": "Causa",
    "Scope": "EspacoDeAcao",
    "Result": "Resultados",
    "Solution": "Solucao",
    "Problem": "Problema",
    "Theme": "Tema",
    "Action": "Acao",
}
VCPS_PROPERTY_NAMES = {
    "theme": "possuiTemaAssociado",
    "belongsTo": "pertenceAoEspaco",
    "action": "possuiAcao",
    "supports": "apoiaCausa",
    "contributesTo": "composesSolution",
    "executes": "executaAcao",
    "generates": "geraCausa",
    "starts": "iniciaCausa",
    "solves": "soluciona",
    "produces": "produzResultado",
    "proposes": "propoeSolucao",
}


def build_vcps_fixture() -> OntologySchema:
    """The predecessor vocabulary as a comparison fixture.

    Carries the Role class with its ``temPapel`` property and restriction,
    and lacks ParticipationCharacteristic and the trait property.
    """
    core = build_ops_core(default_base())
    b = Iri(VCPS_BASE)
    ns = b.value + "/"
    rename = {core.iri(ops): Iri(ns + old) for ops, old in VCPS_CLASS_NAMES.items()}

    def mapped(iris: Iterable[Iri]) -> frozenset:
        return frozenset(rename.get(i, i) for i in iris)

    classes = []
    for ops_name, old in VCPS_CLASS_NAMES.items():
        c = core.classes[ops_name]
        classes.append(ClassDecl(old, Iri(ns + old), c.labels, c.comment, mapped(c.superclasses)))
    classes.append(
        ClassDecl("Role", Iri(ns + "Role"), _labels("Papel", "Papel", "Role"), "the role of the actor",
                  frozenset({BFO_DEPENDENT_CONTINUANT}))
    )
    props = []
    for ops_name, old in VCPS_PROPERTY_NAMES.items():
        p = core.properties[ops_name]
        props.append(
            PropertyDecl(
                old,
                Iri(ns + old),
                p.labels,
                range=rename.get(p.range, p.range) if p.range else None,
            )
        )
    props.append(PropertyDecl("temPapel", Iri(ns + "temPapel"), _labels("tem papel", "tiene papel", "has role")))
    schema = OntologySchema(
        base=b,
        classes=classes,
        properties=props,
        restrictions=[RestrictionDecl(Iri(ns + "Ator"), Iri(ns + "temPapel"), Iri(ns + "Role"))],
    )
    schema.check()
    return schema
