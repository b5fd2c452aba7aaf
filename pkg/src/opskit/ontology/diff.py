"""Vocabulary migration report between two schemas."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Tuple

from opskit.ontology.schema import OntologySchema, _Labelled
from opskit.rdf import Iri

RENAME_MIN_SHARED_LABELS = 2


@dataclass
class ChangeReport:
    classes_added: List[str] = field(default_factory=list)
    classes_removed: List[str] = field(default_factory=list)
    classes_renamed: List[Tuple[str, str]] = field(default_factory=list)
    properties_added: List[str] = field(default_factory=list)
    properties_removed: List[str] = field(default_factory=list)
    properties_renamed: List[Tuple[str, str]] = field(default_factory=list)
    restrictions_added: List[Tuple[str, str, str]] = field(default_factory=list)
    restrictions_removed: List[Tuple[str, str, str]] = field(default_factory=list)

    def is_empty(self) -> bool:
        return not any(getattr(self, f) for f in self.__dataclass_fields__)

    def to_json(self) -> dict:
        return {
            "classes": {
                "added": self.classes_added,
                "removed": self.classes_removed,
                "renamed": [{"from": a, "to": b} for a, b in self.classes_renamed],
            },
            "properties": {
                "added": self.properties_added,
                "removed": self.properties_removed,
                "renamed": [{"from": a, "to": b} for a, b in self.properties_renamed],
            },
            "restrictions": {
                "added": [list(r) for r in self.restrictions_added],
                "removed": [list(r) for r in self.restrictions_removed],
            },
        }

    def to_text(self) -> str:
        if self.is_empty():
            return "no changes\n"
        lines = []
        lines += [f"class removed: {n}" for n in self.classes_removed]
        lines += [f"class added: {n}" for n in self.classes_added]
        lines += [f"class renamed: {a} -> {b}" for a, b in self.classes_renamed]
        lines += [f"property removed: {n}" for n in self.properties_removed]
        lines += [f"property added: {n}" for n in self.properties_added]
        lines += [f"property renamed: {a} -> {b}" for a, b in self.properties_renamed]
        lines += ["restriction removed: {} {} some {}".format(*r) for r in self.restrictions_removed]
        lines += ["restriction added: {} {} some {}".format(*r) for r in self.restrictions_added]
        return "\n".join(lines) + "\n"


def shared_labels(a: _Labelled, b: _Labelled) -> int:
    la, lb = a.label_map, b.label_map
    return sum(1 for lang, text in la.items() if lb.get(lang) == text)


def _match(old: Mapping[str, _Labelled], new: Mapping[str, _Labelled]):
    """Split names into added, removed and renamed; renames pair by label overlap."""
    gone = sorted(set(old) - set(new))
    fresh = sorted(set(new) - set(old))
    candidates = sorted(
        ((shared_labels(old[o], new[n]), o, n) for o in gone for n in fresh),
        key=lambda c: (-c[0], c[1], c[2]),
    )
    renamed: Dict[str, str] = {}
    taken = set()
    for score, o, n in candidates:
        if score < RENAME_MIN_SHARED_LABELS:
            break
        if o in renamed or n in taken:
            continue
        renamed[o] = n
        taken.add(n)
    added = [n for n in fresh if n not in taken]
    removed = [o for o in gone if o not in renamed]
    return added, removed, renamed


def diff_schemas(old: OntologySchema, new: OntologySchema) -> ChangeReport:
    c_added, c_removed, c_renamed = _match(old.classes, new.classes)
    p_added, p_removed, p_renamed = _match(old.properties, new.properties)
    names = {**c_renamed, **p_renamed}

    def key(schema: OntologySchema, iri: Iri, translate: bool) -> str:
        name = schema.local_name(iri)
        if name is None:
            return iri.value
        return names.get(name, name) if translate else name

    old_r = {tuple(key(old, i, True) for i in (r.on_class, r.property, r.filler)) for r in old.restrictions}
    new_r = {tuple(key(new, i, False) for i in (r.on_class, r.property, r.filler)) for r in new.restrictions}
    return ChangeReport(
        classes_added=c_added,
        classes_removed=c_removed,
        classes_renamed=sorted(c_renamed.items()),
        properties_added=p_added,
        properties_removed=p_removed,
        properties_renamed=sorted(p_renamed.items()),
        restrictions_added=sorted(new_r - old_r),
        restrictions_removed=sorted(old_r - new_r),
    )
