"""Parametric benchmark inputs.

``LADDER`` builds one superclass over ``classes`` subclasses that all own the
same ``attrs_per_class`` attributes, which normalizes by exactly
``attrs_per_class`` pull-ups.  ``REPLICATE`` lays ``copies`` disjoint renamed
copies of a base diagram side by side.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from ..diagram import ClassDiagram, require_valid

LADDER_TYPES = ("Integer", "String", "Boolean")


class Shape(Enum):
    LADDER = "ladder"
    REPLICATE = "replicate"


@dataclass(frozen=True)
class CaseSpec:
    shape: Shape
    classes: int = 0
    attrs_per_class: int = 0
    base: ClassDiagram | None = None
    copies: int = 0
    with_root: bool = True
    # shuffles element creation order (and thus ids); names never change
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.shape is Shape.LADDER:
            if self.classes < 1 or self.attrs_per_class < 1:
                raise ValueError("ladder needs classes >= 1 and attrs_per_class >= 1")
        elif self.base is None or self.copies < 1:
            raise ValueError("replicate needs a base diagram and copies >= 1")


def ladder(classes: int, attrs: int, *, with_root: bool = True, seed: int | None = None) -> ClassDiagram:
    return generate_case(CaseSpec(Shape.LADDER, classes, attrs, with_root=with_root, seed=seed))


def replicate(base: ClassDiagram, copies: int, *, seed: int | None = None) -> ClassDiagram:
    return generate_case(CaseSpec(Shape.REPLICATE, base=base, copies=copies, seed=seed))


def _ladder_plan(spec: CaseSpec):
    width = max(4, len(str(spec.classes)))
    awidth = max(2, len(str(spec.attrs_per_class)))
    root = f"C{0:0{width}d}" if spec.with_root else None
    subs = [f"C{i:0{width}d}" for i in range(1, spec.classes + 1)]
    attrs = [
        (f"a{j:0{awidth}d}", LADDER_TYPES[(j - 1) % len(LADDER_TYPES)])
        for j in range(1, spec.attrs_per_class + 1)
    ]
    entities = ([(root, False)] if root else []) + [(s, False) for s in subs]
    props = [(s, n, t) for s in subs for n, t in attrs]
    gens = [(s, root) for s in subs] if root else []
    return entities, props, gens


def _replicate_plan(spec: CaseSpec):
    base = spec.base
    assert base is not None
    require_valid(base)
    width = max(4, len(str(spec.copies)))
    base_entities = sorted(base.entities, key=lambda e: e.id)
    base_props = sorted(base.properties, key=lambda p: p.id)
    base_gens = sorted(base.generalizations, key=lambda g: g.id)
    entities, props, gens = [], [], []
    for i in range(1, spec.copies + 1):
        rename = {e.id: f"{e.name}_{i:0{width}d}" for e in base_entities}
        entities += [(rename[e.id], e.synthetic) for e in base_entities]
        props += [(rename[p.owner], p.name, p.type.name) for p in base_props]
        gens += [(rename[g.specific], rename[g.general]) for g in base_gens]
    return entities, props, gens


def generate_case(spec: CaseSpec) -> ClassDiagram:
    if spec.shape is Shape.LADDER:
        entities, props, gens = _ladder_plan(spec)
    else:
        entities, props, gens = _replicate_plan(spec)
    if spec.seed is not None:
        rng = random.Random(spec.seed)
        for seq in (entities, props, gens):
            rng.shuffle(seq)
    d = ClassDiagram()
    ids: dict[str, int] = {}
    for name, synthetic in entities:
        if name in ids:
            raise ValueError(f"generated name collision: {name!r}")
        ids[name] = d.add_entity(name, synthetic)
    for owner, name, type_name in props:
        d.add_property(ids[owner], name, type_name)
    for specific, general in gens:
        d.add_generalization(ids[specific], ids[general])
    require_valid(d)
    return d


def case_stats(d: ClassDiagram) -> dict[str, int]:
    return {"classes": len(d), "attributes": len(d.properties), "size": d.size}
