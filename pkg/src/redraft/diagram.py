"""Class-diagram model: entities, properties, generalizations.

A :class:`ClassDiagram` is a small typed graph (entities as nodes, properties
hanging off their owner, generalizations as specific -> general links).  The
container itself permits ill-formed content so that :func:`validate` can report
it; every library operation checks validity first and never mutates its input.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Iterator

EntityId = int
PropertyId = int
GeneralizationId = int


class DiagramError(Exception):
    """Base class for all errors raised by this package."""


class UnknownEntityError(DiagramError, KeyError):
    def __init__(self, eid: object) -> None:
        super().__init__(f"no such entity: {eid!r}")
        self.eid = eid

    def __str__(self) -> str:
        return self.args[0]


class ValidationError(DiagramError):
    """Raised when an operation requires a valid diagram and gets an invalid one."""

    def __init__(self, report: ValidationReport) -> None:
        self.report = report
        lines = "; ".join(str(v) for v in report.violations[:5])
        more = len(report.violations) - 5
        if more > 0:
            lines += f"; ... ({more} more)"
        super().__init__(f"invalid diagram: {lines}")


@dataclass(frozen=True, order=True)
class TypeRef:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Entity:
    id: EntityId
    name: str
    synthetic: bool = False


@dataclass(frozen=True)
class Property:
    id: PropertyId
    owner: EntityId
    name: str
    type: TypeRef

    @property
    def signature(self) -> tuple[str, str]:
        return (self.name, self.type.name)


@dataclass(frozen=True)
class Generalization:
    id: GeneralizationId
    specific: EntityId
    general: EntityId


class ClassDiagram:
    """Mutable container with value-style copy.

    Element ids are drawn from one counter shared by all element kinds and are
    never handed out twice, even after removals.
    """

    def __init__(self) -> None:
        self._entities: dict[EntityId, Entity] = {}
        self._properties: dict[PropertyId, Property] = {}
        self._generalizations: dict[GeneralizationId, Generalization] = {}
        self._types: dict[str, TypeRef] = {}
        self._next_id = 1
        # indexes
        self._by_name: dict[str, set[EntityId]] = defaultdict(set)
        self._owned: dict[EntityId, set[PropertyId]] = defaultdict(set)
        self._gens_from: dict[EntityId, set[GeneralizationId]] = defaultdict(set)
        self._gens_to: dict[EntityId, set[GeneralizationId]] = defaultdict(set)

    # -- construction -------------------------------------------------------

    def _take_id(self, explicit: int | None) -> int:
        if explicit is None:
            eid = self._next_id
        else:
            if explicit < 1:
                raise ValueError(f"element ids must be positive, got {explicit}")
            if explicit in self._entities or explicit in self._properties or explicit in self._generalizations:
                raise ValueError(f"element id {explicit} already in use")
            eid = explicit
        self._next_id = max(self._next_id, eid + 1)
        return eid

    def add_type(self, name: str) -> TypeRef:
        ref = self._types.get(name)
        if ref is None:
            ref = self._types[name] = TypeRef(name)
        return ref

    def add_entity(self, name: str, synthetic: bool = False, *, id: int | None = None) -> EntityId:
        eid = self._take_id(id)
        self._entities[eid] = Entity(eid, name, synthetic)
        self._by_name[name].add(eid)
        return eid

    def add_property(self, owner: EntityId, name: str, type: str | TypeRef, *, id: int | None = None) -> PropertyId:
        ref = self.add_type(type.name if isinstance(type, TypeRef) else type)
        pid = self._take_id(id)
        self._properties[pid] = Property(pid, owner, name, ref)
        self._owned[owner].add(pid)
        return pid

    def add_generalization(self, specific: EntityId, general: EntityId, *, id: int | None = None) -> GeneralizationId:
        gid = self._take_id(id)
        self._generalizations[gid] = Generalization(gid, specific, general)
        self._gens_from[specific].add(gid)
        self._gens_to[general].add(gid)
        return gid

    def remove_property(self, pid: PropertyId) -> None:
        prop = self._properties.pop(pid)
        self._owned[prop.owner].discard(pid)

    def remove_generalization(self, gid: GeneralizationId) -> None:
        gen = self._generalizations.pop(gid)
        self._gens_from[gen.specific].discard(gid)
        self._gens_to[gen.general].discard(gid)

    def copy(self) -> ClassDiagram:
        other = ClassDiagram.__new__(ClassDiagram)
        other._entities = dict(self._entities)
        other._properties = dict(self._properties)
        other._generalizations = dict(self._generalizations)
        other._types = dict(self._types)
        other._next_id = self._next_id
        other._by_name = defaultdict(set, {k: set(v) for k, v in self._by_name.items() if v})
        other._owned = defaultdict(set, {k: set(v) for k, v in self._owned.items() if v})
        other._gens_from = defaultdict(set, {k: set(v) for k, v in self._gens_from.items() if v})
        other._gens_to = defaultdict(set, {k: set(v) for k, v in self._gens_to.items() if v})
        return other

    # -- element access -----------------------------------------------------

    @property
    def entities(self) -> tuple[Entity, ...]:
        return tuple(self._entities.values())

    @property
    def properties(self) -> tuple[Property, ...]:
        return tuple(self._properties.values())

    @property
    def generalizations(self) -> tuple[Generalization, ...]:
        return tuple(self._generalizations.values())

    @property
    def types(self) -> tuple[TypeRef, ...]:
        return tuple(self._types.values())

    @property
    def next_id(self) -> int:
        return self._next_id

    def entity_ids(self) -> Iterator[EntityId]:
        return iter(self._entities)

    def has_entity(self, eid: EntityId) -> bool:
        return eid in self._entities

    def entity(self, eid: EntityId) -> Entity:
        try:
            return self._entities[eid]
        except KeyError:
            raise UnknownEntityError(eid) from None

    def name_of(self, eid: EntityId) -> str:
        return self.entity(eid).name

    def entity_by_name(self, name: str) -> Entity:
        ids = self._by_name.get(name)
        if not ids:
            raise UnknownEntityError(name)
        return self._entities[min(ids)]

    def has_name(self, name: str) -> bool:
        return bool(self._by_name.get(name))

    def get_property(self, pid: PropertyId) -> Property:
        return self._properties[pid]

    def type_ref(self, name: str) -> TypeRef:
        return self._types[name]

    def own_properties(self, eid: EntityId) -> list[Property]:
        return [self._properties[p] for p in self._owned.get(eid, ())]

    def own_signatures(self, eid: EntityId) -> set[tuple[str, str]]:
        props = self._properties
        return {props[p].signature for p in self._owned.get(eid, ())}

    def find_property(self, eid: EntityId, name: str, type_name: str) -> Property | None:
        for pid in self._owned.get(eid, ()):
            prop = self._properties[pid]
            if prop.name == name and prop.type.name == type_name:
                return prop
        return None

    def generalizations_from(self, eid: EntityId) -> list[Generalization]:
        return [self._generalizations[g] for g in self._gens_from.get(eid, ())]

    def generalizations_to(self, eid: EntityId) -> list[Generalization]:
        return [self._generalizations[g] for g in self._gens_to.get(eid, ())]

    def parent(self, eid: EntityId) -> EntityId | None:
        """The general end of ``eid``'s generalization (lowest id if several)."""
        gids = self._gens_from.get(eid)
        if not gids:
            return None
        return self._generalizations[min(gids)].general

    def children(self, eid: EntityId) -> set[EntityId]:
        gens = self._generalizations
        return {gens[g].specific for g in self._gens_to.get(eid, ())}

    def is_root(self, eid: EntityId) -> bool:
        return not self._gens_from.get(eid)

    @property
    def size(self) -> int:
        """Entities plus properties, the size measure used for benchmark cases."""
        return len(self._entities) + len(self._properties)

    def __len__(self) -> int:
        return len(self._entities)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClassDiagram):
            return NotImplemented
        return (
            self._entities == other._entities
            and self._properties == other._properties
            and self._generalizations == other._generalizations
            and self._types == other._types
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return (
            f"ClassDiagram(entities={len(self._entities)}, properties={len(self._properties)}, "
            f"generalizations={len(self._generalizations)})"
        )


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    element: str
    rule: str
    detail: str = ""

    def __str__(self) -> str:
        text = f"{self.element}: {self.rule}"
        return f"{text} ({self.detail})" if self.detail else text


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def __bool__(self) -> bool:
        return self.ok


def _entity_label(d: ClassDiagram, eid: EntityId) -> str:
    if d.has_entity(eid):
        return f"entity {d.name_of(eid)!r}"
    return f"entity #{eid}"


def validate(d: ClassDiagram) -> ValidationReport:
    out: list[Violation] = []

    for name, ids in sorted(d._by_name.items()):
        if not name and ids:
            out.extend(Violation(f"entity #{i}", "empty name") for i in sorted(ids))
        if len(ids) > 1:
            out.append(Violation(f"entity {name!r}", "duplicate entity name", f"{len(ids)} entities"))

    for ref in d.types:
        if not ref.name:
            out.append(Violation("type ''", "empty type name"))

    seen: dict[tuple[EntityId, str], Property] = {}
    for prop in sorted(d.properties, key=lambda p: p.id):
        label = f"property {prop.name!r} #{prop.id}"
        if not d.has_entity(prop.owner):
            out.append(Violation(label, "dangling owner", f"owner #{prop.owner}"))
        if not prop.name:
            out.append(Violation(label, "empty property name"))
        if d._types.get(prop.type.name) != prop.type:
            out.append(Violation(label, "unknown type", prop.type.name))
        first = seen.setdefault((prop.owner, prop.name), prop)
        if first is not prop:
            rule = "duplicate property" if first.type == prop.type else "conflicting property types"
            out.append(Violation(label, rule, f"{_entity_label(d, prop.owner)} already owns {prop.name!r}"))

    for gen in sorted(d.generalizations, key=lambda g: g.id):
        label = f"generalization #{gen.id}"
        for end in (gen.specific, gen.general):
            if not d.has_entity(end):
                out.append(Violation(label, "dangling generalization", f"missing entity #{end}"))
        if gen.specific == gen.general:
            out.append(Violation(label, "self generalization", _entity_label(d, gen.specific)))

    for eid in sorted(d.entity_ids()):
        if len(d._gens_from.get(eid, ())) > 1:
            out.append(Violation(_entity_label(d, eid), "multiple inheritance"))

    out.extend(_cycle_violations(d))
    return ValidationReport(out)


def _cycle_violations(d: ClassDiagram) -> list[Violation]:
    # colour-marking DFS over specific -> general; each cycle reported once
    out = []
    state: dict[EntityId, int] = {}
    for start in sorted(d.entity_ids()):
        if start in state:
            continue
        path: list[EntityId] = []
        stack = [start]
        while stack:
            node = stack[-1]
            if state.get(node) is None:
                state[node] = 1
                path.append(node)
                for gen in sorted(d.generalizations_from(node), key=lambda g: g.id):
                    nxt = gen.general
                    if not d.has_entity(nxt):
                        continue
                    if state.get(nxt) == 1:
                        cyc = path[path.index(nxt):]
                        names = " -> ".join(d.name_of(e) for e in cyc + [nxt])
                        out.append(Violation(_entity_label(d, nxt), "cycle", names))
                    elif nxt not in state:
                        stack.append(nxt)
            else:
                stack.pop()
                if state[node] == 1:
                    state[node] = 2
                    path.pop()
    return out


def require_valid(d: ClassDiagram) -> None:
    report = validate(d)
    if not report.ok:
        raise ValidationError(report)


# ---------------------------------------------------------------------------
# inheritance queries


def direct_subclasses(d: ClassDiagram, e: EntityId) -> frozenset[EntityId]:
    d.entity(e)
    return frozenset(d.children(e))


def root_entities(d: ClassDiagram) -> frozenset[EntityId]:
    return frozenset(e for e in d.entity_ids() if d.is_root(e))


def flattened_attributes(d: ClassDiagram, e: EntityId) -> frozenset[tuple[str, str]]:
    """Own plus inherited ``(name, type-name)`` pairs of ``e``.

    Set semantics: a subclass re-declaring an inherited pair adds nothing.
    """
    d.entity(e)
    acc: set[tuple[str, str]] = set()
    node: EntityId | None = e
    hops = 0
    while node is not None:
        acc |= d.own_signatures(node)
        node = d.parent(node)
        hops += 1
        if hops > len(d) + 1:
            raise ValidationError(validate(d))
    return frozenset(acc)


def semantic_signature(d: ClassDiagram) -> dict[str, frozenset[tuple[str, str]]]:
    """Flattened attribute set of every entity, keyed by entity name."""
    require_valid(d)
    memo: dict[EntityId, frozenset[tuple[str, str]]] = {}
    for root in root_entities(d):
        stack = [root]
        memo[root] = frozenset(d.own_signatures(root))
        while stack:
            node = stack.pop()
            for child in d.children(node):
                memo[child] = memo[node] | d.own_signatures(child)
                stack.append(child)
    return {d.name_of(e): attrs for e, attrs in memo.items()}


def fresh_entity_name(d: ClassDiagram, hint: str) -> str:
    if not d.has_name(hint):
        return hint
    k = 1
    while d.has_name(f"{hint}_{k}"):
        k += 1
    return f"{hint}_{k}"


def build(
    entities: Iterable[str | tuple[str, bool]] = (),
    properties: Iterable[tuple[str, str, str]] = (),
    generalizations: Iterable[tuple[str, str]] = (),
) -> ClassDiagram:
    """Build a diagram from names.

    ``entities`` are names or ``(name, synthetic)`` pairs, ``properties`` are
    ``(owner, name, type)`` triples and ``generalizations`` are
    ``(specific, general)`` pairs, all referring to entities by name.
    """
    d = ClassDiagram()
    ids: dict[str, EntityId] = {}
    for item in entities:
        name, synthetic = (item, False) if isinstance(item, str) else item
        ids[name] = d.add_entity(name, synthetic)
    for owner, name, type_name in properties:
        d.add_property(ids[owner], name, type_name)
    for specific, general in generalizations:
        d.add_generalization(ids[specific], ids[general])
    return d
