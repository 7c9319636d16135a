"""The three restructuring rules and their scheduling.

* pull-up: a ``(name, type)`` property owned by *every* direct subclass (at
  least two) of an entity moves onto that entity;
* extract subclass: a property shared by two or more, but not all, direct
  subclasses moves onto a new intermediate entity inserted between them and
  their superclass;
* extract root: a property shared by two or more root entities moves onto a
  new root entity above them.

Matching is hand-compiled: every site of each rule at one anchor is found in
a single pass over the anchor's children.  Extraction candidates always carry
the full set of qualifying members, and only candidates with the largest
member count are offered for application.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Union

from .diagram import (
    ClassDiagram,
    DiagramError,
    EntityId,
    TypeRef,
    fresh_entity_name,
    require_valid,
)


class StaleMatchError(DiagramError):
    pass


class CandidateKind(Enum):
    SUBCLASS = "subclass"
    ROOT = "root"


class Rule(Enum):
    PULL_UP = "pull-up"
    EXTRACT_SUB = "extract-subclass"
    EXTRACT_ROOT = "extract-root"


class Mode(Enum):
    PRIORITY = "priority"
    FREE = "free"


class TieHandling(Enum):
    DETERMINISTIC = "det"
    BRANCH_ALL = "branch"


@dataclass(frozen=True)
class Policy:
    """Which steps are offered at a state.

    ``PRIORITY`` offers pull-ups first, then subclass extraction, then root
    extraction; ``FREE`` offers all three at once.  ``DETERMINISTIC`` keeps only
    the first of several equally large extraction candidates.
    """

    mode: Mode = Mode.PRIORITY
    tie_handling: TieHandling = TieHandling.DETERMINISTIC


@dataclass(frozen=True)
class PullUpMatch:
    superclass: EntityId
    name: str
    type: TypeRef
    members: frozenset[EntityId]

    @property
    def count(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class ExtractCandidate:
    kind: CandidateKind
    anchor: EntityId | None
    name: str
    type: TypeRef
    members: frozenset[EntityId]

    @property
    def count(self) -> int:
        return len(self.members)


Site = Union[PullUpMatch, ExtractCandidate]


@dataclass(frozen=True)
class Step:
    rule: Rule
    site: Site

    @property
    def count(self) -> int:
        return self.site.count

    def describe(self, d: ClassDiagram) -> str:
        site = self.site
        members = ", ".join(sorted(d.name_of(m) for m in site.members))
        prop = f"{site.name}: {site.type.name}"
        if isinstance(site, PullUpMatch):
            return f"{self.rule.value} {prop} into {d.name_of(site.superclass)} from {{{members}}}"
        where = "" if site.anchor is None else f" under {d.name_of(site.anchor)}"
        return f"{self.rule.value} {prop}{where} over {{{members}}}"


def _site_key(d: ClassDiagram, anchor: EntityId | None, name: str, type_name: str) -> tuple[str, str, str]:
    return ("" if anchor is None else d.name_of(anchor), name, type_name)


def anchor_sites(d: ClassDiagram, anchor: EntityId) -> tuple[list[PullUpMatch], list[ExtractCandidate]]:
    """Pull-up matches and subclass-extraction candidates rooted at ``anchor``.

    Full-cover groups go to pull-up when the anchor does not already own the
    name; otherwise they stay extraction candidates.  Unsorted.
    """
    children = d.children(anchor)
    if len(children) < 2:
        return [], []
    groups: dict[tuple[str, str], set[EntityId]] = defaultdict(set)
    for child in children:
        for sig in d.own_signatures(child):
            groups[sig].add(child)
    owned = {p.name for p in d.own_properties(anchor)}
    pulls: list[PullUpMatch] = []
    subs: list[ExtractCandidate] = []
    for (name, type_name), members in groups.items():
        if len(members) < 2:
            continue
        ref = d.type_ref(type_name)
        if len(members) == len(children) and name not in owned:
            pulls.append(PullUpMatch(anchor, name, ref, frozenset(members)))
        else:
            subs.append(ExtractCandidate(CandidateKind.SUBCLASS, anchor, name, ref, frozenset(members)))
    return pulls, subs


def root_groups(d: ClassDiagram) -> dict[tuple[str, str], set[EntityId]]:
    groups: dict[tuple[str, str], set[EntityId]] = defaultdict(set)
    for eid in d.entity_ids():
        if d.is_root(eid):
            for sig in d.own_signatures(eid):
                groups[sig].add(eid)
    return groups


def find_pullup_matches(d: ClassDiagram) -> list[PullUpMatch]:
    require_valid(d)
    out: list[PullUpMatch] = []
    for eid in d.entity_ids():
        out.extend(anchor_sites(d, eid)[0])
    out.sort(key=lambda m: _site_key(d, m.superclass, m.name, m.type.name))
    return out


def find_extract_candidates(d: ClassDiagram, kind: CandidateKind) -> list[ExtractCandidate]:
    require_valid(d)
    out: list[ExtractCandidate] = []
    if kind is CandidateKind.SUBCLASS:
        for eid in d.entity_ids():
            out.extend(anchor_sites(d, eid)[1])
    else:
        for (name, type_name), members in root_groups(d).items():
            if len(members) >= 2:
                out.append(ExtractCandidate(kind, None, name, d.type_ref(type_name), frozenset(members)))
    out.sort(key=lambda c: _site_key(d, c.anchor, c.name, c.type.name))
    return out


def maximal_candidates(cs: list[ExtractCandidate]) -> list[ExtractCandidate]:
    if not cs:
        return []
    best = max(c.count for c in cs)
    return [c for c in cs if c.count == best]


def applicable_steps(d: ClassDiagram, policy: Policy = Policy()) -> list[Step]:
    pulls = [Step(Rule.PULL_UP, m) for m in find_pullup_matches(d)]
    if policy.mode is Mode.PRIORITY and pulls:
        return pulls
    subs = maximal_candidates(find_extract_candidates(d, CandidateKind.SUBCLASS))
    roots = maximal_candidates(find_extract_candidates(d, CandidateKind.ROOT))
    if policy.tie_handling is TieHandling.DETERMINISTIC:
        subs, roots = subs[:1], roots[:1]
    sub_steps = [Step(Rule.EXTRACT_SUB, c) for c in subs]
    root_steps = [Step(Rule.EXTRACT_ROOT, c) for c in roots]
    if policy.mode is Mode.PRIORITY:
        return sub_steps or root_steps
    return pulls + sub_steps + root_steps


# ---------------------------------------------------------------------------
# application


def _pullup_is_current(d: ClassDiagram, m: PullUpMatch) -> bool:
    if not d.has_entity(m.superclass) or m.count < 2:
        return False
    if d.children(m.superclass) != m.members:
        return False
    if any(p.name == m.name for p in d.own_properties(m.superclass)):
        return False
    return all(d.find_property(e, m.name, m.type.name) is not None for e in m.members)


def _extract_is_current(d: ClassDiagram, c: ExtractCandidate) -> bool:
    if c.count < 2 or not all(d.has_entity(e) for e in c.members):
        return False
    sig = (c.name, c.type.name)
    if c.kind is CandidateKind.ROOT:
        if c.anchor is not None:
            return False
        return root_groups(d).get(sig, set()) == c.members
    if c.anchor is None or not d.has_entity(c.anchor):
        return False
    children = d.children(c.anchor)
    qualifying = {e for e in children if sig in d.own_signatures(e)}
    if qualifying != c.members:
        return False
    # full cover with a free name belongs to pull-up
    owned = {p.name for p in d.own_properties(c.anchor)}
    return not (c.members == children and c.name not in owned)


def pullup_in_place(d: ClassDiagram, m: PullUpMatch) -> None:
    for member in sorted(m.members):
        prop = d.find_property(member, m.name, m.type.name)
        assert prop is not None
        d.remove_property(prop.id)
    d.add_property(m.superclass, m.name, m.type)


def extract_in_place(d: ClassDiagram, c: ExtractCandidate) -> EntityId:
    """Insert the new entity for ``c`` into ``d`` and return its id."""
    name = fresh_entity_name(d, f"{c.name}_{c.type.name}")
    new = d.add_entity(name, synthetic=True)
    d.add_property(new, c.name, c.type)
    for member in sorted(c.members):
        prop = d.find_property(member, c.name, c.type.name)
        assert prop is not None
        d.remove_property(prop.id)
        if c.kind is CandidateKind.SUBCLASS:
            for gen in d.generalizations_from(member):
                if gen.general == c.anchor:
                    d.remove_generalization(gen.id)
        d.add_generalization(member, new)
    if c.kind is CandidateKind.SUBCLASS:
        assert c.anchor is not None
        d.add_generalization(new, c.anchor)
    return new


def apply_pullup(d: ClassDiagram, m: PullUpMatch) -> ClassDiagram:
    if not _pullup_is_current(d, m):
        raise StaleMatchError(f"stale match: pull-up {m.name}: {m.type.name}")
    out = d.copy()
    pullup_in_place(out, m)
    return out


def apply_extract(d: ClassDiagram, c: ExtractCandidate) -> ClassDiagram:
    if not _extract_is_current(d, c):
        raise StaleMatchError(f"stale match: extract {c.kind.value} {c.name}: {c.type.name}")
    out = d.copy()
    extract_in_place(out, c)
    return out


def apply_step(d: ClassDiagram, step: Step) -> ClassDiagram:
    if isinstance(step.site, PullUpMatch):
        return apply_pullup(d, step.site)
    return apply_extract(d, step.site)
