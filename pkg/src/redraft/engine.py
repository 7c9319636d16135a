"""Normalization, state-space exploration and confluence checking."""

from __future__ import annotations

import heapq
import time
from collections import deque
from dataclasses import dataclass, field

from .canonical import canonical_key, isomorphic
from .diagram import ClassDiagram, DiagramError, EntityId, require_valid
from .rules import (
    CandidateKind,
    ExtractCandidate,
    Mode,
    Policy,
    PullUpMatch,
    Rule,
    Step,
    TieHandling,
    anchor_sites,
    applicable_steps,
    apply_step,
    extract_in_place,
    pullup_in_place,
)

__all__ = [
    "ConfluenceReport",
    "ExplorationStats",
    "IncompleteExplorationError",
    "Limits",
    "Mode",
    "Policy",
    "StateSpace",
    "TieHandling",
    "Trace",
    "TraceEntry",
    "canonical_key",
    "check_confluence",
    "explore",
    "isomorphic",
    "normalize",
]

DEFAULT_MAX_STATES = 100_000


class IncompleteExplorationError(DiagramError):
    pass


@dataclass(frozen=True)
class TraceEntry:
    step: Step
    size_after: int


@dataclass
class Trace:
    entries: list[TraceEntry] = field(default_factory=list)

    @property
    def steps(self) -> int:
        return len(self.entries)

    def rules(self) -> list[Rule]:
        return [e.step.rule for e in self.entries]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


# ---------------------------------------------------------------------------
# normalization


class _Agenda:
    """Incrementally maintained rule sites over a private working diagram.

    The sites anchored at an entity depend only on its own property names, its
    children and their own properties, so after a step only the anchors around
    the rewritten entities are recomputed.  Stale heap entries are skipped
    lazily via per-anchor version numbers (pull-up, subclass extraction) or by
    comparing the recorded group size (root extraction).
    """

    def __init__(self, d: ClassDiagram) -> None:
        self.d = d
        self.version: dict[EntityId, int] = {}
        self.pulls: list = []
        self.subs: list = []
        self.roots: list = []
        self.root_members: dict[tuple[str, str], set[EntityId]] = {}
        self.root_contrib: dict[EntityId, set[tuple[str, str]]] = {}
        for eid in list(d.entity_ids()):
            self._refresh_anchor(eid)
            self._refresh_root(eid)

    def _refresh_anchor(self, a: EntityId) -> None:
        v = self.version.get(a, 0) + 1
        self.version[a] = v
        pulls, subs = anchor_sites(self.d, a)
        if not pulls and not subs:
            return
        aname = self.d.name_of(a)
        for m in pulls:
            heapq.heappush(self.pulls, ((aname, m.name, m.type.name), v, a, m))
        for c in subs:
            heapq.heappush(self.subs, ((-c.count, aname, c.name, c.type.name), v, a, c))

    def _touch_group(self, sig: tuple[str, str]) -> None:
        n = len(self.root_members.get(sig, ()))
        if n >= 2:
            heapq.heappush(self.roots, ((-n, "", sig[0], sig[1]), n))

    def _refresh_root(self, e: EntityId) -> None:
        d = self.d
        old = self.root_contrib.pop(e, set())
        new = d.own_signatures(e) if d.is_root(e) else set()
        for sig in old - new:
            self.root_members[sig].discard(e)
            self._touch_group(sig)
        for sig in new - old:
            self.root_members.setdefault(sig, set()).add(e)
            self._touch_group(sig)
        if new:
            self.root_contrib[e] = set(new)

    def next_step(self) -> Step | None:
        while self.pulls:
            _, v, a, m = self.pulls[0]
            if self.version[a] == v:
                return Step(Rule.PULL_UP, m)
            heapq.heappop(self.pulls)
        while self.subs:
            _, v, a, c = self.subs[0]
            if self.version[a] == v:
                return Step(Rule.EXTRACT_SUB, c)
            heapq.heappop(self.subs)
        while self.roots:
            (_, _, name, type_name), n = self.roots[0]
            members = self.root_members.get((name, type_name), set())
            if len(members) == n:
                c = ExtractCandidate(
                    CandidateKind.ROOT, None, name, self.d.type_ref(type_name), frozenset(members)
                )
                return Step(Rule.EXTRACT_ROOT, c)
            heapq.heappop(self.roots)
        return None

    def apply(self, step: Step) -> None:
        d = self.d
        site = step.site
        touched = set(site.members)
        if isinstance(site, PullUpMatch):
            pullup_in_place(d, site)
            touched.add(site.superclass)
        else:
            touched.add(extract_in_place(d, site))
            if site.anchor is not None:
                touched.add(site.anchor)
        anchors = set(touched)
        for e in touched:
            p = d.parent(e)
            if p is not None:
                anchors.add(p)
        for a in anchors:
            self._refresh_anchor(a)
        for e in touched:
            self._refresh_root(e)


def normalize(d: ClassDiagram, policy: Policy = Policy()) -> tuple[ClassDiagram, Trace]:
    """Rewrite ``d`` to a normal form, always taking the first offered step.

    Under both modes the first offered step is the least pull-up if any, else
    the first largest subclass extraction, else the first largest root
    extraction, so the result does not depend on ``policy.mode``.
    """
    if policy.tie_handling is not TieHandling.DETERMINISTIC:
        raise ValueError("normalize requires deterministic tie handling")
    require_valid(d)
    work = d.copy()
    agenda = _Agenda(work)
    trace = Trace()
    while (step := agenda.next_step()) is not None:
        agenda.apply(step)
        trace.entries.append(TraceEntry(step, work.size))
    return work, trace


# ---------------------------------------------------------------------------
# exploration


@dataclass(frozen=True)
class Limits:
    max_states: int = DEFAULT_MAX_STATES
    max_seconds: float | None = None


@dataclass
class ExplorationStats:
    states: int = 0
    transitions: int = 0
    seconds: float = 0.0


@dataclass
class StateSpace:
    states: dict[bytes, ClassDiagram]
    transitions: set[tuple[bytes, Step, bytes]]
    initial: bytes
    finals: set[bytes]
    complete: bool
    stats: ExplorationStats

    def successors(self, key: bytes) -> set[bytes]:
        return {t for s, _, t in self.transitions if s == key}

    def final_diagrams(self) -> list[ClassDiagram]:
        return [self.states[k] for k in sorted(self.finals)]


def explore(
    d: ClassDiagram,
    policy: Policy = Policy(Mode.FREE, TieHandling.BRANCH_ALL),
    limits: Limits = Limits(),
) -> StateSpace:
    """Breadth-first closure of the offered steps, states merged up to isomorphism.

    When a limit is hit the partial space is returned with ``complete=False``;
    ``finals`` then holds only the states already expanded and found terminal.
    """
    require_valid(d)
    started = time.perf_counter()
    initial = canonical_key(d, check=False)
    states = {initial: d}
    transitions: set[tuple[bytes, Step, bytes]] = set()
    finals: set[bytes] = set()
    frontier = deque([initial])
    complete = True

    while frontier and complete:
        if limits.max_seconds is not None and time.perf_counter() - started > limits.max_seconds:
            complete = False
            break
        key = frontier.popleft()
        rep = states[key]
        steps = applicable_steps(rep, policy)
        if not steps:
            finals.add(key)
            continue
        for step in steps:
            succ = apply_step(rep, step)
            skey = canonical_key(succ, check=False)
            if skey not in states:
                if len(states) >= limits.max_states:
                    complete = False
                    break
                states[skey] = succ
                frontier.append(skey)
            transitions.add((key, step, skey))

    stats = ExplorationStats(len(states), len(transitions), time.perf_counter() - started)
    return StateSpace(states, transitions, initial, finals, complete, stats)


@dataclass
class ConfluenceReport:
    confluent: bool
    final_count: int
    witnesses: list[ClassDiagram] = field(default_factory=list)


def check_confluence(s: StateSpace) -> ConfluenceReport:
    if not s.complete:
        raise IncompleteExplorationError("cannot decide on partial exploration")
    n = len(s.finals)
    if n == 1:
        return ConfluenceReport(True, 1)
    return ConfluenceReport(False, n, s.final_diagrams()[:2])

