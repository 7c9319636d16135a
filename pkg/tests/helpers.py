"""Random corpora and independent oracles shared by the test modules.

The oracles here deliberately avoid the package's matching and canonical-form
code: they work on plain dicts and sets built from the public element lists.
"""

from __future__ import annotations

import random
from collections import Counter
from typing import Iterator

from redraft import ClassDiagram, Policy, applicable_steps, apply_step

PROP_NAMES = ("a", "b", "c", "d", "e")
TYPE_NAMES = ("Int", "Str")


def random_diagram(
    rng: random.Random,
    *,
    max_entities: int = 15,
    max_props: int = 4,
    synthetic_rate: float = 0.0,
    parent_rate: float = 0.65,
) -> ClassDiagram:
    """A valid diagram: random forest, per-entity distinct property names."""
    n = rng.randint(0, max_entities)
    labels = [f"E{i}" for i in range(n)]
    rng.shuffle(labels)  # sort order of names unrelated to tree shape
    parent = {i: rng.randrange(i) for i in range(1, n) if rng.random() < parent_rate}
    props = {}
    for i in range(n):
        k = rng.randint(0, max_props)
        props[i] = [(name, rng.choice(TYPE_NAMES)) for name in rng.sample(PROP_NAMES, k)]
    synthetic = {i: rng.random() < synthetic_rate for i in range(n)}

    d = ClassDiagram()
    order = list(range(n))
    rng.shuffle(order)
    ids = {i: d.add_entity(labels[i], synthetic[i]) for i in order}
    plist = [(i, name, t) for i in range(n) for name, t in props[i]]
    rng.shuffle(plist)
    for i, name, t in plist:
        d.add_property(ids[i], name, t)
    glist = list(parent.items())
    rng.shuffle(glist)
    for child, par in glist:
        d.add_generalization(ids[child], ids[par])
    return d


def corpus(seed: int, count: int, **kwargs) -> Iterator[ClassDiagram]:
    rng = random.Random(seed)
    for _ in range(count):
        yield random_diagram(rng, **kwargs)


def to_plain(d: ClassDiagram):
    """(entities, own props, generalization pairs) keyed by entity id."""
    ents = {e.id: (e.name, e.synthetic) for e in d.entities}
    own = {e: Counter() for e in ents}
    for p in d.properties:
        own[p.owner][(p.name, p.type.name)] += 1
    gens = Counter((g.specific, g.general) for g in d.generalizations)
    return ents, own, gens


def shuffled_copy(d: ClassDiagram, rng: random.Random, *, rename_synthetic: bool = True) -> ClassDiagram:
    """Isomorphic copy with fresh ids, shuffled element order and renamed synthetic entities."""
    ents, own, gens = to_plain(d)
    out = ClassDiagram()
    order = list(ents)
    rng.shuffle(order)
    new = {}
    for eid in order:
        name, synthetic = ents[eid]
        if synthetic and rename_synthetic:
            name = f"syn_{rng.randrange(10**6)}_{eid}"
        new[eid] = out.add_entity(name, synthetic)
    plist = [(e, sig) for e, c in own.items() for sig in c.elements()]
    rng.shuffle(plist)
    for e, (name, t) in plist:
        out.add_property(new[e], name, t)
    glist = list(gens.elements())
    rng.shuffle(glist)
    for s, g in glist:
        out.add_generalization(new[s], new[g])
    return out


def brute_isomorphic(d1: ClassDiagram, d2: ClassDiagram) -> bool:
    """Exhaustive bijection search.

    Non-synthetic entities must map to the non-synthetic entity of the same
    name; synthetic entities may map to any synthetic entity.  The bijection
    must carry property multisets and generalization edges exactly.
    """
    e1, own1, gens1 = to_plain(d1)
    e2, own2, gens2 = to_plain(d2)
    if len(e1) != len(e2) or sum(gens1.values()) != sum(gens2.values()):
        return False
    named1 = {n: i for i, (n, s) in e1.items() if not s}
    named2 = {n: i for i, (n, s) in e2.items() if not s}
    if set(named1) != set(named2):
        return False
    fixed = {named1[n]: named2[n] for n in named1}
    syn1 = sorted(i for i, (_, s) in e1.items() if s)
    syn2 = sorted(i for i, (_, s) in e2.items() if s)
    if len(syn1) != len(syn2):
        return False

    def complete(mapping: dict[int, int]) -> bool:
        if any(own1[a] != own2[b] for a, b in mapping.items()):
            return False
        return Counter((mapping[s], mapping[g]) for (s, g), k in gens1.items() for _ in range(k)) == gens2

    def search(i: int, mapping: dict[int, int], used: set[int]) -> bool:
        if i == len(syn1):
            return complete(mapping)
        a = syn1[i]
        for b in syn2:
            if b in used or own1[a] != own2[b]:
                continue
            mapping[a] = b
            used.add(b)
            if search(i + 1, mapping, used):
                return True
            del mapping[a]
            used.discard(b)
        return False

    return search(0, dict(fixed), set())


def mutated_copy(d: ClassDiagram, rng: random.Random) -> ClassDiagram:
    """Copy with one small structural change (may or may not stay isomorphic)."""
    ents, own, gens = to_plain(d)
    ids = list(ents)
    if not ids:
        return shuffled_copy(d, rng)
    kind = rng.choice(["move-prop", "flip-synthetic", "drop-gen", "retype"])
    props = [(e, sig) for e, c in own.items() for sig in c.elements()]
    if kind == "move-prop" and props:
        e, sig = rng.choice(props)
        target = rng.choice(ids)
        if all(n != sig[0] for n, _ in own[target]):
            own[e][sig] -= 1
            own[target][sig] += 1
    elif kind == "flip-synthetic":
        e = rng.choice(ids)
        name, synthetic = ents[e]
        ents[e] = (name, not synthetic)
    elif kind == "drop-gen" and gens:
        edge = rng.choice(list(gens))
        del gens[edge]
    elif kind == "retype" and props:
        e, (n, t) = rng.choice(props)
        own[e][(n, t)] -= 1
        own[e][(n, "Str" if t == "Int" else "Int")] += 1
    out = ClassDiagram()
    new = {eid: out.add_entity(*ents[eid]) for eid in ids}
    for e, c in own.items():
        for n, t in c.elements():
            out.add_property(new[e], n, t)
    for s, g in gens.elements():
        out.add_generalization(new[s], new[g])
    return shuffled_copy(out, rng)


def reference_normalize(d: ClassDiagram, policy: Policy = Policy()):
    """Naive fixed-point loop: recompute every site, take the first."""
    steps = []
    while True:
        offered = applicable_steps(d, policy)
        if not offered:
            return d, steps
        d = apply_step(d, offered[0])
        steps.append(offered[0])


# -- plain-dict rule oracle --------------------------------------------------


class PlainModel:
    """Entities as names; own attributes as sets; parent links as a dict."""

    def __init__(self, d: ClassDiagram) -> None:
        self.own = {e.name: set() for e in d.entities}
        for p in d.properties:
            self.own[d.name_of(p.owner)].add((p.name, p.type.name))
        self.parent = {d.name_of(g.specific): d.name_of(g.general) for g in d.generalizations}

    def children(self, s: str) -> set[str]:
        return {c for c, p in self.parent.items() if p == s}

    def pullup_sites(self) -> list[tuple[str, str, str]]:
        sites = []
        all_sigs = {sig for attrs in self.own.values() for sig in attrs}
        for s in self.own:
            kids = self.children(s)
            if len(kids) < 2:
                continue
            for sig in all_sigs:
                if all(sig in self.own[k] for k in kids) and all(n != sig[0] for n, _ in self.own[s]):
                    sites.append((s, *sig))
        return sorted(sites)

    def extract_sites(self) -> list[tuple[str, str, str]]:
        sites = []
        all_sigs = {sig for attrs in self.own.values() for sig in attrs}
        for s in self.own:
            kids = self.children(s)
            for sig in all_sigs:
                having = {k for k in kids if sig in self.own[k]}
                full_and_free = having == kids and all(n != sig[0] for n, _ in self.own[s])
                if len(having) >= 2 and not full_and_free:
                    sites.append((s, *sig))
        roots = [e for e in self.own if e not in self.parent]
        for sig in all_sigs:
            if sum(sig in self.own[r] for r in roots) >= 2:
                sites.append(("", *sig))
        return sorted(sites)

    def pull_up(self, s: str, name: str, type_name: str) -> None:
        for k in self.children(s):
            self.own[k].remove((name, type_name))
        self.own[s].add((name, type_name))
