"""Canonical keys for diagrams up to renaming of synthetic entities.

Valid diagrams are forests under the generalization relation, so a canonical
form falls out of bottom-up subtree encoding: each entity is encoded from its
own label (its name, or a bare marker when synthetic), its sorted property
signatures and the sorted encodings of its children.  Two diagrams get the
same key exactly when some bijection maps one onto the other while keeping
non-synthetic names, properties and generalization edges.

Atoms are length-prefixed and subtrees parenthesised, so the encoding is
injective without any escaping.
"""

from __future__ import annotations

from .diagram import ClassDiagram, EntityId, require_valid, root_entities


def _atom(s: str) -> str:
    return f"{len(s)}:{s}"


def _label(d: ClassDiagram, eid: EntityId) -> str:
    ent = d.entity(eid)
    head = "S" if ent.synthetic else "N" + _atom(ent.name)
    props = "".join(_atom(n) + _atom(t) for n, t in sorted(d.own_signatures(eid)))
    return f"{head}[{props}]"


def subtree_codes(d: ClassDiagram) -> dict[EntityId, str]:
    codes: dict[EntityId, str] = {}
    for root in root_entities(d):
        # iterative post-order; inheritance chains can be deep
        stack: list[tuple[EntityId, bool]] = [(root, False)]
        while stack:
            node, expanded = stack.pop()
            kids = d.children(node)
            if expanded or not kids:
                inner = "".join(sorted(codes[k] for k in kids))
                codes[node] = f"({_label(d, node)}{inner})"
            else:
                stack.append((node, True))
                stack.extend((k, False) for k in kids)
    return codes


def canonical_key(d: ClassDiagram, *, check: bool = True) -> bytes:
    if check:
        require_valid(d)
    codes = subtree_codes(d)
    return "".join(sorted(codes[r] for r in root_entities(d))).encode("utf-8")


def isomorphic(d1: ClassDiagram, d2: ClassDiagram) -> bool:
    if len(d1) != len(d2) or len(d1.properties) != len(d2.properties):
        return False
    return canonical_key(d1) == canonical_key(d2)
