"""Line-oriented native format.

::

    # comment
    entity A @1
    entity x_Int synthetic @4
    prop B.x: Int @2
    gen B -> A @3

Every declaration may end in ``@<id>`` to pin its element id; the writer always
emits ids so that a write/parse round trip is exact.  Declarations without an
id get fresh ids in document order.  Entities may be referenced before they
are declared.
"""

from __future__ import annotations

import re

from ..diagram import ClassDiagram, require_valid
from .errors import ParseError

NAME = r"[A-Za-z_][A-Za-z0-9_$]*"
TYPE_NAME = r"[A-Za-z_][A-Za-z0-9_$.]*"
_ID = r"(?:\s+@(?P<id>\d+))?"

_ENTITY = re.compile(rf"entity\s+(?P<name>{NAME})(?P<synthetic>\s+synthetic)?{_ID}")
_PROP = re.compile(rf"prop\s+(?P<owner>{NAME})\.(?P<name>{NAME})\s*:\s*(?P<type>{TYPE_NAME}){_ID}")
_GEN = re.compile(rf"gen\s+(?P<specific>{NAME})\s*->\s*(?P<general>{NAME}){_ID}")

_NAME_RE = re.compile(NAME)
_TYPE_RE = re.compile(TYPE_NAME)


def parse_native(data: bytes | str) -> ClassDiagram:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    decls: list[tuple[str, re.Match[str], int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword = line.split(None, 1)[0]
        pattern = {"entity": _ENTITY, "prop": _PROP, "gen": _GEN}.get(keyword)
        if pattern is None:
            raise ParseError(f"unknown declaration {keyword!r}", lineno, 1)
        m = pattern.fullmatch(line)
        if m is None:
            raise ParseError(f"malformed {keyword} declaration: {line!r}", lineno, 1)
        decls.append((keyword, m, lineno))

    pinned: dict[int, int] = {}
    for _, m, lineno in decls:
        if m["id"] is not None:
            eid = int(m["id"])
            if eid < 1:
                raise ParseError(f"element id must be positive, got {eid}", lineno, 1)
            if eid in pinned:
                raise ParseError(f"id @{eid} already used on line {pinned[eid]}", lineno, 1)
            pinned[eid] = lineno
    next_free = max(pinned, default=0) + 1

    def take(m: re.Match[str]) -> int:
        nonlocal next_free
        if m["id"] is not None:
            return int(m["id"])
        next_free += 1
        return next_free - 1

    d = ClassDiagram()
    names: dict[str, int] = {}
    ids = [take(m) for _, m, _ in decls]
    for (keyword, m, lineno), eid in zip(decls, ids):
        if keyword == "entity":
            if m["name"] in names:
                raise ParseError(f"duplicate entity name {m['name']!r}", lineno, 1)
            names[m["name"]] = d.add_entity(m["name"], m["synthetic"] is not None, id=eid)

    def entity(name: str, lineno: int) -> int:
        if name not in names:
            raise ParseError(f"undeclared entity {name!r}", lineno, 1)
        return names[name]

    for (keyword, m, lineno), eid in zip(decls, ids):
        if keyword == "prop":
            d.add_property(entity(m["owner"], lineno), m["name"], m["type"], id=eid)
        elif keyword == "gen":
            d.add_generalization(entity(m["specific"], lineno), entity(m["general"], lineno), id=eid)
    require_valid(d)
    return d


def _check_token(kind: str, value: str, pattern: re.Pattern[str]) -> str:
    if not pattern.fullmatch(value):
        raise ValueError(f"{kind} {value!r} cannot be written in native format")
    return value


def write_native(d: ClassDiagram) -> bytes:
    require_valid(d)
    lines = []
    for e in sorted(d.entities, key=lambda e: e.id):
        flag = " synthetic" if e.synthetic else ""
        lines.append(f"entity {_check_token('entity name', e.name, _NAME_RE)}{flag} @{e.id}")
    for p in sorted(d.properties, key=lambda p: p.id):
        owner = d.name_of(p.owner)
        name = _check_token("property name", p.name, _NAME_RE)
        type_name = _check_token("type name", p.type.name, _TYPE_RE)
        lines.append(f"prop {owner}.{name}: {type_name} @{p.id}")
    for g in sorted(d.generalizations, key=lambda g: g.id):
        lines.append(f"gen {d.name_of(g.specific)} -> {d.name_of(g.general)} @{g.id}")
    return "".join(line + "\n" for line in lines).encode("utf-8")
