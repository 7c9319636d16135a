"""Reader and writer for the flat XMI subset.

Document shape::

    <?xml version="1.0" encoding="UTF-8"?>
    <model>
      <entity id="e1" name="A"/>
      <entity id="e2" name="x_Int" synthetic="true"/>
      <property id="p1" owner="e2" name="x" type="Int"/>
      <generalization id="g1" specific="e2" general="e1"/>
    </model>

References are by ``id`` attribute.  Opposite ends of a generalization are not
stored twice: each link is a single element naming both ends.
"""

from __future__ import annotations

from xml.parsers import expat
from xml.sax.saxutils import escape

from ..diagram import ClassDiagram, require_valid
from .errors import ParseError

_ATTRS = {
    "entity": (("id", "name"), ("synthetic",)),
    "property": (("id", "owner", "name", "type"), ()),
    "generalization": (("id", "specific", "general"), ()),
}


def _quote(value: str) -> str:
    return '"' + escape(value, {'"': "&quot;", "\n": "&#10;", "\r": "&#13;", "\t": "&#9;"}) + '"'


def parse_xmi(data: bytes | str) -> ClassDiagram:
    if isinstance(data, str):
        data = data.encode("utf-8")
    parser = expat.ParserCreate("UTF-8")
    # (tag, attrs, line, column) in document order
    elements: list[tuple[str, dict[str, str], int, int]] = []
    depth = 0
    saw_root = False

    def start(tag: str, attrs: dict[str, str]) -> None:
        nonlocal depth, saw_root
        line, col = parser.CurrentLineNumber, parser.CurrentColumnNumber + 1
        if depth == 0:
            if tag != "model":
                raise ParseError(f"unsupported element <{tag}> (root must be <model>)", line, col)
            saw_root = True
        elif depth == 1:
            if tag not in _ATTRS:
                raise ParseError(f"unsupported element <{tag}>", line, col)
            elements.append((tag, attrs, line, col))
        else:
            raise ParseError(f"unsupported element <{tag}> nested in <{elements[-1][0]}>", line, col)
        depth += 1

    def end(tag: str) -> None:
        nonlocal depth
        depth -= 1

    parser.StartElementHandler = start
    parser.EndElementHandler = end
    try:
        parser.Parse(data, True)
    except expat.ExpatError as exc:
        raise ParseError(f"malformed XML: {expat.ErrorString(exc.code)}", exc.lineno, exc.offset + 1) from None
    if not saw_root:
        raise ParseError("missing <model> root", 1, 1)

    seen_ids: dict[str, tuple[str, int]] = {}
    for pos, (tag, attrs, line, col) in enumerate(elements, start=1):
        required, optional = _ATTRS[tag]
        for key in required:
            if key not in attrs:
                raise ParseError(f"<{tag}> is missing attribute {key!r}", line, col)
        for key in attrs:
            if key not in required and key not in optional:
                raise ParseError(f"<{tag}> has unsupported attribute {key!r}", line, col)
        xid = attrs["id"]
        if xid in seen_ids:
            raise ParseError(f"duplicate id {xid!r}", line, col)
        seen_ids[xid] = (tag, pos)

    d = ClassDiagram()
    entity_ids: dict[str, int] = {}
    for pos, (tag, attrs, line, col) in enumerate(elements, start=1):
        if tag == "entity":
            flag = attrs.get("synthetic", "false")
            if flag not in ("true", "false"):
                raise ParseError(f"synthetic must be 'true' or 'false', got {flag!r}", line, col)
            entity_ids[attrs["id"]] = d.add_entity(attrs["name"], flag == "true", id=pos)

    def ref(attrs: dict[str, str], key: str, line: int, col: int) -> int:
        target = attrs[key]
        if target not in entity_ids:
            raise ParseError(f"dangling ref {target}", line, col)
        return entity_ids[target]

    for pos, (tag, attrs, line, col) in enumerate(elements, start=1):
        if tag == "property":
            d.add_property(ref(attrs, "owner", line, col), attrs["name"], attrs["type"], id=pos)
        elif tag == "generalization":
            specific = ref(attrs, "specific", line, col)
            general = ref(attrs, "general", line, col)
            d.add_generalization(specific, general, id=pos)
    require_valid(d)
    return d


def write_xmi(d: ClassDiagram) -> bytes:
    require_valid(d)
    entities = sorted(d.entities, key=lambda e: e.name)
    xid = {e.id: f"e{i}" for i, e in enumerate(entities, start=1)}
    lines = ['<?xml version="1.0" encoding="UTF-8"?>']
    if not entities:
        lines.append("<model/>")
        return ("\n".join(lines) + "\n").encode("utf-8")
    lines.append("<model>")
    for e in entities:
        flag = ' synthetic="true"' if e.synthetic else ""
        lines.append(f"  <entity id={_quote(xid[e.id])} name={_quote(e.name)}{flag}/>")
    props = sorted(d.properties, key=lambda p: (d.name_of(p.owner), p.name, p.type.name))
    for i, p in enumerate(props, start=1):
        lines.append(
            f"  <property id={_quote(f'p{i}')} owner={_quote(xid[p.owner])} "
            f"name={_quote(p.name)} type={_quote(p.type.name)}/>"
        )
    gens = sorted(d.generalizations, key=lambda g: (d.name_of(g.specific), d.name_of(g.general)))
    for i, g in enumerate(gens, start=1):
        lines.append(
            f"  <generalization id={_quote(f'g{i}')} specific={_quote(xid[g.specific])} "
            f"general={_quote(xid[g.general])}/>"
        )
    lines.append("</model>")
    return ("\n".join(lines) + "\n").encode("utf-8")
