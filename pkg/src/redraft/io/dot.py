from __future__ import annotations

from ..diagram import ClassDiagram, require_valid


def _record_escape(s: str) -> str:
    out = []
    for ch in s:
        if ch in '{}|<>"\\ ':
            out.append("\\" + ch)
        else:
            out.append(ch)
    return "".join(out)


def _id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(d: ClassDiagram, graph_name: str = "diagram") -> str:
    """Graphviz digraph with one record node per entity and an edge per generalization.

    Edges run specific -> general with hollow arrowheads.  Synthetic entities
    are drawn dashed.
    """
    require_valid(d)
    lines = [f"digraph {_id(graph_name)} {{"]
    entities = sorted(d.entities, key=lambda e: e.name)
    if entities:
        lines.append('  node [shape=record, fontname="Helvetica"];')
        lines.append("  edge [arrowhead=empty];")
    for e in entities:
        props = sorted(d.own_signatures(e.id))
        body = "".join(_record_escape(f"{n} : {t}") + "\\l" for n, t in props)
        label = "{" + _record_escape(e.name) + ("|" + body if props else "") + "}"
        style = ', style=dashed, color="gray40"' if e.synthetic else ""
        lines.append(f'  {_id(e.name)} [label="{label}"{style}];')
    edges = sorted((d.name_of(g.specific), d.name_of(g.general)) for g in d.generalizations)
    for specific, general in edges:
        lines.append(f"  {_id(specific)} -> {_id(general)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
