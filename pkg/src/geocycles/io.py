"""JSON and DOT serialisation. Rationals are always written as ``"p/q"`` strings."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Optional

from .errors import InputError
from .graph import Edge, Graph, parse_length
from .truncation import Interval, Truncation


def fraction_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _default(obj):
    if isinstance(obj, Fraction):
        return fraction_str(obj)
    if isinstance(obj, Interval):
        return [fraction_str(obj.lo), None if obj.hi is None else fraction_str(obj.hi)]
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, default=_default, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def graph_to_json(g: Graph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [{"id": e.id, "u": e.u, "v": e.v, "len": fraction_str(e.length)} for e in g.edges],
    }


def graph_from_json(doc) -> Graph:
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise InputError(f"graph document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "edges" not in doc:
        raise InputError("graph document needs an 'edges' list")
    try:
        edges = [
            Edge(str(e["id"]), str(e["u"]), str(e["v"]), parse_length(e.get("len", "1")))
            for e in doc["edges"]
        ]
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed edge entry: {exc}") from exc
    verts = [str(v) for v in doc.get("vertices", [])]
    known = set(verts)
    for e in edges:
        for x in (e.u, e.v):
            if x not in known:
                if "vertices" in doc:
                    raise InputError(f"edge {e.id!r} uses undeclared vertex {x!r}")
                known.add(x)
                verts.append(x)
    return Graph(verts, edges)


def truncation_to_json(t: Truncation) -> dict:
    doc = graph_to_json(t.tilde)
    for o in t.outer.values():
        doc["edges"].append(
            {"id": o.id, "u": o.u, "v": o.v, "len": _default(o.length), "outer": True}
        )
    doc["index"] = t.index
    doc["inner"] = sorted(t.inner)
    return doc


def to_dot(
    g: Graph,
    highlight: Iterable[str] = (),
    truncation: Optional[Truncation] = None,
    name: str = "G",
) -> str:
    """Undirected DOT. Outer edges are dashed and labelled with their interval."""
    marked = set(highlight)
    lines = [f"graph {json.dumps(name)} {{"]
    for v in g.vertices:
        lines.append(f"  {json.dumps(v)};")
    for e in g.edges:
        attrs = []
        if truncation is not None and truncation.is_outer(e.id):
            iv = truncation.outer[e.id].length
            label = fraction_str(iv.lo) if iv.exact else f"[{fraction_str(iv.lo)},{fraction_str(iv.hi)}]"
            attrs += ["style=dashed", f"label={json.dumps(label)}"]
        else:
            attrs.append(f"label={json.dumps(fraction_str(e.length))}")
        if e.id in marked:
            attrs.append("color=red")
        attrs.append(f"id={json.dumps(e.id)}")
        lines.append(f"  {json.dumps(e.u)} -- {json.dumps(e.v)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
