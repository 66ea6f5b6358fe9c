"""Graphviz rendering of 3-valued structures.

Threads are hexagons and nodes boxes.  Summary individuals get a double
border.  Edges of value 1 are solid and edges of value 1/2 dotted.  Unary
predicates are listed in the label; a 1/2 value is written ``p=1/2``.
"""
from __future__ import annotations

from .logic import FALSE, HALF, TRUE
from .structure import Structure


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _quote(text: str) -> str:
    return '"' + _escape(text) + '"'


def _shape(s: Structure, i: int) -> str:
    if "is[thread]" in s.vocab and s.values["is[thread]"][i] != FALSE:
        return "hexagon"
    if "is[node]" in s.vocab and s.values["is[node]"][i] != FALSE:
        return "box"
    return "ellipse"


def export_dot(s: Structure, name: str = "structure") -> str:
    """DOT source for ``s``."""
    lines = [f"digraph {_quote(name)} {{"]
    nullary = [d.name for d in s.vocab.of_arity(0)]
    shown = [f"{p}=1/2" if s.values[p] == HALF else p for p in nullary if s.values[p] != FALSE]
    if shown:
        lines.append(f"  label={_quote(' '.join(shown))};")
    unary = [d.name for d in s.vocab.of_arity(1)]
    for i, u in enumerate(s.universe):
        labels = [u]
        for p in unary:
            v = s.values[p][i]
            if v == TRUE:
                labels.append(p)
            elif v == HALF:
                labels.append(f"{p}=1/2")
        attrs = [f"shape={_shape(s, i)}", "label=\"" + "\\n".join(map(_escape, labels)) + "\""]
        if s.is_summary(u):
            attrs.append("peripheries=2")
        lines.append(f"  {_quote(u)} [{', '.join(attrs)}];")
    for d in s.vocab.of_arity(2):
        if d.name == "eq":
            continue
        a = s.values[d.name]
        for i, u in enumerate(s.universe):
            for j, w in enumerate(s.universe):
                if a[i, j] == FALSE:
                    continue
                style = "solid" if a[i, j] == TRUE else "dotted"
                lines.append(f"  {_quote(u)} -> {_quote(w)} [label={_quote(d.name)}, style={style}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
