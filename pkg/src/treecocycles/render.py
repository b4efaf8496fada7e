"""Graphviz DOT output for tree balls and chain projections; Busemann level sets share a rank."""

from __future__ import annotations

import json
from collections import defaultdict

from .algebra import Place
from .cellcomplex import Chain
from .tree import TreeEdge, TreeVertex, ball, busemann


def _q(text) -> str:
    return json.dumps(str(text))


def _graph(name: str, vertices, edges, indent: str = "  ", cluster: bool = False) -> list[str]:
    lines = []
    by_level = defaultdict(list)
    for v in sorted(vertices, key=lambda v: (busemann(v), str(v))):
        by_level[busemann(v)].append(v)
        lines.append(f"{indent}{_q(name + str(v))} [label={_q(v)}];")
    for level in sorted(by_level):
        ids = " ".join(_q(name + str(v)) for v in by_level[level])
        lines.append(f"{indent}{{ rank=same; {ids} }}  // beta = {level}")
    for lo, hi in sorted(edges, key=lambda e: (str(e[0]), str(e[1]))):
        lines.append(f"{indent}{_q(name + str(hi))} -> {_q(name + str(lo))};")
    return lines


def render_ball(center: TreeVertex, radius: int, field) -> str:
    """The radius ball around ``center``; edges point from higher to lower Busemann value."""
    verts = ball(center, radius, field)
    edges = set()
    for v in verts:
        parent = TreeVertex.make(v.place, v.level - 1, v.coeffs)
        if parent in verts:
            edges.add((v, parent))
    lines = ["digraph ball {", "  rankdir=TB;"]
    lines += _graph("", verts, edges)
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_chain(chain: Chain) -> str:
    """Projections of the support of a chain to the two trees, as two clusters."""
    parts = {Place.INF: (set(), set()), Place.ZERO: (set(), set())}
    for cell in chain.cells():
        for factor in (cell.inf, cell.zero):
            verts, edges = parts[factor.place]
            if isinstance(factor, TreeEdge):
                verts.update(factor.endpoints())
                edges.add((factor.lo, factor.hi))
            else:
                verts.add(factor)
    lines = ["digraph chain {", "  rankdir=TB;"]
    for place, tag in ((Place.INF, "inf"), (Place.ZERO, "zero")):
        verts, edges = parts[place]
        lines.append(f"  subgraph cluster_{tag} {{")
        lines.append(f"    label={_q('T_' + ('oo' if tag == 'inf' else '0'))};")
        lines += _graph(tag + ":", verts, edges, indent="    ")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
