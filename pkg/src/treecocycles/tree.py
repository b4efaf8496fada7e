"""Bruhat-Tits trees of SL_2 over F(t) at the places 0 and infinity.

A vertex is the homothety class of the lattice spanned by the columns of
``[[pi^m, c], [0, 1]]`` where pi is the uniformizer and c is a finite jet in
pi with exponents below m.  In these coordinates:

* ``line_vertex(at, s) = (m=-s, c=0)`` parametrizes the diagonal apartment,
* ``busemann(m, c) = -m`` (the ray toward the end fixed by U),
* ``[[1, x], [0, 1]]`` fixes ``(m, c)`` iff ``valuation(x) >= m``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping

from .algebra import INF, Place, RationalFunction, from_uniformizer, jet, valuation
from .fields import QQ
from .group import Matrix2


def _clean_offset(coeffs: Mapping, level: int) -> tuple:
    return tuple(sorted((k, c) for k, c in coeffs.items() if c and k < level))


@dataclass(frozen=True)
class TreeVertex:
    place: Place
    level: int
    offset: tuple = ()

    @classmethod
    def make(cls, place: Place, level: int, coeffs: Mapping | None = None) -> "TreeVertex":
        """Build a vertex, reducing the offset modulo pi^level."""
        return cls(place, level, _clean_offset(coeffs or {}, level))

    @property
    def coeffs(self) -> dict:
        return dict(self.offset)

    def offset_valuation(self):
        return self.offset[0][0] if self.offset else INF

    def offset_rational(self, field=QQ) -> RationalFunction:
        return from_uniformizer(self.coeffs, self.place, field).to_rational()

    def matrix(self, field=QQ) -> Matrix2:
        """Lattice basis [[pi^m, c], [0, 1]] as a matrix over F(t)."""
        pi_m = RationalFunction.t_power(self.place.sign * self.level, field)
        return Matrix2(pi_m, self.offset_rational(field), RationalFunction.zero(field), RationalFunction.one(field))

    def __str__(self):
        tag = "0" if self.place is Place.ZERO else "oo"
        if not self.offset:
            return f"<{tag}:{self.level}>"
        jet_str = " + ".join(f"{c}*pi^{k}" for k, c in self.offset)
        return f"<{tag}:{self.level}|{jet_str}>"


def canonicalize(M: Matrix2, at: Place) -> TreeVertex:
    """Vertex of the homothety class of the column lattice of M at the given place."""
    det = M.det()
    if det.is_zero():
        raise ValueError("singular matrix has no lattice class")
    a, b, c, d = M.entries()
    if valuation(c, at) < valuation(d, at):
        b, d = a, c
    # column elimination makes the lattice [[det/d, b], [0, d]]; scale by 1/d
    level = valuation(det, at) - 2 * valuation(d, at)
    return TreeVertex(at, level, _clean_offset(jet(b / d, at, level), level))


def act(g: Matrix2, v: TreeVertex) -> TreeVertex:
    """Left action of a GL_2(F(t)) element on a vertex."""
    field = g.field
    if g.is_upper_triangular():
        a, b, _, d = g.entries()
        if a.is_zero() or d.is_zero():
            raise ValueError("singular matrix")
        level = v.level + valuation(a, v.place) - valuation(d, v.place)
        if a == d:
            # unipotent up to scalars: offset translates by the jet of b/d
            shifted = dict(v.coeffs)
            for k, c in jet(b / d, v.place, level).items():
                shifted[k] = shifted.get(k, field.zero) + c
            return TreeVertex.make(v.place, level, shifted)
        top = (a * v.offset_rational(field) + b) / d
        return TreeVertex.make(v.place, level, jet(top, v.place, level))
    return canonicalize(g @ v.matrix(field), v.place)


def _offset_gap(u: TreeVertex, v: TreeVertex):
    """Valuation of the difference of the two offsets."""
    cu, cv = u.coeffs, v.coeffs
    diff = [k for k in set(cu) | set(cv) if cu.get(k) != cv.get(k)]
    return min(diff) if diff else INF


def distance(u: TreeVertex, v: TreeVertex) -> int:
    if u.place is not v.place:
        raise ValueError("vertices lie in different trees")
    dm = v.level - u.level
    return dm - 2 * min(dm, _offset_gap(u, v) - u.level, 0)


def busemann(v: TreeVertex) -> int:
    return -v.level


def line_vertex(at: Place, s: int) -> TreeVertex:
    return TreeVertex(at, -s, ())


def base_vertex(at: Place) -> TreeVertex:
    return line_vertex(at, 0)


def neighbors(v: TreeVertex, field) -> list[TreeVertex]:
    """The q + 1 neighbors over a finite field with q elements: q children and one parent."""
    if not field.is_finite:
        raise ValueError("enumeration requires a finite field")
    out = []
    for a in field.elements():
        coeffs = v.coeffs
        if a:
            coeffs[v.level] = a
        out.append(TreeVertex.make(v.place, v.level + 1, coeffs))
    out.append(TreeVertex.make(v.place, v.level - 1, v.coeffs))
    return out


def ball(center: TreeVertex, radius: int, field) -> dict:
    """Breadth-first ball: maps each vertex within ``radius`` to its graph distance."""
    dist = {center: 0}
    queue = deque([center])
    while queue:
        v = queue.popleft()
        if dist[v] == radius:
            continue
        for w in neighbors(v, field):
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def bfs_distances(source: TreeVertex, vertices, field) -> dict:
    """Graph distances from ``source`` inside the induced subgraph on ``vertices``."""
    allowed = set(vertices)
    dist = {source: 0}
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in neighbors(v, field):
            if w in allowed and w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


@dataclass(frozen=True)
class TreeEdge:
    """Edge oriented by increasing Busemann value: busemann(hi) = busemann(lo) + 1."""

    lo: TreeVertex
    hi: TreeVertex

    def __post_init__(self):
        if self.lo.place is not self.hi.place or distance(self.lo, self.hi) != 1:
            raise ValueError(f"{self.lo} and {self.hi} are not adjacent")
        if self.hi.level != self.lo.level - 1:
            raise ValueError("edge endpoints out of canonical order")

    @property
    def place(self) -> Place:
        return self.lo.place

    @classmethod
    def oriented(cls, u: TreeVertex, v: TreeVertex):
        """Canonical edge through u, v and the sign of the orientation u -> v."""
        if busemann(u) < busemann(v):
            return cls(u, v), 1
        return cls(v, u), -1

    def endpoints(self):
        return (self.lo, self.hi)


def line_edge(at: Place, s: int) -> TreeEdge:
    """The apartment edge from line_vertex(s) to line_vertex(s + 1)."""
    return TreeEdge(line_vertex(at, s), line_vertex(at, s + 1))


def vertex_to_json(v: TreeVertex, field=QQ) -> dict:
    return {
        "place": v.place.value,
        "level": v.level,
        "offset": [[k, field.format(c)] for k, c in v.offset],
    }


def vertex_from_json(data: Mapping, field=QQ) -> TreeVertex:
    place = Place.parse(data["place"])
    level = int(data["level"])
    coeffs = {}
    for k, c in data.get("offset", []):
        if int(k) >= level:
            raise ValueError(f"offset exponent {k} is not below level {level}")
        coeffs[int(k)] = field.parse(str(c))
    return TreeVertex.make(place, level, coeffs)
