"""The square complex X = T_inf x T_0, its chains, and the distinguished cells and chains.

Cells are products of a vertex or canonical edge from each tree.  Squares
are stored with both edges oriented by increasing Busemann value; the
boundary puts the T_0 factor first::

    d(e x f) = e x (df) - (de) x f      (e in T_inf, f in T_0)

With this convention the apartment square l_inf([n-1, n]) x l_0([n-1, n]) is
C^n_{0,0} with coefficient +1 and has boundary e_0 - f_0 + (terms away from
x_n), where e_0 and f_0 are oriented away from x_n.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .algebra import LaurentPolynomial, Place
from .fields import QQ
from .group import Matrix2, Unipotent
from .tree import (
    TreeEdge,
    TreeVertex,
    act,
    busemann,
    line_edge,
    line_vertex,
    neighbors,
    vertex_from_json,
    vertex_to_json,
)

Factor = Union[TreeVertex, TreeEdge]

# Sign of C^n_{a,b} relative to the canonical square orientation.  Tests flip it
# through corrupt_orientation() to confirm the pairing check notices.
C_ORIENTATION = 1


@contextlib.contextmanager
def corrupt_orientation():
    global C_ORIENTATION
    C_ORIENTATION = -C_ORIENTATION
    try:
        yield
    finally:
        C_ORIENTATION = -C_ORIENTATION


@dataclass(frozen=True)
class ProductVertex:
    inf: TreeVertex
    zero: TreeVertex

    def __post_init__(self):
        if self.inf.place is not Place.INF or self.zero.place is not Place.ZERO:
            raise ValueError("product vertex factors are in the wrong trees")

    def __str__(self):
        return f"({self.inf}, {self.zero})"


def x_point(n: int) -> ProductVertex:
    """The apartment point x_n = (l_inf(n), l_0(n))."""
    return ProductVertex(line_vertex(Place.INF, n), line_vertex(Place.ZERO, n))


def apartment_point(i: int, j: int) -> ProductVertex:
    return ProductVertex(line_vertex(Place.INF, i), line_vertex(Place.ZERO, j))


def beta_rho(p: ProductVertex) -> int:
    return busemann(p.inf) + busemann(p.zero)


def act_point(g: Matrix2, p: ProductVertex) -> ProductVertex:
    return ProductVertex(act(g, p.inf), act(g, p.zero))


@dataclass(frozen=True)
class HoroballSpec:
    threshold: int


def in_horoball(p: ProductVertex, h: HoroballSpec) -> bool:
    return beta_rho(p) >= h.threshold


def _factor_dim(x: Factor) -> int:
    return 1 if isinstance(x, TreeEdge) else 0


def _factor_vertices(x: Factor):
    return x.endpoints() if isinstance(x, TreeEdge) else (x,)


@dataclass(frozen=True)
class Cell:
    """Product cell; each factor is a vertex or a canonically oriented edge."""

    inf: Factor
    zero: Factor

    def __post_init__(self):
        if self.inf.place is not Place.INF or self.zero.place is not Place.ZERO:
            raise ValueError("cell factors are in the wrong trees")

    @property
    def dim(self) -> int:
        return _factor_dim(self.inf) + _factor_dim(self.zero)

    def vertices(self) -> list[ProductVertex]:
        return [ProductVertex(u, v) for u in _factor_vertices(self.inf) for v in _factor_vertices(self.zero)]

    def bottom(self) -> ProductVertex:
        """Vertex with the least Busemann value in each factor."""
        lo = lambda x: x.lo if isinstance(x, TreeEdge) else x
        return ProductVertex(lo(self.inf), lo(self.zero))

    def beta_range(self, place: Place):
        x = self.inf if place is Place.INF else self.zero
        vs = _factor_vertices(x)
        return min(busemann(v) for v in vs), max(busemann(v) for v in vs)

    def __str__(self):
        def fmt(x):
            return f"[{x.lo}->{x.hi}]" if isinstance(x, TreeEdge) else str(x)

        return f"{fmt(self.inf)} x {fmt(self.zero)}"


def apartment_square(i: int, j: int) -> Cell:
    """l_inf([i, i+1]) x l_0([j, j+1])."""
    return Cell(line_edge(Place.INF, i), line_edge(Place.ZERO, j))


class Chain:
    """Finite F-linear combination of cells of one dimension."""

    __slots__ = ("field", "terms")

    def __init__(self, terms: Mapping | Iterable = (), field=QQ):
        self.field = field
        acc: dict = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for cell, c in items:
            acc[cell] = acc.get(cell, field.zero) + field(c)
        self.terms = {k: v for k, v in acc.items() if v}
        dims = {cell.dim for cell in self.terms}
        if len(dims) > 1:
            raise ValueError(f"chain mixes cell dimensions {sorted(dims)}")

    @classmethod
    def single(cls, cell: Cell, coeff=1, field=QQ) -> "Chain":
        return cls([(cell, coeff)], field)

    @property
    def dim(self):
        return next(iter(self.terms)).dim if self.terms else None

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def cells(self):
        return list(self.terms)

    def coeff(self, cell: Cell):
        return self.terms.get(cell, self.field.zero)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Chain") -> "Chain":
        return Chain(list(self.terms.items()) + list(other.terms.items()), self.field)

    def __neg__(self) -> "Chain":
        return Chain({k: -v for k, v in self.terms.items()}, self.field)

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __mul__(self, scalar) -> "Chain":
        s = self.field(scalar)
        return Chain({k: v * s for k, v in self.terms.items()}, self.field)

    __rmul__ = __mul__

    def restrict(self, pred) -> "Chain":
        return Chain({k: v for k, v in self.terms.items() if pred(k)}, self.field)

    def vertices(self) -> set:
        return {p for cell in self.terms for p in cell.vertices()}

    def __eq__(self, other):
        if not isinstance(other, Chain):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self):
        return f"Chain({len(self.terms)} cells)"


def cell_boundary(cell: Cell) -> list:
    """Signed faces of a cell (see module docstring for the sign convention)."""
    e, f = cell.inf, cell.zero
    if cell.dim == 0:
        raise ValueError("boundary of a 0-chain")
    if cell.dim == 2:
        return [(Cell(e, f.hi), 1), (Cell(e, f.lo), -1), (Cell(e.hi, f), -1), (Cell(e.lo, f), 1)]
    if isinstance(f, TreeEdge):
        return [(Cell(e, f.hi), 1), (Cell(e, f.lo), -1)]
    return [(Cell(e.hi, f), 1), (Cell(e.lo, f), -1)]


def boundary(chain: Chain) -> Chain:
    if chain.is_zero():
        return Chain((), chain.field)
    if chain.dim == 0:
        raise ValueError("boundary of a 0-chain")
    out = []
    for cell, c in chain:
        for face, s in cell_boundary(cell):
            out.append((face, c * s))
    return Chain(out, chain.field)


def _act_factor(g: Matrix2, x: Factor, cache: dict):
    def img(v):
        if v not in cache:
            cache[v] = act(g, v)
        return cache[v]

    if isinstance(x, TreeEdge):
        return TreeEdge.oriented(img(x.lo), img(x.hi))
    return img(x), 1


def act_cell(g: Matrix2, cell: Cell, cache: dict | None = None):
    """Image cell and the orientation sign picked up by transporting it."""
    cache = {} if cache is None else cache
    inf, s1 = _act_factor(g, cell.inf, cache)
    zero, s2 = _act_factor(g, cell.zero, cache)
    return Cell(inf, zero), s1 * s2


def act_chain(g, chain: Chain) -> Chain:
    if isinstance(g, Unipotent):
        g = g.matrix
    if g.det().is_zero():
        raise ValueError("singular matrix")
    cache: dict = {}
    out = []
    for cell, c in chain:
        image, sign = act_cell(g, cell, cache)
        out.append((image, c * sign))
    return Chain(out, chain.field)


def unipotent_ab(n: int, a, b, field=QQ) -> Unipotent:
    """[[1, a t^-n + b t^n], [0, 1]]."""
    x = LaurentPolynomial({-n: a}, field) + LaurentPolynomial({n: b}, field)
    return Unipotent(x.to_rational())


def base_cell(n: int) -> Cell:
    """C^n_{0,0}: the square of the star of x_n that contains x_{n-1}."""
    return apartment_square(n - 1, n - 1)


def make_C_cell(n: int, a, b, field=QQ) -> Cell:
    if n < 1:
        raise ValueError("n must be >= 1")
    cell, sign = act_cell(unipotent_ab(n, a, b, field).matrix, base_cell(n))
    assert sign == 1
    return cell


def make_C(n: int, a, b, field=QQ) -> Chain:
    """The oriented 2-cell C^n_{a,b} as a one-term chain."""
    return Chain.single(make_C_cell(n, a, b, field), C_ORIENTATION, field)


class StarDown:
    """The 2-cells of the star of x_n with both Busemann values at most n."""

    def __init__(self, n: int, field=QQ):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        self.field = field
        self.top_inf = line_vertex(Place.INF, n)
        self.top_zero = line_vertex(Place.ZERO, n)

    def __contains__(self, cell: Cell) -> bool:
        return (
            cell.dim == 2
            and cell.inf.hi == self.top_inf
            and cell.zero.hi == self.top_zero
        )

    def _lower_neighbors(self, top: TreeVertex):
        return [v for v in neighbors(top, self.field) if busemann(v) == self.n - 1]

    def __iter__(self):
        lows_inf = self._lower_neighbors(self.top_inf)
        lows_zero = self._lower_neighbors(self.top_zero)
        for u in lows_inf:
            for v in lows_zero:
                yield Cell(TreeEdge(u, self.top_inf), TreeEdge(v, self.top_zero))

    def __len__(self):
        return self.field.size**2 if self.field.is_finite else self._raise()

    def _raise(self):
        raise ValueError("enumeration requires a finite field")


def star_down(n: int, field=QQ) -> StarDown:
    return StarDown(n, field)


def in_star(n: int, cell: Cell) -> bool:
    """Whether x_n is a vertex of the cell."""
    return x_point(n) in cell.vertices()


def cell_coords(cell: Cell, n: int, field=QQ):
    """(a, b) with make_C(n, a, b) equal to ``cell``."""
    if cell not in StarDown(n):
        raise ValueError(f"cell {cell} is not in the lower star of x_{n}")
    a = cell.zero.lo.coeffs.get(-n, field.zero)
    b = cell.inf.lo.coeffs.get(-n, field.zero)
    return a, b


def triangle_Z(n: int, field=QQ, literal: bool = False) -> Chain:
    """Apartment triangle with right-angle corner x_{2n} and hypotenuse on beta_rho = 0.

    ``literal=True`` puts the corner at x_n instead (the variant whose four
    translates never reach the lower star of x_{2n}).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    corner = n if literal else 2 * n
    cells = [
        (apartment_square(i, j), 1)
        for i in range(-corner, corner)
        for j in range(-corner, corner)
        if i + j >= 0
    ]
    return Chain(cells, field)


def square_B(n: int, field=QQ, literal: bool = False) -> Chain:
    """Z - u(t^2n) Z - u(t^-2n) Z + u(t^-2n + t^2n) Z."""
    z = triangle_Z(n, field, literal)
    u1 = Unipotent(LaurentPolynomial({2 * n: 1}, field).to_rational())
    u2 = Unipotent(LaurentPolynomial({-2 * n: 1}, field).to_rational())
    return z - act_chain(u1, z) - act_chain(u2, z) + act_chain(u1 * u2, z)


def restrict_to_horoball(chain: Chain, h: HoroballSpec) -> Chain:
    return chain.restrict(lambda cell: all(in_horoball(p, h) for p in cell.vertices()))


def _factor_to_json(x: Factor, field) -> dict:
    if isinstance(x, TreeEdge):
        return {"v1": vertex_to_json(x.lo, field), "v2": vertex_to_json(x.hi, field)}
    return vertex_to_json(x, field)


def cell_to_json(cell: Cell, field=QQ) -> dict:
    key_inf = "eInf" if isinstance(cell.inf, TreeEdge) else "vInf"
    key_zero = "eZero" if isinstance(cell.zero, TreeEdge) else "vZero"
    return {key_inf: _factor_to_json(cell.inf, field), key_zero: _factor_to_json(cell.zero, field)}


def cell_from_json(data: Mapping, field=QQ):
    """Parse a cell; returns (cell, sign) since edges may be listed in either order."""
    sign = 1
    parts = {}
    for slot in ("Inf", "Zero"):
        if "e" + slot in data:
            e = data["e" + slot]
            edge, s = TreeEdge.oriented(vertex_from_json(e["v1"], field), vertex_from_json(e["v2"], field))
            parts[slot] = edge
            sign *= s
        elif "v" + slot in data:
            parts[slot] = vertex_from_json(data["v" + slot], field)
        else:
            raise ValueError(f"cell is missing its {slot} factor")
    return Cell(parts["Inf"], parts["Zero"]), sign


def chain_to_json(chain: Chain) -> list:
    import json

    rows = [{"cell": cell_to_json(cell, chain.field), "coeff": chain.field.format(c)} for cell, c in chain]
    rows.sort(key=lambda r: json.dumps(r["cell"], sort_keys=True))
    return rows


def chain_from_json(rows, field=QQ) -> Chain:
    if not isinstance(rows, list):
        raise ValueError("chain JSON must be a list of {cell, coeff} objects")
    out = []
    for row in rows:
        cell, sign = cell_from_json(row["cell"], field)
        out.append((cell, field.parse(str(row["coeff"])) * sign))
    return Chain(out, field)
