"""The local cocycles phi_n, the reduction theta_n, and the summed cocycles Phi_n.

``phi(n, c)`` evaluates phi_n(C^n_{a,b}) = ab on the part of c in the lower
star S_n.  ``big_phi`` sums phi_n over the cosets of U_Gamma in P_Gamma that
can move the chain onto S_n; cosets outside P_Gamma are taken to contribute
nothing (the no-overlap property of the horoball), and cosets differing by
the central element -1 are counted once since -1 acts trivially on X.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dc_field
from typing import Callable

from . import cellcomplex as cx
from .algebra import LaurentPolynomial, Place
from .cellcomplex import (
    Cell,
    Chain,
    HoroballSpec,
    ProductVertex,
    StarDown,
    act_cell,
    act_chain,
    act_point,
    boundary,
    cell_coords,
    make_C,
    restrict_to_horoball,
    square_B,
)
from .fields import QQ
from .group import D_power, Matrix2, RingSpec, Unipotent, diag_unit
from .tree import TreeEdge, TreeVertex, line_vertex



class HoroballWarning(UserWarning):
    """Cells below the horoball threshold were left out of a coset sum."""


def _sort_key(x):
    return x.value if hasattr(x, "value") else x


def phi(n: int, chain: Chain) -> object:
    """phi_n on a 2-chain; cells outside the lower star of x_n contribute 0."""
    field = chain.field
    star = StarDown(n, field)
    total = field.zero
    for cell, c in chain:
        if cell in star:
            a, b = cell_coords(cell, n, field)
            total = total + c * a * b * cx.C_ORIENTATION
    return total


@dataclass(frozen=True)
class BasicCycle:
    """coeff * (C_{x,y} - C_{x',y} - C_{x,y'} + C_{x',y'}) in the lower star of x_n."""

    n: int
    x: object
    y: object
    x2: object
    y2: object
    coeff: object = 1

    def __post_init__(self):
        if self.x == self.x2 and self.y == self.y2:
            raise ValueError("degenerate basic cycle")

    def chain(self, field=QQ) -> Chain:
        n = self.n
        c = (
            make_C(n, self.x, self.y, field)
            - make_C(n, self.x2, self.y, field)
            - make_C(n, self.x, self.y2, field)
            + make_C(n, self.x2, self.y2, field)
        )
        return c * self.coeff


def e_edge(n: int, a, field=QQ) -> Cell:
    """e_a: the T_0-edge at l_inf(n) from x_n down to offset a t^-n (canonically stored upward)."""
    lo = TreeVertex.make(Place.ZERO, -n + 1, {-n: field(a)})
    return Cell(line_vertex(Place.INF, n), TreeEdge(lo, line_vertex(Place.ZERO, n)))


def f_edge(n: int, b, field=QQ) -> Cell:
    lo = TreeVertex.make(Place.INF, -n + 1, {-n: field(b)})
    return Cell(TreeEdge(lo, line_vertex(Place.INF, n)), line_vertex(Place.ZERO, n))


def star_coefficients(chain: Chain, n: int) -> dict:
    """Map (a, b) -> coefficient of C^n_{a,b}; raises if the chain leaves the lower star."""
    field = chain.field
    star = StarDown(n, field)
    alpha = {}
    for cell, c in chain:
        if cell not in star:
            raise ValueError(f"cell {cell} is outside the lower star of x_{n}")
        alpha[cell_coords(cell, n, field)] = c * cx.C_ORIENTATION
    return alpha


def check_relative_cycle(chain: Chain, n: int) -> None:
    """Raise if the boundary has a nonzero coefficient on some e_a or f_b."""
    field = chain.field
    if chain.is_zero():
        return
    top = ProductVertex(line_vertex(Place.INF, n), line_vertex(Place.ZERO, n))
    for face, c in boundary(chain):
        if top not in face.vertices():
            continue
        if isinstance(face.zero, TreeEdge):
            a = face.zero.lo.coeffs.get(-n, field.zero)
            raise ValueError(f"not a relative cycle: boundary has coefficient {c} on e_{a}")
        b = face.inf.lo.coeffs.get(-n, field.zero)
        raise ValueError(f"not a relative cycle: boundary has coefficient {c} on f_{b}")


def decompose_basic(chain: Chain, n: int) -> list[BasicCycle]:
    """Write a relative 2-cycle of the lower star as a sum of basic cycles.

    Over Q this is the length-decreasing greedy step: take the least cell
    with positive coefficient and the least negative partners in its row and
    column, and subtract the largest multiple of that basic cycle that keeps
    signs.  Over F_p there is no positivity, so every cell is paired with the
    pivot row and column of the least support cell.
    """
    check_relative_cycle(chain, n)
    alpha = star_coefficients(chain, n)
    field = chain.field
    out: list[BasicCycle] = []
    if field.characteristic == 0:
        while alpha:
            x, y = min((k for k, v in alpha.items() if v > 0), key=lambda k: (k[0], k[1]))
            x2 = min(k[0] for k, v in alpha.items() if k[1] == y and v < 0)
            y2 = min(k[1] for k, v in alpha.items() if k[0] == x and v < 0)
            c = min(alpha[(x, y)], -alpha[(x2, y)], -alpha[(x, y2)])
            out.append(BasicCycle(n, x, y, x2, y2, c))
            for key, s in (((x, y), -1), ((x2, y), 1), ((x, y2), 1), ((x2, y2), -1)):
                v = alpha.get(key, field.zero) + s * c
                if v:
                    alpha[key] = v
                else:
                    alpha.pop(key, None)
        return out
    if not alpha:
        return out
    x0 = min((k[0] for k in alpha), key=_sort_key)
    y0 = min((k[1] for k in alpha), key=_sort_key)
    for (x, y) in sorted(alpha, key=lambda k: (_sort_key(k[0]), _sort_key(k[1]))):
        if x != x0 and y != y0:
            out.append(BasicCycle(n, x, y, x0, y0, alpha[(x, y)]))
    return out


def in_Y_n(n: int, p: ProductVertex) -> bool:
    """Membership in Stab_U(x_n) . Sigma: both offsets have valuation >= -n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return p.zero.offset_valuation() >= -n and p.inf.offset_valuation() >= -n


def theta_reducer(n: int, p: ProductVertex, field=QQ) -> LaurentPolynomial:
    """Corner entry of the U^n element carrying p to its orbit normal form.

    A term a t^i of U^n (|i| > n) moves the Zero offset when i is below the
    Zero level and the Inf offset when i is above minus the Inf level.  Terms
    moving only one offset clear it; terms moving both clear the Zero offset
    for i < -n and the Inf offset for i > n.  Near the apartment this is the
    tail rule: kill Zero-offset exponents < -n and Inf-offset t-exponents > n.
    """
    m0, m_inf = p.zero.level, p.inf.level
    cz = p.zero.coeffs
    ci = {-k: c for k, c in p.inf.coeffs.items()}
    out = {}
    for i in set(cz) | set(ci):
        if -n <= i <= n:
            continue
        hits_zero = i < m0
        hits_inf = i > -m_inf
        if hits_zero and (i < -n or not hits_inf):
            c = cz.get(i)
        else:
            c = ci.get(i)
        if c:
            out[i] = -c
    return LaurentPolynomial(out, field)


def reduce_theta(n: int, p: ProductVertex, field=QQ):
    """(u, q) with u in U^n and q = u p the normal form of the U^n-orbit of p."""
    if n < 1:
        raise ValueError("n must be >= 1")
    u = Unipotent(theta_reducer(n, p, field).to_rational())
    if u.is_identity():
        return u, p
    return u, act_point(u.matrix, p)


def theta_chain(n: int, chain: Chain) -> Chain:
    """Apply theta_n cellwise; every vertex of a cell must reduce by the same element."""
    field = chain.field
    out = []
    reduced: dict = {}
    for cell, c in chain:
        u, _ = reduce_theta(n, cell.bottom(), field)
        if u.is_identity():
            image, sign = cell, 1
        else:
            image, sign = act_cell(u.matrix, cell)
        for v, w in zip(cell.vertices(), image.vertices()):
            if v not in reduced:
                reduced[v] = reduce_theta(n, v, field)[1]
            if reduced[v] != w:
                raise ValueError(f"cell {cell} has vertices with different theta_{n} reducers")
        out.append((image, c * sign))
    return Chain(out, field)


@dataclass
class CosetWindow:
    ks: list[int]
    units: list
    chain: Chain
    dropped: int = 0

    def representatives(self) -> list[tuple[object, int, Matrix2]]:
        field = self.chain.field
        return [(u, k, diag_unit(u, field) @ D_power(k, field)) for u in self.units for k in self.ks]


def _covers(lo: int, hi: int, a: int, b: int) -> bool:
    return lo <= a and b <= hi


def coset_window_for(n: int, chain: Chain, ring: RingSpec, horoball: HoroballSpec | None = None) -> CosetWindow:
    """Representatives diag(u, 1/u) D^k of U_Gamma-cosets in P_Gamma that can reach S_n.

    D^k shifts Busemann values by +2k at infinity and -2k at zero.  A cell
    lands in S_n only if its shifted ranges are exactly [n-1, n], so only the
    k whose shifted ranges cover [n-1, n] in both factors matter.
    """
    ring.check_field(chain.field)
    dropped = 0
    if horoball is not None:
        kept = restrict_to_horoball(chain, horoball)
        dropped = len(chain) - len(kept)
        if dropped:
            warnings.warn(f"dropped {dropped} cells below horoball threshold {horoball.threshold}", HoroballWarning, stacklevel=2)
        chain = kept
    if chain.is_zero():
        return CosetWindow([], ring.units_mod_sign(), chain, dropped)
    lo_i = min(cell.beta_range(Place.INF)[0] for cell in chain.cells())
    hi_i = max(cell.beta_range(Place.INF)[1] for cell in chain.cells())
    lo_z = min(cell.beta_range(Place.ZERO)[0] for cell in chain.cells())
    hi_z = max(cell.beta_range(Place.ZERO)[1] for cell in chain.cells())
    ks = [
        k
        for k in range((n - 1 - hi_i) // 2 - 1, (n - lo_i) // 2 + 2)
        if _covers(lo_i + 2 * k, hi_i + 2 * k, n - 1, n) and _covers(lo_z - 2 * k, hi_z - 2 * k, n - 1, n)
    ]
    return CosetWindow(ks, ring.units_mod_sign(), chain, dropped)


def _star_candidates(chain: Chain, n: int) -> Chain:
    """Cells with Busemann ranges [n-1, n] in both factors; theta_n preserves both."""
    target = (n - 1, n)
    return chain.restrict(lambda cell: cell.dim == 2 and cell.beta_range(Place.INF) == target and cell.beta_range(Place.ZERO) == target)


def big_phi_terms(
    n: int,
    chain: Chain,
    ring: RingSpec,
    horoball: HoroballSpec | None = None,
    perturb: Callable[[object, int], Unipotent] | None = None,
) -> list[tuple[object, int, object]]:
    """Per-coset contributions (unit, k, phi value).

    ``perturb(u, k)`` optionally returns an element v of U_Gamma; the coset
    representative g is then replaced by v g.
    """
    window = coset_window_for(n, chain, ring, horoball)
    terms = []
    for u, k, g in window.representatives():
        if perturb is not None:
            g = perturb(u, k).matrix @ g
        moved = act_chain(g, window.chain)
        reduced = theta_chain(n, _star_candidates(moved, n))
        terms.append((u, k, phi(n, reduced)))
    return terms


def big_phi(n: int, chain: Chain, ring: RingSpec, horoball: HoroballSpec | None = None, perturb=None):
    total = chain.field.zero
    for _, _, v in big_phi_terms(n, chain, ring, horoball, perturb):
        total = total + v
    return total


def exact_rank(rows: list[list], field) -> int:
    m = [list(r) for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for col in range(cols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = 1 / m[rank][col]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


@dataclass
class PairingReport:
    indices: list[int]
    matrix: list[list]
    triangular: bool
    rank: int
    field: object = dc_field(default=QQ, repr=False)

    def to_json(self) -> dict:
        return {
            "indices": list(self.indices),
            "matrix": [[self.field.format(x) for x in row] for row in self.matrix],
            "triangular": self.triangular,
            "rank": self.rank,
        }

    @classmethod
    def from_json(cls, data: dict, field=QQ) -> "PairingReport":
        return cls(
            list(data["indices"]),
            [[field.parse(str(x)) for x in row] for row in data["matrix"]],
            bool(data["triangular"]),
            int(data["rank"]),
            field,
        )


def pairing_matrix(indices: list[int], ring: RingSpec, horoball: HoroballSpec | None = None) -> PairingReport:
    """M[i][j] = Phi_{indices[i]}(B_{indices[j]}); passes when unit-diagonal and zero below."""
    if any(k % 2 or k < 2 for k in indices) or list(indices) != sorted(set(indices)):
        raise ValueError("indices must be even, >= 2 and strictly increasing")
    field = ring.field
    chains = {k: square_B(k // 2, field) for k in indices}
    matrix = [[big_phi(ki, chains[kj], ring, horoball) for kj in indices] for ki in indices]
    triangular = all(
        (matrix[i][j] == field.one) if i == j else (not matrix[i][j] if indices[i] > indices[j] else True)
        for i in range(len(indices))
        for j in range(len(indices))
    )
    return PairingReport(list(indices), matrix, triangular, exact_rank(matrix, field), field)
