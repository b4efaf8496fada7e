import pytest

from treecocycles.algebra import LaurentPolynomial, Place
from treecocycles.cellcomplex import (
    Cell,
    Chain,
    HoroballSpec,
    StarDown,
    act_chain,
    act_point,
    apartment_square,
    base_cell,
    beta_rho,
    boundary,
    cell_coords,
    chain_from_json,
    chain_to_json,
    in_horoball,
    make_C,
    make_C_cell,
    square_B,
    triangle_Z,
    unipotent_ab,
    x_point,
)
from treecocycles.cocycle import e_edge, f_edge
from treecocycles.fields import GF, QQ
from treecocycles.group import D_power, RingSpec, Unipotent
from treecocycles.tree import TreeEdge, line_edge, line_vertex, vertex_to_json
from treecocycles.verify import random_gamma, random_point, random_two_chain


def test_beta_rho_examples(rng):
    assert beta_rho(x_point(0)) == 0
    for n in range(11):
        assert beta_rho(x_point(n)) == 2 * n
    for _ in range(50):
        p = random_point(rng, QQ)
        assert beta_rho(act_point(D_power(1), p)) == beta_rho(p)


def test_horoball_membership():
    assert not in_horoball(x_point(0), HoroballSpec(1))
    assert in_horoball(x_point(3), HoroballSpec(6))
    assert not in_horoball(x_point(3), HoroballSpec(7))


def test_square_boundary_is_a_loop():
    sq = Chain.single(apartment_square(0, 0))
    b = boundary(sq)
    assert len(b) == 4
    assert boundary(b).is_zero()
    assert boundary(Chain([], QQ)).is_zero()
    with pytest.raises(ValueError):
        boundary(Chain([(Cell(line_vertex(Place.INF, 0), line_vertex(Place.ZERO, 0)), 1)], QQ))


@pytest.mark.parametrize("field", [QQ, GF(5)])
def test_boundary_squared_vanishes(rng, field):
    for _ in range(30):
        c = random_two_chain(rng, field)
        assert boundary(boundary(c)).is_zero()


def test_boundary_at_the_star_vertex():
    # e_a and f_b oriented away from x_n are minus / plus the stored edges
    for field in (QQ, GF(3)):
        for n in (1, 2, 3):
            for a, b in ((0, 0), (1, 2), (2, 1)):
                bd = boundary(make_C(n, a, b, field))
                assert bd.coeff(e_edge(n, a, field)) == -field.one
                assert bd.coeff(f_edge(n, b, field)) == field.one


def test_star_down():
    n = 2
    star = StarDown(n, GF(3))
    assert base_cell(n) in star
    assert len(list(star)) == 9 == len(star)
    assert apartment_square(n, n) not in star
    with pytest.raises(ValueError, match="enumeration requires a finite field"):
        list(StarDown(n, QQ))
    assert base_cell(n) in StarDown(n, QQ)


def test_make_C_examples():
    n = 3
    cell = make_C_cell(n, 0, 0)
    assert cell == apartment_square(n - 1, n - 1)
    assert x_point(n - 1) in cell.vertices()
    assert cell_coords(cell, n) == (0, 0)
    assert cell_coords(make_C_cell(n, 2, 3), n) == (2, 3)
    with pytest.raises(ValueError):
        cell_coords(apartment_square(n, n), n)


def test_make_C_translation_law():
    for n in (1, 2):
        for (a, b), (a2, b2) in (((1, 2), (3, -1)), ((0, 0), (5, 7))):
            moved = act_chain(unipotent_ab(n, a2, b2), make_C(n, a, b))
            assert moved == make_C(n, a + a2, b + b2)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_make_C_is_a_bijection_onto_the_star(p):
    field = GF(p)
    for n in (1, 2, 3):
        cells = set(StarDown(n, field))
        images = {make_C_cell(n, a, b, field) for a in field.elements() for b in field.elements()}
        assert images == cells and len(cells) == p * p


def triangle_count(n):
    return sum(1 for i in range(-2 * n, 2 * n) for j in range(-2 * n, 2 * n) if i + j >= 0)


def test_triangle_Z():
    for n in (1, 2, 3):
        z = triangle_Z(n)
        assert len(z) == triangle_count(n) == 2 * n * (4 * n - 1)
        assert z.coeff(base_cell(2 * n)) == 1
        for e in boundary(z).cells():
            on_leg = any(f == line_vertex(f.place, 2 * n) for f in (e.inf, e.zero) if not isinstance(f, TreeEdge))
            on_stairs = min(beta_rho(p) for p in e.vertices()) == 0
            assert on_leg or on_stairs


def test_square_B_meets_the_star_in_the_four_cell_pattern():
    for n in (1, 2, 3):
        B = square_B(n)
        star = StarDown(2 * n)
        part = B.restrict(lambda c: c in star)
        expected = make_C(2 * n, 0, 0) - make_C(2 * n, 1, 0) - make_C(2 * n, 0, 1) + make_C(2 * n, 1, 1)
        assert part == expected
        for k in range(2 * n + 1, 2 * n + 4):
            assert B.restrict(lambda c: c in StarDown(k)).is_zero()


def test_square_B_boundary_stays_on_the_hypotenuse():
    for n in (1, 2):
        for cell in boundary(square_B(n)).cells():
            assert min(beta_rho(p) for p in cell.vertices()) == 0


def test_translators_fix_the_corner():
    for n in (1, 2, 3):
        x = LaurentPolynomial({2 * n: 1}), LaurentPolynomial({-2 * n: 1})
        for u in (x[0], x[1], x[0] + x[1]):
            assert act_point(Unipotent(u.to_rational()).matrix, x_point(2 * n)) == x_point(2 * n)


def test_literal_corner_misses_the_star():
    # with the corner at x_n the pieces never reach the lower star of x_2n
    B = square_B(1, literal=True)
    assert B.restrict(lambda c: c in StarDown(2)).is_zero()


def test_act_chain_commutes_with_boundary(rng):
    ring = RingSpec.integers()
    for _ in range(20):
        c = random_two_chain(rng, QQ, 3)
        g = random_gamma(rng, ring, 4)
        assert act_chain(g, boundary(c)) == boundary(act_chain(g, c))
    assert act_chain(D_power(0), c) == c


def test_chain_json_round_trip(rng):
    for field in (QQ, GF(3)):
        c = random_two_chain(rng, field, 4) + square_B(1, field)
        assert chain_from_json(chain_to_json(c), field) == c
    e = line_edge(Place.ZERO, 0)
    flipped = [{"cell": {"vInf": {"place": "inf", "level": 0, "offset": []}, "eZero": {"v1": _vj(e.hi), "v2": _vj(e.lo)}}, "coeff": "3"}]
    c = chain_from_json(flipped)
    assert list(c) and list(c)[0][1] == -3


def _vj(v):
    return vertex_to_json(v)
