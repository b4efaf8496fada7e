import pytest

from treecocycles.algebra import LaurentPolynomial, Place
from treecocycles.cellcomplex import (
    Cell,
    Chain,
    HoroballSpec,
    ProductVertex,
    act_chain,
    act_point,
    apartment_point,
    apartment_square,
    beta_rho,
    corrupt_orientation,
    make_C,
    square_B,
    triangle_Z,
)
from treecocycles.cocycle import (
    BasicCycle,
    HoroballWarning,
    big_phi,
    big_phi_terms,
    coset_window_for,
    decompose_basic,
    in_Y_n,
    pairing_matrix,
    phi,
    reduce_theta,
    theta_chain,
    theta_reducer,
)
from treecocycles.fields import GF, QQ
from treecocycles.group import RingSpec, Unipotent
from treecocycles.tree import TreeEdge, TreeVertex, line_vertex
from treecocycles.verify import random_basic_cycle, random_point, random_unipotent

Z = RingSpec.integers()
H1 = HoroballSpec(1)


def pattern(n, field=QQ):
    return make_C(n, 0, 0, field) - make_C(n, 1, 0, field) - make_C(n, 0, 1, field) + make_C(n, 1, 1, field)


def total(cycles, field=QQ):
    out = Chain([], field)
    for bc in cycles:
        out = out + bc.chain(field)
    return out


def test_phi_examples():
    assert phi(3, make_C(3, 2, 3)) == 6
    assert phi(3, Chain.single(apartment_square(0, 0))) == 0
    assert phi(2, pattern(2)) == 1
    assert phi(1, Chain([], QQ)) == 0


def test_phi_tracks_the_orientation_constant():
    with corrupt_orientation():
        assert phi(3, make_C(3, 2, 3)) == 6
        assert phi(3, make_C(3, 2, 3) * -1) == -6


def test_decompose_examples():
    bc = BasicCycle(2, 1, 2, 0, 5, 3)
    (only,) = decompose_basic(bc.chain(), 2)
    assert only.chain() == bc.chain()
    assert decompose_basic(pattern(2), 2) == [BasicCycle(2, 0, 0, 1, 1, 1)]
    two = BasicCycle(3, 1, 2, 0, 5, 3).chain() + BasicCycle(3, -1, 7, 4, 9, -2).chain()
    parts = decompose_basic(two, 3)
    assert len(parts) == 2 and total(parts) == two


def test_decompose_rejects_non_cycles():
    with pytest.raises(ValueError, match=r"e_|f_"):
        decompose_basic(make_C(2, 1, 1), 2)
    with pytest.raises(ValueError, match="outside the lower star"):
        decompose_basic(Chain.single(apartment_square(0, 0)), 3)


@pytest.mark.parametrize("field", [QQ, GF(5), GF(2)])
def test_decompose_round_trip(rng, field):
    for _ in range(40):
        n = rng.randint(1, 3)
        c = total([random_basic_cycle(rng, field, n) for _ in range(rng.randint(1, 4))], field)
        parts = decompose_basic(c, n)
        assert total(parts, field) == c


def test_greedy_length_decreases(rng):
    for _ in range(20):
        c = total([random_basic_cycle(rng, QQ, 2) for _ in range(3)])
        length = sum(abs(x) for _, x in c)
        for bc in decompose_basic(c, 2):
            c = c - bc.chain()
            new = sum(abs(x) for _, x in c)
            assert new < length
            length = new
        assert c.is_zero()


@pytest.mark.parametrize("field", [QQ, GF(3)])
def test_phi_is_U_n_invariant_on_basic_cycles(rng, field):
    for _ in range(100):
        n = rng.randint(1, 3)
        chain = random_basic_cycle(rng, field, n).chain(field)
        u = random_unipotent(rng, field, -n, n, 4)
        assert phi(n, act_chain(u, chain)) == phi(n, chain)


def test_phi_is_not_invariant_on_single_cells():
    # invariance is a statement about relative cycles only
    assert phi(2, act_chain(Unipotent(LaurentPolynomial({-2: 1}).to_rational()), make_C(2, 0, 1))) != phi(2, make_C(2, 0, 1))


def test_in_Y_n_examples():
    n = 2
    assert in_Y_n(n, apartment_point(3, -1))
    p = ProductVertex(line_vertex(Place.INF, 0), TreeVertex.make(Place.ZERO, 5, {-n - 1: 1}))
    assert not in_Y_n(n, p)
    with pytest.raises(ValueError):
        in_Y_n(0, p)


def test_reduce_theta_examples():
    n = 2
    p = apartment_point(4, -3)
    u, q = reduce_theta(n, p)
    assert u.is_identity() and q == p
    p = ProductVertex(line_vertex(Place.INF, 0), TreeVertex.make(Place.ZERO, 5, {-n - 1: 1, 1: 4}))
    u, q = reduce_theta(n, p)
    assert u.x == LaurentPolynomial({-n - 1: -1}).to_rational()
    assert in_Y_n(n, q) and q == act_point(u.matrix, p)


@pytest.mark.parametrize("field", [QQ, GF(2)])
def test_reduce_theta_properties(rng, field):
    for _ in range(100):
        n = rng.randint(1, 3)
        p = random_point(rng, field, (-n - 4, n + 4))
        u, q = reduce_theta(n, p, field)
        assert in_Y_n(n, q)
        assert reduce_theta(n, q, field)[0].is_identity()
        w = random_unipotent(rng, field, -n - 5, n + 5, 4, skip=lambda k: abs(k) <= n)
        assert reduce_theta(n, act_point(w.matrix, p), field)[1] == q
        assert beta_rho(q) == beta_rho(p)


def test_normal_form_far_from_the_apartment():
    # t^3 lies in U^1 and moves this point of Sigma to another point with small offsets
    n = 1
    p = apartment_point(3, -5)
    w = Unipotent(LaurentPolynomial({3: 1}).to_rational())
    moved = act_point(w.matrix, p)
    assert moved != p and in_Y_n(n, moved) and in_Y_n(n, p)
    assert reduce_theta(n, moved)[1] == reduce_theta(n, p)[1] == p
    assert theta_reducer(n, moved) == LaurentPolynomial({3: -1})


def test_theta_chain():
    n = 2
    sigma = triangle_Z(1)
    assert theta_chain(n, sigma) == sigma
    w = Unipotent(LaurentPolynomial({-3: 2, 4: 1}).to_rational())
    c = make_C(n, 1, 1) + Chain.single(apartment_square(0, 1))
    assert theta_chain(n, act_chain(w, c)) == theta_chain(n, c)
    assert {beta_rho(p) for p in theta_chain(n, act_chain(w, c)).vertices()} == {beta_rho(p) for p in c.vertices()}


def test_theta_chain_rejects_non_cellular_input():
    n = 1
    lo = TreeVertex.make(Place.ZERO, -1, {-2: 1})
    cell = Cell(TreeVertex(Place.INF, 3), TreeEdge(lo, TreeVertex(Place.ZERO, -2)))
    with pytest.raises(ValueError, match="different theta"):
        theta_chain(n, Chain.single(cell))


def test_coset_window_examples():
    n = 3
    assert 0 in coset_window_for(n, make_C(n, 0, 0), Z).ks
    for i in range(-2, 6):
        ks = coset_window_for(n, Chain.single(apartment_square(i, i)), Z).ks
        assert ks == [k for k in range(-5, 6) if i + 2 * k == n - 1 and i - 2 * k == n - 1]
    sizes = [len(coset_window_for(1, triangle_Z(m), Z).ks) for m in (1, 2, 3, 4)]
    assert sizes == [1, 3, 5, 7]
    assert coset_window_for(n, make_C(n, 0, 0, GF(5)), RingSpec.prime(5)).units == [GF(5)(1), GF(5)(2)]


def test_coset_window_warns_on_dropped_cells():
    with pytest.warns(HoroballWarning):
        coset_window_for(2, square_B(1), Z, H1)


def test_big_phi_values():
    assert big_phi(3, Chain([], QQ), Z, H1) == 0
    for n in (1, 2, 3):
        B = square_B(n)
        assert big_phi(2 * n, B, Z, H1) == 1
        for k in range(2 * n + 1, 2 * n + 4):
            assert big_phi(k, B, Z, H1) == 0


def test_big_phi_is_independent_of_representatives(rng):
    for _ in range(20):
        n = rng.randint(1, 2)
        k = rng.choice([2 * n, 2 * n + 1, 2 * n + 2])
        B = square_B(n)
        v = random_unipotent(rng, QQ, -3 * k, 3 * k, 5)
        assert big_phi_terms(k, B, Z, H1, perturb=lambda u, j: v) == big_phi_terms(k, B, Z, H1)


def test_prime_rings_sum_fourth_powers_of_units():
    # diag(u, 1/u) scales both star coordinates by u^2, so the diagonal entry is sum of u^4
    for p, expected in ((2, 1), (3, 1), (5, 2), (7, 0)):
        ring = RingSpec.prime(p)
        assert big_phi(2, square_B(1, ring.field), ring, H1) == ring.field(expected)


def test_pairing_examples():
    r = pairing_matrix([2, 4], Z, H1)
    assert r.matrix[0][0] == r.matrix[1][1] == 1 and r.matrix[1][0] == 0
    assert r.triangular and r.rank == 2
    assert pairing_matrix([2], Z, H1).matrix == [[1]]
    assert r.to_json()["matrix"] == [["1", "0"], ["0", "1"]]
    with pytest.raises(ValueError):
        pairing_matrix([4, 2], Z, H1)
    with pytest.raises(ValueError):
        pairing_matrix([3], Z, H1)


def test_pairing_detects_corrupted_orientation():
    with corrupt_orientation():
        assert not pairing_matrix([2, 4], Z, H1).triangular
    assert pairing_matrix([2, 4], Z, H1).triangular
