import pytest

from treecocycles.algebra import LaurentPolynomial, RationalFunction
from treecocycles.fields import GF, QQ
from treecocycles.group import (
    BALL_RADIUS_CAP,
    Matrix2,
    RingSpec,
    Unipotent,
    D_power,
    gamma_ball,
    in_U_n,
    in_upper_window,
    matrix_from_json,
    matrix_to_json,
    p1_witness,
    projective_equal,
    random_laurent,
    sl2,
    split_window,
)
from treecocycles.parse import parse_rational


def U(text, field=QQ):
    return Unipotent(parse_rational(text, field))


def test_in_U_n_examples():
    assert in_U_n(U("t^-1 + t"), 1)
    assert in_U_n(U("1/(t-1)"), 0)
    assert not in_U_n(U("t^2"), 1)
    with pytest.raises(ValueError):
        in_U_n(U("t"), -1)


def test_split_window_examples():
    inner, outer = split_window(U("t^-2 + 1 + t^3"), 2)
    assert inner == U("t^-2 + 1") and outer == U("t^3")
    inner, outer = split_window(U("0"), 5)
    assert inner.is_identity() and outer.is_identity()
    inner, outer = split_window(U("t^-3 + t^3"), 2)
    assert inner.is_identity() and outer == U("t^-3 + t^3")
    with pytest.raises(ValueError):
        split_window(U("1/(t-1)"), 1)


def test_split_window_round_trip(rng):
    for _ in range(500):
        n = rng.randint(0, 4)
        u = Unipotent(random_laurent(rng, QQ, -7, 7, 5).to_rational())
        inner, outer = split_window(u, n)
        assert inner * outer == u
        assert in_U_n(inner, n)
        assert in_upper_window(outer, n)


def test_p1_witness_examples():
    one, zero = LaurentPolynomial({0: 1}), LaurentPolynomial({})
    assert p1_witness(one, zero) == Matrix2.identity()
    w = p1_witness(zero, one)
    assert w == sl2(0, -1, 1, 0)
    g = p1_witness(LaurentPolynomial({1: 1}), LaurentPolynomial({1: 1, 0: -1}))
    assert g.is_sl2() and projective_equal((g.a, g.c), (parse_rational("t"), parse_rational("t-1")))
    with pytest.raises(ValueError):
        p1_witness(zero, zero)


@pytest.mark.parametrize("field", [QQ, GF(5)])
def test_p1_witness_random(rng, field):
    for _ in range(200):
        x = random_laurent(rng, field, -3, 3, 3)
        y = random_laurent(rng, field, -3, 3, 3)
        if not (x or y):
            continue
        g = p1_witness(x, y, field)
        assert g.is_sl2() and g.has_laurent_entries()
        image = g.apply(RationalFunction.one(field), RationalFunction.zero(field))
        assert projective_equal(image, (x.to_rational(), y.to_rational()))


def test_D_power():
    assert D_power(0) == Matrix2.identity()
    assert D_power(1) == Matrix2.of(parse_rational("t"), 0, 0, parse_rational("t^-1"))
    assert D_power(-2) == Matrix2.of(parse_rational("t^-2"), 0, 0, parse_rational("t^2"))
    for k in range(-5, 6):
        assert D_power(k).is_sl2()


def test_gamma_ball():
    ring = RingSpec.integers()
    assert gamma_ball(ring, 0) == [Matrix2.identity()]
    b1, b2 = gamma_ball(ring, 1), gamma_ball(ring, 2)
    assert Matrix2.of(1, parse_rational("t"), 0, 1) in b1 and D_power(1) in b1
    assert len(b2) >= len(b1) and set(b1) <= set(b2)
    assert all(g.is_sl2() and g.has_laurent_entries() for g in b2)
    assert gamma_ball(ring, 2) == b2
    with pytest.raises(ValueError):
        gamma_ball(ring, BALL_RADIUS_CAP + 1)


def test_gamma_ball_over_prime_ring_has_entries_in_Fp():
    ring = RingSpec.prime(3)
    for g in gamma_ball(ring, 2):
        assert g.field == GF(3) and g.is_sl2()


def test_matrix_algebra():
    g = sl2(parse_rational("t"), 1, parse_rational("t^2 - 1"), parse_rational("t"))
    assert g @ g.inverse() == Matrix2.identity()
    with pytest.raises(ValueError):
        Matrix2.of(1, 1, 1, 1)
    with pytest.raises(ValueError):
        sl2(2, 0, 0, 1)


def test_matrix_json_round_trip():
    g = sl2(parse_rational("t"), parse_rational("1/2"), parse_rational("-2"), 0)
    assert matrix_from_json(matrix_to_json(g)) == g


def test_ring_spec():
    assert RingSpec.integers().units_mod_sign() == [1]
    assert len(RingSpec.prime(5).units_mod_sign()) == 2
    with pytest.raises(ValueError):
        RingSpec("Fp")
    with pytest.raises(ValueError):
        RingSpec.prime(3).check_field(QQ)
