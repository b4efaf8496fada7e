"""2x2 matrices over F(t) and the subgroups used by the cocycle construction.

``U`` is the upper unitriangular group, ``A`` the diagonal group and
``D = diag(t, 1/t)``.  ``U_n`` is cut out by valuation bounds on the corner
entry (any x in F(t)); ``U^n`` consists of Laurent-polynomial corners with no
terms in degrees [-n, n].
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import (
    LaurentPolynomial,
    Place,
    Polynomial,
    RationalFunction,
    as_rational,
    valuation,
    xgcd_poly,
)
from .fields import GF, QQ

BALL_RADIUS_CAP = 4


@dataclass(frozen=True)
class Matrix2:
    a: RationalFunction
    b: RationalFunction
    c: RationalFunction
    d: RationalFunction

    @classmethod
    def of(cls, a, b, c, d, field=QQ) -> "Matrix2":
        m = cls(*(as_rational(x, field) for x in (a, b, c, d)))
        if m.det().is_zero():
            raise ValueError("singular matrix")
        return m

    @classmethod
    def identity(cls, field=QQ) -> "Matrix2":
        one, zero = RationalFunction.one(field), RationalFunction.zero(field)
        return cls(one, zero, zero, one)

    @property
    def field(self):
        return self.a.field

    def det(self) -> RationalFunction:
        return self.a * self.d - self.b * self.c

    def is_sl2(self) -> bool:
        return self.det() == RationalFunction.one(self.field)

    def __matmul__(self, other: "Matrix2") -> "Matrix2":
        return Matrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    __mul__ = __matmul__

    def inverse(self) -> "Matrix2":
        det = self.det()
        if det.is_zero():
            raise ValueError("singular matrix")
        inv = det.inverse()
        return Matrix2(self.d * inv, -self.b * inv, -self.c * inv, self.a * inv)

    def apply(self, x, y):
        """Action on a column vector (x, y)."""
        return self.a * x + self.b * y, self.c * x + self.d * y

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def is_upper_triangular(self) -> bool:
        return self.c.is_zero()

    def has_laurent_entries(self) -> bool:
        return all(e.is_laurent() for e in self.entries())

    def __str__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


def sl2(a, b, c, d, field=QQ) -> Matrix2:
    """Construct an SL_2 element, checking det = 1."""
    m = Matrix2(*(as_rational(x, field) for x in (a, b, c, d)))
    if not m.is_sl2():
        raise ValueError(f"determinant {m.det()} != 1")
    return m


@dataclass(frozen=True)
class Unipotent:
    """The matrix [[1, x], [0, 1]]."""

    x: RationalFunction

    @classmethod
    def of(cls, x, field=QQ) -> "Unipotent":
        return cls(as_rational(x, field))

    @property
    def field(self):
        return self.x.field

    @property
    def matrix(self) -> Matrix2:
        f = self.field
        return Matrix2(RationalFunction.one(f), self.x, RationalFunction.zero(f), RationalFunction.one(f))

    def __mul__(self, other: "Unipotent") -> "Unipotent":
        return Unipotent(self.x + other.x)

    def inverse(self) -> "Unipotent":
        return Unipotent(-self.x)

    def is_identity(self) -> bool:
        return self.x.is_zero()


@dataclass(frozen=True)
class RingSpec:
    """The coefficient ring J: the integers or a prime field."""

    kind: str = "Z"
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("Z", "Fp"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Fp" and self.p is None:
            raise ValueError("prime ring needs p")
        if self.kind == "Z" and self.p is not None:
            raise ValueError("Z takes no prime")

    @classmethod
    def integers(cls) -> "RingSpec":
        return cls("Z")

    @classmethod
    def prime(cls, p: int) -> "RingSpec":
        return cls("Fp", p)

    @property
    def field(self):
        """Field of fractions of J."""
        return QQ if self.kind == "Z" else GF(self.p)

    def units(self) -> list:
        f = self.field
        if self.kind == "Z":
            return [f(1), f(-1)]
        return [f(i) for i in range(1, self.p)]

    def units_mod_sign(self) -> list:
        """Unit representatives modulo +-1; diag(u, 1/u) and diag(-u, -1/u) act identically."""
        seen, out = set(), []
        for u in self.units():
            if u in seen:
                continue
            seen.update((u, -u))
            out.append(u)
        return out

    def check_field(self, field) -> None:
        if field != self.field:
            raise ValueError(f"ring {self} is inconsistent with field {field!r}")

    def __str__(self):
        return "Z" if self.kind == "Z" else f"F{self.p}"


def in_U_n(u: Unipotent, n: int) -> bool:
    """Both valuations of the corner entry are >= -n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return valuation(u.x, Place.INF) >= -n and valuation(u.x, Place.ZERO) >= -n


def in_upper_window(u: Unipotent, n: int) -> bool:
    """Membership in U^n: Laurent corner with no terms in degrees [-n, n]."""
    if not u.x.is_laurent():
        return False
    return all(abs(k) > n for k in u.x.to_laurent().support())


def split_window(u: Unipotent, n: int):
    """Write u = inner * outer with inner in U_n and outer in U^n."""
    if not u.x.is_laurent():
        raise ValueError(f"corner entry {u.x} is not a Laurent polynomial")
    x = u.x.to_laurent()
    inner = x.restrict(lambda k: -n <= k <= n)
    outer = x.restrict(lambda k: k < -n or k > n)
    return Unipotent(inner.to_rational()), Unipotent(outer.to_rational())


def p1_witness(x, y, field=None) -> Matrix2:
    """An element of SL_2(F[t]) whose first column is proportional to (x, y).

    x and y are Laurent polynomials (or rational functions with monomial
    denominators); the witness maps [1 : 0] to [x : y].
    """
    field = field or getattr(x, "field", QQ)
    x, y = as_rational(x, field), as_rational(y, field)
    if x.is_zero() and y.is_zero():
        raise ValueError("[0 : 0] is not a projective point")
    if not (x.is_laurent() and y.is_laurent()):
        raise ValueError("coordinates must lie in F[t, 1/t]")
    # clear the monomial denominators, then strip the common factor
    k = max(x.den.degree, y.den.degree)
    px = (x * RationalFunction.t_power(k, field)).num
    py = (y * RationalFunction.t_power(k, field)).num
    g, _, _ = xgcd_poly(px, py)
    px, py = px // g, py // g
    _, u, v = xgcd_poly(px, py)
    # u*px + v*py = 1, so [[px, -v], [py, u]] has determinant 1
    return sl2(RationalFunction(px), -RationalFunction(v), RationalFunction(py), RationalFunction(u), field)


def projective_equal(p: Sequence, q: Sequence) -> bool:
    return p[0] * q[1] == p[1] * q[0] and not (p[0].is_zero() and p[1].is_zero())


def D_power(k: int, field=QQ) -> Matrix2:
    zero = RationalFunction.zero(field)
    return Matrix2(RationalFunction.t_power(k, field), zero, zero, RationalFunction.t_power(-k, field))


def diag_unit(u, field=QQ) -> Matrix2:
    zero = RationalFunction.zero(field)
    u = field(u)
    return Matrix2(as_rational(u, field), zero, zero, as_rational(1 / u, field))


def elementary(upper: bool, entry, field=QQ) -> Matrix2:
    one, zero = RationalFunction.one(field), RationalFunction.zero(field)
    e = as_rational(entry, field)
    return Matrix2(one, e, zero, one) if upper else Matrix2(one, zero, e, one)


def generators(ring: RingSpec) -> list[tuple[str, Matrix2]]:
    """Fixed generating set: elementary matrices with entries +-1, +-t, +-1/t, and D^(+-1)."""
    field = ring.field
    gens = []
    for label, k in (("1", 0), ("t", 1), ("t^-1", -1)):
        mono = LaurentPolynomial({k: 1}, field)
        for sign, s in (("+", 1), ("-", -1)):
            gens.append((f"E12({sign}{label})", elementary(True, mono * s, field)))
            gens.append((f"E21({sign}{label})", elementary(False, mono * s, field)))
    gens.append(("D", D_power(1, field)))
    gens.append(("D^-1", D_power(-1, field)))
    return gens


def gamma_ball(ring: RingSpec, radius: int, cap: int = BALL_RADIUS_CAP, with_words: bool = False):
    """All distinct products of at most ``radius`` generators, in breadth-first order."""
    if radius > cap:
        raise ValueError(f"radius {radius} exceeds cap {cap}")
    if radius < 0:
        raise ValueError("radius must be >= 0")
    gens = generators(ring)
    ident = Matrix2.identity(ring.field)
    seen = {ident: ""}
    order = [ident]
    frontier = [ident]
    for _ in range(radius):
        nxt = []
        for g in frontier:
            word = seen[g]
            for label, h in gens:
                gh = g @ h
                if gh not in seen:
                    seen[gh] = f"{word}*{label}" if word else label
                    order.append(gh)
                    nxt.append(gh)
        frontier = nxt
    if with_words:
        return [(seen[g] or "I", g) for g in order]
    return order


def random_laurent(rng, field, lo: int, hi: int, terms: int = 3, height: int = 5) -> LaurentPolynomial:
    """A random Laurent polynomial with up to ``terms`` terms in degrees [lo, hi]."""
    out = {}
    for _ in range(rng.randint(0, terms)):
        out[rng.randint(lo, hi)] = field.random(rng, height)
    return LaurentPolynomial(out, field)


def random_rational(rng, field, max_degree: int = 3) -> RationalFunction:
    """A random element of F(t) with small numerator and denominator."""
    def poly(nonzero):
        while True:
            p = Polynomial([field.random(rng) for _ in range(rng.randint(1, max_degree + 1))], field)
            if p or not nonzero:
                return p
    return RationalFunction(poly(False), poly(True)) * RationalFunction.t_power(rng.randint(-2, 2), field)


def matrix_to_json(m: Matrix2) -> list[list[str]]:
    return [[str(m.a), str(m.b)], [str(m.c), str(m.d)]]


def matrix_from_json(data, field=QQ) -> Matrix2:
    from .parse import parse_rational

    (a, b), (c, d) = data
    return Matrix2.of(*(parse_rational(str(s), field) for s in (a, b, c, d)), field=field)
