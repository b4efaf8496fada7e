"""Exact arithmetic in F[t], F(t) and F[t, 1/t] with the valuations at 0 and infinity.

All values are immutable.  The degree of the zero polynomial is ``None`` and
valuations of zero are ``math.inf``; no code path does arithmetic on either.
"""

from __future__ import annotations

import enum
import math
from typing import Iterable, Mapping

from .fields import QQ

INF = math.inf


class Place(enum.Enum):
    """The two places of F(t) that matter here.  The uniformizer is t at ZERO, 1/t at INF."""

    ZERO = "zero"
    INF = "inf"

    @classmethod
    def parse(cls, text: str) -> "Place":
        key = text.strip().lower()
        if key in ("zero", "0"):
            return cls.ZERO
        if key in ("inf", "infinity", "oo"):
            return cls.INF
        raise ValueError(f"unknown place {text!r}")

    @property
    def sign(self) -> int:
        # t-exponent of the uniformizer
        return 1 if self is Place.ZERO else -1


def _trim(coeffs: list) -> tuple:
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


class Polynomial:
    """Polynomial in t; ``coeffs[i]`` is the coefficient of t^i."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, coeffs: Iterable, field=QQ):
        self.field = field
        self.coeffs = _trim([field(c) for c in coeffs])
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: tuple, field) -> "Polynomial":
        obj = cls.__new__(cls)
        obj.field = field
        obj.coeffs = coeffs
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, k: int, field=QQ, c=1) -> "Polynomial":
        return cls([0] * k + [c], field)

    @classmethod
    def constant(cls, c, field=QQ) -> "Polynomial":
        return cls([c], field)

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def low_order(self):
        """Exponent of the lowest nonzero term (the valuation at 0), ``INF`` for zero."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return INF

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial([other], self.field)

    def __add__(self, other):
        other = self._lift(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Polynomial._raw(_trim(out), self.field)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(tuple(-c for c in self.coeffs), self.field)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = self.field(other)
            if not c:
                return Polynomial._raw((), self.field)
            return Polynomial._raw(tuple(x * c for x in self.coeffs), self.field)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Polynomial._raw((), self.field)
        out = [self.field.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return Polynomial._raw(_trim(out), self.field)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = Polynomial([1], self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> "Polynomial":
        """Multiply by t^k (k >= 0) or drop the k lowest terms (k < 0)."""
        if not self.coeffs:
            return self
        if k >= 0:
            return Polynomial._raw((self.field.zero,) * k + self.coeffs, self.field)
        return Polynomial._raw(_trim(list(self.coeffs[-k:])), self.field)

    def divmod(self, other: "Polynomial"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = other.degree
        inv = 1 / other.lead
        quot = [self.field.zero] * max(len(rem) - db, 0)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if not c:
                continue
            q = c * inv
            quot[i - db] = q
            for j, y in enumerate(other.coeffs):
                rem[i - db + j] = rem[i - db + j] - q * y
        return Polynomial._raw(_trim(quot), self.field), Polynomial._raw(_trim(rem), self.field)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "Polynomial":
        if not self.coeffs:
            return self
        return self * (1 / self.lead)

    def reverse(self) -> "Polynomial":
        """t^deg * p(1/t)."""
        return Polynomial._raw(_trim(list(reversed(self.coeffs))), self.field)

    def __call__(self, x):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self == Polynomial([other], self.field)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("P", self.coeffs))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return _format_terms([(i, c) for i, c in enumerate(self.coeffs) if c], self.field)


def _format_terms(terms, field) -> str:
    """Render (exponent, coeff) pairs, highest exponent first, in the parser's grammar."""
    if not terms:
        return "0"
    parts = []
    for k, c in sorted(terms, key=lambda kc: -kc[0]):
        neg = field.characteristic == 0 and c < 0
        mag = -c if neg else c
        cs = field.format(mag)
        if k == 0:
            body = cs
        else:
            mono = "t" if k == 1 else f"t^{k}"
            body = mono if mag == field.one else f"{cs}*{mono}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    while b:
        a, b = b, a % b
    return a.monic()


def xgcd_poly(a: Polynomial, b: Polynomial):
    """Extended Euclid in F[t]: returns (g, u, v) with g = u*a + v*b and g monic."""
    if a.is_zero() and b.is_zero():
        raise ValueError("xgcd of two zero polynomials")
    field = a.field
    one = Polynomial([1], field)
    zero = Polynomial([], field)
    r0, r1 = a, b
    s0, s1 = one, zero
    t0, t1 = zero, one
    while r1:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    inv = 1 / r0.lead
    return r0 * inv, s0 * inv, t0 * inv


class RationalFunction:
    """Reduced fraction num/den with monic denominator.  Zero is 0/1."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None, field=None):
        if not isinstance(num, Polynomial):
            field = field or QQ
            num = Polynomial([num], field)
        field = num.field
        if den is None:
            den = Polynomial([1], field)
        elif not isinstance(den, Polynomial):
            den = Polynomial([den], field)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = num, Polynomial([1], field)
        else:
            g = poly_gcd(num, den)
            if g.degree:
                num, den = num // g, den // g
            lc = den.lead
            if lc != field.one:
                inv = 1 / lc
                num, den = num * inv, den * inv
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, num: Polynomial, den: Polynomial) -> "RationalFunction":
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @property
    def field(self):
        return self.num.field

    @classmethod
    def t(cls, field=QQ) -> "RationalFunction":
        return cls(Polynomial([0, 1], field))

    @classmethod
    def t_power(cls, k: int, field=QQ) -> "RationalFunction":
        mono = Polynomial.monomial(abs(k), field)
        one = Polynomial([1], field)
        return cls._raw(mono, one) if k >= 0 else cls._raw(one, mono)

    @classmethod
    def zero(cls, field=QQ) -> "RationalFunction":
        return cls._raw(Polynomial([], field), Polynomial([1], field))

    @classmethod
    def one(cls, field=QQ) -> "RationalFunction":
        return cls._raw(Polynomial([1], field), Polynomial([1], field))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def _lift(self, other) -> "RationalFunction":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction._raw(other, Polynomial([1], self.field))
        if isinstance(other, LaurentPolynomial):
            return other.to_rational()
        return RationalFunction._raw(Polynomial([other], self.field), Polynomial([1], self.field))

    def __add__(self, other):
        other = self._lift(other)
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero rational function")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction._raw(self.num**k, self.den**k)

    def __eq__(self, other):
        if isinstance(other, (int, Polynomial, LaurentPolynomial)):
            other = self._lift(other)
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num.coeffs, self.den.coeffs))
        return self._hash

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        if self.den.degree == 0:
            return str(self.num)
        num = str(self.num)
        if len(self.num.coeffs) - sum(1 for c in self.num.coeffs if not c) > 1:
            num = f"({num})"
        return f"{num}/({self.den})"

    def to_laurent(self) -> "LaurentPolynomial":
        """Exact conversion when the denominator is a power of t."""
        if not self.is_laurent():
            raise ValueError(f"{self} is not a Laurent polynomial")
        k = self.den.degree
        return LaurentPolynomial({i - k: c for i, c in enumerate(self.num.coeffs) if c}, self.field)

    def is_laurent(self) -> bool:
        # monic denominator, so this means den == t^k
        return self.den.low_order() == self.den.degree


class LaurentPolynomial:
    """Finite sum of c_k t^k with k in Z; no zero coefficients stored."""

    __slots__ = ("field", "terms", "_hash")

    def __init__(self, terms: Mapping | None = None, field=QQ):
        self.field = field
        items = {}
        for k, c in (terms or {}).items():
            c = field(c)
            if c:
                items[int(k)] = c
        self.terms = dict(sorted(items.items()))
        self._hash = None

    @classmethod
    def monomial(cls, k: int, c=1, field=QQ) -> "LaurentPolynomial":
        return cls({k: c}, field)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, k: int):
        return self.terms.get(k, self.field.zero)

    def support(self) -> list[int]:
        return list(self.terms)

    def valuation(self, at: Place):
        if not self.terms:
            return INF
        return min(self.terms) if at is Place.ZERO else -max(self.terms)

    def restrict(self, pred) -> "LaurentPolynomial":
        return LaurentPolynomial({k: c for k, c in self.terms.items() if pred(k)}, self.field)

    def __add__(self, other):
        if not isinstance(other, LaurentPolynomial):
            other = LaurentPolynomial({0: other}, self.field)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, self.field.zero) + c
        return LaurentPolynomial(out, self.field)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial({k: -c for k, c in self.terms.items()}, self.field)

    def __sub__(self, other):
        if not isinstance(other, LaurentPolynomial):
            other = LaurentPolynomial({0: other}, self.field)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentPolynomial):
            c = self.field(other)
            return LaurentPolynomial({k: v * c for k, v in self.terms.items()}, self.field)
        out: dict = {}
        for i, a in self.terms.items():
            for j, b in other.terms.items():
                out[i + j] = out.get(i + j, self.field.zero) + a * b
        return LaurentPolynomial(out, self.field)

    __rmul__ = __mul__

    def to_rational(self) -> RationalFunction:
        if not self.terms:
            return RationalFunction.zero(self.field)
        lo = min(min(self.terms), 0)
        hi = max(self.terms)
        coeffs = [self.field.zero] * (hi - lo + 1)
        for k, c in self.terms.items():
            coeffs[k - lo] = c
        num = Polynomial._raw(_trim(coeffs), self.field)
        den = Polynomial.monomial(-lo, self.field)
        return RationalFunction(num, den)

    def __eq__(self, other):
        if isinstance(other, LaurentPolynomial):
            return self.terms == other.terms
        if isinstance(other, int):
            return self == LaurentPolynomial({0: other}, self.field)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self.terms.items()))
        return self._hash

    def __repr__(self):
        return f"LaurentPolynomial({self})"

    def __str__(self):
        return _format_terms(list(self.terms.items()), self.field)


def valuation(f, at: Place):
    """Order of vanishing of f at the place; ``INF`` for f = 0."""
    if isinstance(f, LaurentPolynomial):
        return f.valuation(at)
    if isinstance(f, Polynomial):
        f = RationalFunction(f)
    if f.is_zero():
        return INF
    if at is Place.ZERO:
        return f.num.low_order() - f.den.low_order()
    return f.den.degree - f.num.degree


def _power_series_quotient(p: tuple, q: tuple, count: int, field) -> list:
    """First ``count`` coefficients of p/q as a power series (q[0] != 0)."""
    inv = 1 / q[0]
    out = []
    for k in range(count):
        acc = p[k] if k < len(p) else field.zero
        for j in range(1, min(k, len(q) - 1) + 1):
            acc = acc - q[j] * out[k - j]
        out.append(acc * inv)
    return out


def jet(f, at: Place, upper: int) -> dict:
    """Coefficients of the expansion of f in the uniformizer at ``at``, exponents < upper.

    At INF the expansion is in s = 1/t and is computed by substituting s and
    reusing the expansion at zero.
    """
    if isinstance(f, (Polynomial, LaurentPolynomial)):
        f = f.to_rational() if isinstance(f, LaurentPolynomial) else RationalFunction(f)
    if f.is_zero():
        return {}
    field = f.field
    if at is Place.ZERO:
        p, q = f.num, f.den
        shift = 0
    else:
        # f(1/s) = s^(deg q - deg p) * rev(p)(s) / rev(q)(s)
        p, q = f.num.reverse(), f.den.reverse()
        shift = f.den.degree - f.num.degree
    a, b = p.low_order(), q.low_order()
    v = a - b + shift
    if v >= upper:
        return {}
    series = _power_series_quotient(p.coeffs[a:], q.coeffs[b:], upper - v, field)
    return {v + i: c for i, c in enumerate(series) if c}


def laurent_expand(f, at: Place, upper: int) -> LaurentPolynomial:
    """Truncated expansion of f at ``at`` as a Laurent polynomial in t.

    The result g satisfies valuation(f - g, at) >= upper.  Exponents are
    uniformizer exponents, so at INF the t-exponents of g lie in (-upper, -valuation(f)].
    """
    field = f.field
    coeffs = jet(f, at, upper)
    return LaurentPolynomial({at.sign * k: c for k, c in coeffs.items()}, field)


def from_uniformizer(coeffs: Mapping, at: Place, field) -> LaurentPolynomial:
    """Laurent polynomial in t for a finite sum of c_k * pi^k at the given place."""
    return LaurentPolynomial({at.sign * k: c for k, c in coeffs.items()}, field)


def t_power(k: int, field=QQ) -> RationalFunction:
    return RationalFunction.t_power(k, field)


def as_rational(x, field=QQ) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, LaurentPolynomial):
        return x.to_rational()
    if isinstance(x, Polynomial):
        return RationalFunction(x)
    return RationalFunction(Polynomial([x], field))
