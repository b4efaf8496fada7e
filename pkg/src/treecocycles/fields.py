"""Exact base fields: the rationals and prime fields F_p.

Rational scalars are plain :class:`fractions.Fraction` values.  Prime-field
scalars are :class:`Fp` instances.  Both support the usual arithmetic
operators, so polynomial code never needs to know which backend it runs on.
"""

from __future__ import annotations

import functools
from random import Random
from fractions import Fraction


class Fp:
    """Residue class modulo a prime, stored by its representative in [0, p)."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError(f"mixing F_{self.p} and F_{other.p}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.value, self.p)

    def inverse(self) -> "Fp":
        if self.value == 0:
            raise ZeroDivisionError(f"inverse of zero in F_{self.p}")
        return Fp(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * Fp(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Fp(o, self.p) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return Fp(pow(self.value, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"Fp({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


class RationalField:
    """The field Q with Fraction scalars."""

    name = "Q"
    characteristic = 0
    is_finite = False
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, x) -> Fraction:
        if isinstance(x, Fp):
            raise TypeError("cannot coerce a prime-field residue into Q")
        return Fraction(x)

    def parse(self, text: str) -> Fraction:
        return Fraction(text.strip())

    def format(self, x: Fraction) -> str:
        return str(x)

    def random(self, rng: Random, height: int = 5, nonzero: bool = False) -> Fraction:
        while True:
            x = Fraction(rng.randint(-height, height), rng.randint(1, height))
            if x or not nonzero:
                return x

    def elements(self):
        raise ValueError("enumeration requires a finite field")

    @property
    def size(self):
        return None

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


class PrimeField:
    """The prime field F_p."""

    characteristic: int
    is_finite = True

    def __init__(self, p: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.characteristic = p
        self.zero = Fp(0, p)
        self.one = Fp(1, p)

    @property
    def name(self) -> str:
        return f"F{self.characteristic}"

    @property
    def size(self) -> int:
        return self.characteristic

    def __call__(self, x) -> Fp:
        p = self.characteristic
        if isinstance(x, Fp):
            if x.p != p:
                raise ValueError(f"mixing F_{p} and F_{x.p}")
            return x
        if isinstance(x, Fraction):
            return Fp(x.numerator, p) / Fp(x.denominator, p)
        return Fp(int(x), p)

    def parse(self, text: str) -> Fp:
        text = text.strip()
        if "/" in text:
            a, b = text.split("/")
            return Fp(int(a), self.characteristic) / Fp(int(b), self.characteristic)
        return Fp(int(text), self.characteristic)

    def format(self, x: Fp) -> str:
        return str(x.value)

    def random(self, rng: Random, height: int = 0, nonzero: bool = False) -> Fp:
        lo = 1 if nonzero else 0
        return Fp(rng.randint(lo, self.characteristic - 1), self.characteristic)

    def elements(self) -> list[Fp]:
        return [Fp(i, self.characteristic) for i in range(self.characteristic)]

    def __repr__(self):
        return f"GF({self.characteristic})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("GF", self.characteristic))


QQ = RationalField()


@functools.lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_name(name: str):
    """Parse a field selector: ``q`` for Q, ``fp:<p>`` (or ``f<p>``) for F_p."""
    key = name.strip().lower()
    if key in ("q", "qq", "rationals"):
        return QQ
    if key.startswith("fp:"):
        return GF(int(key[3:]))
    if key.startswith("f") and key[1:].isdigit():
        return GF(int(key[1:]))
    raise ValueError(f"unknown field {name!r}; expected 'q' or 'fp:<p>'")
