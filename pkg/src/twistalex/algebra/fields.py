"""Exact coefficient fields: prime fields F_p and the rationals.

Field values are stored as plain Python numbers (``int`` residues for F_p,
``int``/``Fraction`` for Q) so that polynomial inner loops stay cheap; the
field object only knows how to reduce, invert and print them.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Field:
    characteristic: int

    def reduce(self, x):
        raise NotImplementedError

    def inv(self, x):
        raise NotImplementedError

    def __call__(self, x) -> "FieldElem":
        return FieldElem(self.reduce(x), self)


class PrimeField(Field):
    __slots__ = ("p",)

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    @property
    def characteristic(self) -> int:
        return self.p

    def reduce(self, x):
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return x % self.p

    def inv(self, x):
        if x % self.p == 0:
            raise ZeroDivisionError("inverse of zero in F_%d" % self.p)
        return pow(x, -1, self.p)

    def signed(self, x: int) -> int:
        """Symmetric representative in (-p/2, p/2], handy for display."""
        return x - self.p if x > self.p // 2 else x

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    def __str__(self):
        return f"F_{self.p}"


class RationalField(Field):
    characteristic = 0

    def reduce(self, x):
        if isinstance(x, Fraction) and x.denominator == 1:
            return x.numerator
        return x

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero in Q")
        r = Fraction(1) / x
        return r.numerator if r.denominator == 1 else r

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"

    def __str__(self):
        return "Q"


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_spec(spec) -> Field:
    """``13`` / ``"13"`` / ``"F13"`` -> GF(13); ``0`` / ``"Q"`` -> QQ."""
    if isinstance(spec, Field):
        return spec
    s = str(spec).strip().upper()
    if s in ("0", "Q", "QQ"):
        return QQ
    if s.startswith("F_"):
        s = s[2:]
    elif s.startswith("F") or s.startswith("P"):
        s = s[1:]
    return GF(int(s))


@dataclass(frozen=True)
class FieldElem:
    """A field value bundled with its field; convenience wrapper for callers."""

    value: object
    field: Field

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise ValueError("mixed fields")
            return other.value
        return self.field.reduce(other)

    def __add__(self, other):
        return FieldElem(self.field.reduce(self.value + self._coerce(other)), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.field.reduce(self.value - self._coerce(other)), self.field)

    def __rsub__(self, other):
        return FieldElem(self.field.reduce(self._coerce(other) - self.value), self.field)

    def __mul__(self, other):
        return FieldElem(self.field.reduce(self.value * self._coerce(other)), self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElem(self.field.reduce(-self.value), self.field)

    def inverse(self) -> "FieldElem":
        return FieldElem(self.field.inv(self.value), self.field)

    def __truediv__(self, other):
        return self * FieldElem(self._coerce(other), self.field).inverse()

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        return str(self.value)
