"""Laurent polynomials over a prime field or Q.

A nonzero polynomial is stored as ``t**shift * (c[0] + c[1] t + ... + c[d] t**d)``
with ``c[0] != 0`` and ``c[d] != 0``; the zero polynomial has no coefficients.
Instances are immutable.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .fields import QQ, Field


def _strip(coeffs: list, shift: int) -> tuple[tuple, int]:
    lo = 0
    n = len(coeffs)
    while lo < n and coeffs[lo] == 0:
        lo += 1
    if lo == n:
        return (), 0
    hi = n
    while coeffs[hi - 1] == 0:
        hi -= 1
    return tuple(coeffs[lo:hi]), shift + lo


class LaurentPoly:
    __slots__ = ("field", "shift", "coeffs", "_hash")

    def __init__(self, field: Field, coeffs: Iterable = (), shift: int = 0, *, _raw: bool = False):
        self.field = field
        if _raw:
            self.coeffs = coeffs
            self.shift = shift if coeffs else 0
        else:
            red = field.reduce
            self.coeffs, self.shift = _strip([red(c) for c in coeffs], shift)
        self._hash = None

    # construction helpers ---------------------------------------------------

    @classmethod
    def zero(cls, field: Field) -> "LaurentPoly":
        return cls(field, (), 0, _raw=True)

    @classmethod
    def one(cls, field: Field) -> "LaurentPoly":
        return cls(field, (1,), 0, _raw=True)

    @classmethod
    def monomial(cls, field: Field, coeff, exp: int = 0) -> "LaurentPoly":
        c = field.reduce(coeff)
        if c == 0:
            return cls.zero(field)
        return cls(field, (c,), exp, _raw=True)

    @classmethod
    def t(cls, field: Field) -> "LaurentPoly":
        return cls(field, (1,), 1, _raw=True)

    @classmethod
    def from_dict(cls, field: Field, terms: Mapping[int, object]) -> "LaurentPoly":
        terms = {e: c for e, c in terms.items() if field.reduce(c) != 0}
        if not terms:
            return cls.zero(field)
        lo, hi = min(terms), max(terms)
        coeffs = [0] * (hi - lo + 1)
        for e, c in terms.items():
            coeffs[e - lo] = c
        return cls(field, coeffs, lo)

    @classmethod
    def from_string(cls, field: Field, text: str) -> "LaurentPoly":
        """Parse ``"1 - 2*t + 3*t^2"``-style text (also ``t^-1``, ``t**2``)."""
        s = text.replace(" ", "").replace("**", "^")
        if not s:
            raise ValueError("empty polynomial")
        terms: dict[int, object] = {}
        i = 0
        n = len(s)
        while i < n:
            sign = 1
            if s[i] in "+-":
                sign = -1 if s[i] == "-" else 1
                i += 1
            j = i
            while j < n and (s[j].isdigit() or s[j] in "/"):
                j += 1
            has_coeff = j > i
            coeff = Fraction(s[i:j]) if has_coeff else Fraction(1)
            i = j
            if i < n and s[i] == "*":
                i += 1
            exp = 0
            if i < n and s[i] == "t":
                i += 1
                exp = 1
                if i < n and s[i] == "^":
                    i += 1
                    j = i + 1 if i < n and s[i] == "-" else i
                    while j < n and s[j].isdigit():
                        j += 1
                    if s[i:j] in ("", "-"):
                        raise ValueError(f"bad exponent in {text!r}")
                    exp = int(s[i:j])
                    i = j
            elif not has_coeff:
                raise ValueError(f"cannot parse {text!r}")
            terms[exp] = terms.get(exp, 0) + sign * coeff
            if i < n and s[i] not in "+-":
                raise ValueError(f"cannot parse {text!r}")
        return cls.from_dict(field, terms)

    @classmethod
    def from_int_coeffs(cls, field: Field, coeffs: Iterable[int], shift: int = 0) -> "LaurentPoly":
        return cls(field, list(coeffs), shift)

    # basic queries -----------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def min_exp(self) -> int | None:
        return self.shift if self.coeffs else None

    @property
    def max_exp(self) -> int | None:
        return self.shift + len(self.coeffs) - 1 if self.coeffs else None

    def degree(self) -> int | None:
        """Span ``max_exp - min_exp``; ``None`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_unit(self) -> bool:
        return len(self.coeffs) == 1

    def is_monic(self) -> bool:
        """Both extreme coefficients are units of Z (only meaningful over Q)."""
        if not self.coeffs:
            return False
        return abs(self.coeffs[0]) == 1 and abs(self.coeffs[-1]) == 1

    def leading_coefficient(self):
        return self.coeffs[-1] if self.coeffs else 0

    def coefficient(self, exp: int):
        i = exp - self.shift
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def terms(self) -> dict[int, object]:
        return {self.shift + i: c for i, c in enumerate(self.coeffs) if c != 0}

    # arithmetic ---------------------------------------------------------------

    def _check(self, other: "LaurentPoly") -> None:
        if other.field != self.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def _lift(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        return LaurentPoly.monomial(self.field, other, 0)

    def __add__(self, other) -> "LaurentPoly":
        other = self._lift(other)
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        lo = min(self.shift, other.shift)
        hi = max(self.shift + len(self.coeffs), other.shift + len(other.coeffs))
        out = [0] * (hi - lo)
        o = self.shift - lo
        for i, c in enumerate(self.coeffs):
            out[o + i] = c
        o = other.shift - lo
        for i, c in enumerate(other.coeffs):
            out[o + i] += c
        red = self.field.reduce
        coeffs, shift = _strip([red(c) for c in out], lo)
        return LaurentPoly(self.field, coeffs, shift, _raw=True)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        red = self.field.reduce
        return LaurentPoly(self.field, tuple(red(-c) for c in self.coeffs), self.shift, _raw=True)

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return self._lift(other) + (-self)

    def __mul__(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            c = self.field.reduce(other)
            if c == 0 or not self.coeffs:
                return LaurentPoly.zero(self.field)
            red = self.field.reduce
            return LaurentPoly(self.field, tuple(red(x * c) for x in self.coeffs), self.shift, _raw=True)
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return LaurentPoly.zero(self.field)
        if len(a) < len(b):
            a, b = b, a
        out = [0] * (len(a) + len(b) - 1)
        for j, bj in enumerate(b):
            if bj:
                for i, ai in enumerate(a):
                    out[i + j] += ai * bj
        red = self.field.reduce
        # product of polynomials with nonzero ends over a field has nonzero ends
        return LaurentPoly(self.field, tuple(red(c) for c in out), self.shift + other.shift, _raw=True)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if not self.is_unit():
                raise ValueError("negative power of a non-unit")
            return self.unit_inverse() ** (-n)
        result = LaurentPoly.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shifted(self, k: int) -> "LaurentPoly":
        """Multiply by ``t**k``."""
        return LaurentPoly(self.field, self.coeffs, self.shift + k, _raw=True)

    def unit_inverse(self) -> "LaurentPoly":
        if not self.is_unit():
            raise ValueError(f"{self} is not a unit")
        return LaurentPoly(self.field, (self.field.inv(self.coeffs[0]),), -self.shift, _raw=True)

    def unit_part(self) -> "LaurentPoly":
        """``c * t**j`` with ``self = c t**j * normalize(self)``."""
        if not self.coeffs:
            return LaurentPoly.one(self.field)
        return LaurentPoly(self.field, (self.coeffs[-1],), self.shift, _raw=True)

    def normalize(self) -> "LaurentPoly":
        """Canonical unit-class representative: min exponent 0, leading coefficient 1."""
        if not self.coeffs:
            return self
        lead = self.coeffs[-1]
        if lead == 1 and self.shift == 0:
            return self
        red = self.field.reduce
        inv = self.field.inv(lead)
        return LaurentPoly(self.field, tuple(red(c * inv) for c in self.coeffs), 0, _raw=True)

    def divmod(self, other: "LaurentPoly") -> tuple["LaurentPoly", "LaurentPoly"]:
        """Euclidean division with respect to the span degree.

        Returns ``(q, r)`` with ``self == q * other + r`` and either ``r == 0``
        or ``r.degree() < other.degree()``.
        """
        self._check(other)
        if not other.coeffs:
            raise ZeroDivisionError("division by zero polynomial")
        if not self.coeffs:
            return self, self
        b = other.coeffs
        db = len(b) - 1
        if db == 0:
            return self * other.unit_inverse(), LaurentPoly.zero(self.field)
        red = self.field.reduce
        rem = list(self.coeffs)
        da = len(rem) - 1
        if da < db:
            return LaurentPoly.zero(self.field), self
        inv_lead = self.field.inv(b[-1])
        q = [0] * (da - db + 1)
        for i in range(da - db, -1, -1):
            c = red(rem[i + db] * inv_lead)
            if c:
                q[i] = c
                for j in range(db + 1):
                    rem[i + j] = red(rem[i + j] - c * b[j])
        # self = t^sa * A, other = t^sb * B, A = Q B + R  =>  self = (t^(sa-sb) Q) other + t^sa R
        qc, qs = _strip(q, self.shift - other.shift)
        rc, rs = _strip(rem[:db], self.shift)
        return (LaurentPoly(self.field, qc, qs, _raw=True), LaurentPoly(self.field, rc, rs, _raw=True))

    def __floordiv__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self.divmod(other)[0]

    def __mod__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self.divmod(other)[1]

    def divides(self, other: "LaurentPoly") -> bool:
        if not self.coeffs:
            return not other.coeffs
        return not other.divmod(self)[1].coeffs

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        q, r = self.divmod(other)
        if r.coeffs:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def gcd(self, other: "LaurentPoly") -> "LaurentPoly":
        a, b = self, other
        while b.coeffs:
            a, b = b, a.divmod(b)[1]
        return a.normalize()

    # transformations -------------------------------------------------------------

    def substitute_inverse(self) -> "LaurentPoly":
        """``f(t) -> f(t**-1)``."""
        if not self.coeffs:
            return self
        return LaurentPoly(self.field, tuple(reversed(self.coeffs)), -self.max_exp, _raw=True)

    def scale_exponents(self, d: int) -> "LaurentPoly":
        """``f(t) -> f(t**d)`` for ``d != 0``."""
        if d == 0:
            raise ValueError("scale factor must be nonzero")
        return LaurentPoly.from_dict(self.field, {e * d: c for e, c in self.terms().items()})

    def change_field(self, field: Field) -> "LaurentPoly":
        """Coefficient-wise image in ``field`` (e.g. reduction of a Q-polynomial mod p)."""
        return LaurentPoly(field, self.coeffs, self.shift)

    def evaluate(self, x):
        red = self.field.reduce
        total = 0
        for e, c in self.terms().items():
            if e >= 0:
                total += c * x**e
            else:
                total += c * self.field.inv(x) ** (-e)
        return red(total)

    def primitive_integer(self) -> "LaurentPoly":
        """Over Q: clear denominators and content, positive leading coefficient, min exponent 0."""
        if self.field != QQ:
            raise ValueError("primitive_integer needs Q coefficients")
        if not self.coeffs:
            return self
        from math import gcd

        den = 1
        for c in self.coeffs:
            d = Fraction(c).denominator
            den = den * d // gcd(den, d)
        ints = [int(Fraction(c) * den) for c in self.coeffs]
        g = 0
        for c in ints:
            g = gcd(g, c)
        if ints[-1] < 0:
            g = -g
        return LaurentPoly(QQ, tuple(c // g for c in ints), 0, _raw=True)

    # comparison / display ------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self.field == other.field and self.shift == other.shift and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly.monomial(self.field, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.shift, self.coeffs))
        return self._hash

    def equal_up_to_unit(self, other: "LaurentPoly") -> bool:
        return self.normalize() == other.normalize()

    def coefficient_list(self) -> list:
        """Coefficients from ``t**min_exp`` upward."""
        return list(self.coeffs)

    def __repr__(self):
        return f"LaurentPoly({self.field!r}, {str(self)!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            e = self.shift + i
            neg = c < 0
            mag = -c if neg else c
            if e == 0:
                body = str(mag)
            else:
                mon = "t" if e == 1 else f"t^{e}"
                body = mon if mag == 1 else f"{mag}*{mon}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)


def lp_normalize(f: LaurentPoly) -> LaurentPoly:
    return f.normalize()


def lp_degree(f: LaurentPoly) -> int | None:
    return f.degree()
