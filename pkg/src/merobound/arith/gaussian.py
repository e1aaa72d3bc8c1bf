"""Exact Gaussian rationals a + b*i with a, b in Q."""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq

__all__ = ["GaussianRational", "QI", "as_qi", "ZERO", "ONE", "I"]

_MPQ = type(mpq(0))
_NUMBER = re.compile(r"[+-]?\d+(?:/\d+)?")


def _rat(value) -> _MPQ:
    if isinstance(value, _MPQ):
        return value
    if isinstance(value, (int, Rational)):
        return mpq(value)
    if isinstance(value, str):
        return mpq(value.strip())
    raise TypeError(f"cannot convert {value!r} to an exact rational")


class GaussianRational:
    """Element of Q(i); both parts are always reduced ``gmpy2.mpq``."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _rat(re)
        self.im = _rat(im)

    @classmethod
    def _make(cls, re, im):
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Parse the exact-string encoding used in JSON, e.g. ``"1/2-3/4*i"``."""
        s = text.replace(" ", "")
        real_s, imag_s = s, None
        if s.endswith("i"):
            body = s[:-1]
            if body.endswith("*"):
                body = body[:-1]
            k = max(body.rfind("+"), body.rfind("-"))
            real_s, imag_s = (body[:k], body[k:]) if k > 0 else ("", body)
            if imag_s in ("", "+", "-"):
                imag_s += "1"
        for part in (real_s, imag_s):
            if part and not _NUMBER.fullmatch(part):
                raise ValueError(f"malformed Gaussian rational {text!r}")
        if not real_s and imag_s is None:
            raise ValueError("empty number")
        real = mpq(real_s.lstrip("+")) if real_s else mpq(0)
        imag = mpq(imag_s.lstrip("+")) if imag_s else mpq(0)
        return cls._make(real, imag)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = as_qi(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussianRational._make(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = as_qi(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussianRational._make(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = as_qi(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __neg__(self):
        return GaussianRational._make(-self.re, -self.im)

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = as_qi(other)
        if o is NotImplemented:
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return GaussianRational._make(a * c, b)
        return GaussianRational._make(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        a, b = self.re, self.im
        if not b:
            if not a:
                raise ZeroDivisionError("inverse of zero in Q(i)")
            return GaussianRational._make(1 / a, b)
        n = a * a + b * b
        return GaussianRational._make(a / n, -b / n)

    def __truediv__(self, other):
        o = as_qi(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = as_qi(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._make(self.re, -self.im)

    def norm(self):
        """|z|^2 as an exact rational."""
        return self.re * self.re + self.im * self.im

    # predicates -----------------------------------------------------------
    def is_real(self) -> bool:
        return not self.im

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = as_qi(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def sort_key(self):
        """Lexicographic (re, im) key used for deterministic root ordering."""
        return (self.re, self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    # formatting -----------------------------------------------------------
    def __str__(self):
        re_s = str(self.re)
        if not self.im:
            return re_s
        mag = abs(self.im)
        mag_s = "" if mag == 1 else f"{mag}*"
        if not self.re:
            return f"-{mag_s}i" if self.im < 0 else f"{mag_s}i"
        sign = "-" if self.im < 0 else "+"
        return f"{re_s}{sign}{mag_s}i"

    def __repr__(self):
        return f"QI({self})"

    def to_fraction_pair(self):
        return Fraction(int(self.re.numerator), int(self.re.denominator)), Fraction(
            int(self.im.numerator), int(self.im.denominator)
        )


QI = GaussianRational
ZERO = GaussianRational._make(mpq(0), mpq(0))
ONE = GaussianRational._make(mpq(1), mpq(0))
I = GaussianRational._make(mpq(0), mpq(1))


def as_qi(value):
    """Coerce ints, rationals and Gaussian rationals; NotImplemented otherwise."""
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, bool):
        return NotImplemented
    if isinstance(value, (int, _MPQ, Rational)):
        return GaussianRational._make(mpq(value), mpq(0))
    if isinstance(value, complex):
        return NotImplemented
    return NotImplemented
