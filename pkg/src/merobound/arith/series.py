"""Truncated power series in x and polynomials in y over them."""

from __future__ import annotations

from math import comb
from typing import Sequence

from ..errors import NotSolvable
from .gaussian import ONE, ZERO, GaussianRational, as_qi
from .poly import SparsePoly

__all__ = ["TruncSeries", "SeriesPoly", "series_solve"]


def _qi(c):
    return c if isinstance(c, GaussianRational) else GaussianRational(c)


class TruncSeries:
    """A power series in x known modulo x**cap.

    ``coeffs[k]`` is the coefficient of x**k for ``0 <= k < cap``.  Binary
    operations keep the smaller cap; nothing at or beyond ``cap`` is ever read.
    """

    __slots__ = ("coeffs", "cap")

    def __init__(self, coeffs: Sequence = (), cap: int | None = None):
        cs = [_qi(c) for c in coeffs]
        if cap is None:
            cap = len(cs)
        if cap <= 0:
            raise ValueError("truncation order must be positive")
        cs = cs[:cap]
        cs.extend([ZERO] * (cap - len(cs)))
        self.coeffs = tuple(cs)
        self.cap = cap

    @classmethod
    def _raw(cls, coeffs: tuple, cap: int):
        obj = object.__new__(cls)
        obj.coeffs = coeffs
        obj.cap = cap
        return obj

    @classmethod
    def zero(cls, cap: int):
        return cls._raw((ZERO,) * cap, cap)

    @classmethod
    def one(cls, cap: int):
        return cls._raw((ONE,) + (ZERO,) * (cap - 1), cap)

    @classmethod
    def from_poly(cls, p: SparsePoly, cap: int, var: str = "x"):
        """Univariate polynomial (in ``var``) as a series; extra variables must be absent."""
        cs = [ZERO] * cap
        i = p.index(var)
        for e, c in p.items():
            if any(k for j, k in enumerate(e) if j != i):
                raise ValueError(f"{p} is not univariate in {var}")
            if e[i] < cap:
                cs[e[i]] = cs[e[i]] + c
        return cls._raw(tuple(cs), cap)

    def to_poly(self, vars=("x", "y"), var="x") -> SparsePoly:
        i = vars.index(var)
        terms = {}
        for k, c in enumerate(self.coeffs):
            if c:
                e = [0] * len(vars)
                e[i] = k
                terms[tuple(e)] = c
        return SparsePoly._raw(terms, tuple(vars))

    # arithmetic -----------------------------------------------------------
    def __getitem__(self, k):
        if k >= self.cap:
            raise IndexError(f"coefficient x^{k} is beyond the truncation order {self.cap}")
        return self.coeffs[k]

    def _other(self, other):
        if isinstance(other, TruncSeries):
            return other
        c = as_qi(other)
        if c is NotImplemented:
            return None
        return TruncSeries._raw((c,) + (ZERO,) * (self.cap - 1), self.cap)

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        n = min(self.cap, o.cap)
        return TruncSeries._raw(tuple(a + b for a, b in zip(self.coeffs[:n], o.coeffs[:n])), n)

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries._raw(tuple(-c for c in self.coeffs), self.cap)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            c = as_qi(other)
            if c is NotImplemented:
                return NotImplemented
            return TruncSeries._raw(tuple(a * c for a in self.coeffs), self.cap)
        n = min(self.cap, other.cap)
        a, b = self.coeffs, other.coeffs
        nz_a = [(i, c) for i, c in enumerate(a[:n]) if c]
        nz_b = [(j, c) for j, c in enumerate(b[:n]) if c]
        out = [ZERO] * n
        for i, ca in nz_a:
            for j, cb in nz_b:
                k = i + j
                if k >= n:
                    break
                out[k] = out[k] + ca * cb
        return TruncSeries._raw(tuple(out), n)

    __rmul__ = __mul__

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, or None if zero through cap."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return None

    def inverse(self) -> "TruncSeries":
        c0 = self.coeffs[0]
        if not c0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        inv0 = c0.inverse()
        out = [inv0]
        for k in range(1, self.cap):
            s = ZERO
            for j in range(1, k + 1):
                a = self.coeffs[j]
                if a:
                    s = s + a * out[k - j]
            out.append(-s * inv0)
        return TruncSeries._raw(tuple(out), self.cap)

    def __truediv__(self, other):
        if isinstance(other, TruncSeries):
            return self * other.inverse()
        c = as_qi(other)
        if c is NotImplemented:
            return NotImplemented
        return self * c.inverse()

    def truncate(self, cap: int) -> "TruncSeries":
        cap = min(cap, self.cap)
        return TruncSeries._raw(self.coeffs[:cap], cap)

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by x**k (k >= 0); precision grows by k."""
        return TruncSeries._raw((ZERO,) * k + self.coeffs, self.cap + k)

    def divide_x(self, k: int) -> "TruncSeries":
        """Divide by x**k; the first k coefficients must vanish."""
        if any(self.coeffs[:k]):
            raise ValueError(f"series is not divisible by x^{k}")
        if k >= self.cap:
            raise ValueError("no precision left after division")
        return TruncSeries._raw(self.coeffs[k:], self.cap - k)

    def conjugate(self):
        return TruncSeries._raw(tuple(c.conjugate() for c in self.coeffs), self.cap)

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.coeffs)

    def first_nonreal(self) -> int | None:
        for k, c in enumerate(self.coeffs):
            if not c.is_real():
                return k
        return None

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            o = self._other(other)
            if o is None:
                return NotImplemented
            other = o
        return self.cap == other.cap and self.coeffs == other.coeffs

    def agrees_with(self, other: "TruncSeries") -> bool:
        n = min(self.cap, other.cap)
        return self.coeffs[:n] == other.coeffs[:n]

    def __hash__(self):
        return hash((self.coeffs, self.cap))

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"({c})*x^{k}" if k else f"({c})")
        body = " + ".join(terms) if terms else "0"
        return f"TruncSeries({body} + O(x^{self.cap}))"


class SeriesPoly:
    """Polynomial in y whose coefficients are ``TruncSeries`` in x.

    ``coeffs[j]`` multiplies y**j.  All coefficients share one cap, which is
    the x-precision of the object.
    """

    __slots__ = ("coeffs", "cap")

    def __init__(self, coeffs: Sequence[TruncSeries], cap: int | None = None):
        cs = list(coeffs)
        if cap is None:
            cap = min(c.cap for c in cs) if cs else 1
        cs = [c.truncate(cap) if c.cap > cap else c for c in cs]
        if any(c.cap < cap for c in cs):
            raise ValueError("coefficient precision below requested cap")
        while len(cs) > 1 and not any(cs[-1].coeffs):
            cs.pop()
        self.coeffs = tuple(cs)
        self.cap = cap

    @classmethod
    def from_poly(cls, p: SparsePoly, cap: int) -> "SeriesPoly":
        ix, iy = p.index("x"), p.index("y")
        if len(p.vars) != 2:
            p_vars = set(p.vars) - {"x", "y"}
            if any(e[p.vars.index(v)] for v in p_vars for e in p.terms):
                raise ValueError("polynomial involves variables other than x and y")
        deg = max(p.degree("y"), 0)
        rows = [[ZERO] * cap for _ in range(deg + 1)]
        for e, c in p.items():
            if e[ix] < cap:
                rows[e[iy]][e[ix]] = c
        return cls([TruncSeries._raw(tuple(r), cap) for r in rows], cap)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, j) -> TruncSeries:
        if j < len(self.coeffs):
            return self.coeffs[j]
        return TruncSeries.zero(self.cap)

    def is_monic(self) -> bool:
        top = self.coeffs[-1]
        return top.coeffs[0] == ONE and not any(top.coeffs[1:])

    def __add__(self, other: "SeriesPoly") -> "SeriesPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return SeriesPoly([self[j] + other[j] for j in range(n)], min(self.cap, other.cap))

    def __sub__(self, other: "SeriesPoly") -> "SeriesPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return SeriesPoly([self[j] - other[j] for j in range(n)], min(self.cap, other.cap))

    def __mul__(self, other):
        if isinstance(other, TruncSeries):
            return SeriesPoly([c * other for c in self.coeffs])
        if not isinstance(other, SeriesPoly):
            return SeriesPoly([c * other for c in self.coeffs], self.cap)
        cap = min(self.cap, other.cap)
        out = [TruncSeries.zero(cap) for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            if not any(a.coeffs):
                continue
            for j, b in enumerate(other.coeffs):
                if any(b.coeffs):
                    out[i + j] = out[i + j] + a * b
        return SeriesPoly(out, cap)

    def evaluate_y(self, s: TruncSeries) -> TruncSeries:
        """Horner evaluation at y = s(x)."""
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * s + c
        return acc.truncate(min(self.cap, s.cap))

    def shift_y(self, s: TruncSeries) -> "SeriesPoly":
        """Return P(x, y + s(x)) by Taylor expansion in y."""
        out = [TruncSeries.zero(self.cap) for _ in self.coeffs]
        s = s.truncate(self.cap) if s.cap > self.cap else s
        powers = [TruncSeries.one(self.cap)]
        for _ in range(len(self.coeffs)):
            powers.append(powers[-1] * s)
        for j, c in enumerate(self.coeffs):
            if not any(c.coeffs):
                continue
            for k in range(j + 1):
                out[k] = out[k] + c * powers[j - k] * comb(j, k)
        return SeriesPoly(out, min(self.cap, s.cap))

    def derivative_y(self, k: int = 1) -> "SeriesPoly":
        out = []
        for j in range(k, len(self.coeffs)):
            f = 1
            for t in range(k):
                f *= j - t
            out.append(self.coeffs[j] * f)
        if not out:
            out = [TruncSeries.zero(self.cap)]
        return SeriesPoly(out, self.cap)

    def truncate(self, cap: int) -> "SeriesPoly":
        return SeriesPoly([c.truncate(cap) for c in self.coeffs], min(cap, self.cap))

    def make_monic(self) -> "SeriesPoly":
        lead = self.coeffs[-1]
        inv = lead.inverse()
        return SeriesPoly([c * inv for c in self.coeffs[:-1]] + [TruncSeries.one(self.cap)], self.cap)

    def x_slices(self) -> list:
        """Coefficient of x**n as a dense list over y-degree, for n < cap."""
        return [[c.coeffs[n] for c in self.coeffs] for n in range(self.cap)]

    @classmethod
    def from_x_slices(cls, slices, cap: int, ydeg: int) -> "SeriesPoly":
        cols = [[ZERO] * cap for _ in range(ydeg + 1)]
        for n, sl in enumerate(slices[:cap]):
            for j, c in enumerate(sl):
                if c:
                    cols[j][n] = c
        return cls([TruncSeries._raw(tuple(col), cap) for col in cols], cap)

    def to_poly(self, vars=("x", "y")) -> SparsePoly:
        """The truncation as an exact polynomial (terms below the cap only)."""
        ix, iy = vars.index("x"), vars.index("y")
        terms = {}
        for j, c in enumerate(self.coeffs):
            for n, a in enumerate(c.coeffs):
                if a:
                    e = [0] * len(vars)
                    e[ix], e[iy] = n, j
                    terms[tuple(e)] = a
        return SparsePoly._raw(terms, tuple(vars))

    def support(self):
        return [(n, j) for j, c in enumerate(self.coeffs) for n, a in enumerate(c.coeffs) if a]

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.coeffs)

    def agrees_with(self, other: "SeriesPoly") -> bool:
        n = max(len(self.coeffs), len(other.coeffs))
        return all(self[j].agrees_with(other[j]) for j in range(n))

    def __eq__(self, other):
        if not isinstance(other, SeriesPoly):
            return NotImplemented
        return self.cap == other.cap and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.cap))

    def __repr__(self):
        return f"SeriesPoly({self.to_poly()} + O(x^{self.cap}), ydeg={self.degree})"


def series_solve(F: SparsePoly, cap: int) -> TruncSeries:
    """Solve F(x, s(x)) = 0 for the unique series s with s(0) = 0, mod x**cap.

    Newton iteration s <- s - F(s)/F_y(s) doubles the number of correct
    coefficients per step.
    """
    if cap <= 0:
        raise ValueError("cap must be positive")
    if F.constant_term():
        raise NotSolvable("F(0, 0) != 0")
    Fy = F.derivative("y")
    if not Fy.constant_term():
        raise NotSolvable("dF/dy vanishes at the origin")
    work = cap + 1
    P = SeriesPoly.from_poly(F, work)
    Py = SeriesPoly.from_poly(Fy, work)
    s = TruncSeries.zero(1)
    prec = 1
    while prec < cap:
        prec = min(2 * prec, cap)
        s_t = TruncSeries._raw(s.coeffs[:prec] + (ZERO,) * (prec - s.cap), prec)
        num = P.truncate(prec).evaluate_y(s_t)
        den = Py.truncate(prec).evaluate_y(s_t)
        s = s_t - num / den
    return s.truncate(cap)
