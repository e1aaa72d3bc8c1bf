"""Sparse multivariate polynomials over Q(i).

A polynomial is an exponent-tuple -> coefficient map plus an ordered tuple of
variable names.  Binary operations between polynomials over different
variable sets promote both sides to the union when every name is one of the
plane/space coordinates ``x, y, z``; anything else is a ``VariableMismatch``.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from ..errors import VariableMismatch
from .gaussian import ONE, ZERO, GaussianRational, as_qi

__all__ = ["SparsePoly", "CANONICAL_VARS", "poly_arith", "x", "y", "z"]

CANONICAL_VARS = ("x", "y", "z")


def _canonical_union(a, b):
    names = set(a) | set(b)
    if not names <= set(CANONICAL_VARS):
        raise VariableMismatch(a, b)
    return tuple(v for v in CANONICAL_VARS if v in names)


class SparsePoly:
    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, terms: Mapping[tuple, object] | None = None, vars=("x", "y")):
        self.vars = tuple(vars)
        n = len(self.vars)
        clean = {}
        if terms:
            for exps, c in terms.items():
                exps = tuple(int(e) for e in exps)
                if len(exps) != n or min(exps, default=0) < 0:
                    raise ValueError(f"bad exponent vector {exps} for variables {self.vars}")
                c = c if isinstance(c, GaussianRational) else GaussianRational(c)
                if c:
                    clean[exps] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, vars: tuple) -> "SparsePoly":
        # trusted constructor: terms already canonical and nonzero
        obj = object.__new__(cls)
        obj.vars = vars
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c, vars=("x", "y")) -> "SparsePoly":
        c = as_qi(c) if not isinstance(c, GaussianRational) else c
        if c is NotImplemented:
            raise TypeError(f"not a coefficient: {c!r}")
        if not c:
            return cls._raw({}, tuple(vars))
        return cls._raw({(0,) * len(vars): c}, tuple(vars))

    @classmethod
    def var(cls, name: str, vars=("x", "y")) -> "SparsePoly":
        vars = tuple(vars)
        exps = tuple(1 if v == name else 0 for v in vars)
        if name not in vars:
            raise VariableMismatch((name,), vars)
        return cls._raw({exps: ONE}, vars)

    @classmethod
    def monomial(cls, exps, c=1, vars=("x", "y")) -> "SparsePoly":
        return cls({tuple(exps): c}, vars)

    # alignment --------------------------------------------------------------
    def promote(self, vars) -> "SparsePoly":
        vars = tuple(vars)
        if vars == self.vars:
            return self
        if not set(self.vars) <= set(vars):
            raise VariableMismatch(self.vars, vars)
        idx = [vars.index(v) for v in self.vars]
        n = len(vars)
        out = {}
        for exps, c in self.terms.items():
            e = [0] * n
            for k, i in enumerate(idx):
                e[i] = exps[k]
            out[tuple(e)] = c
        return SparsePoly._raw(out, vars)

    def _align(self, other):
        if isinstance(other, SparsePoly):
            if other.vars == self.vars:
                return self, other
            if not self.terms and not other.terms:
                return self, SparsePoly._raw({}, self.vars)
            u = _canonical_union(self.vars, other.vars)
            return self.promote(u), other.promote(u)
        c = as_qi(other)
        if c is NotImplemented:
            return None
        return self, SparsePoly.const(c, self.vars)

    # ring operations ------------------------------------------------------
    def __add__(self, other):
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        out = dict(a.terms)
        for e, c in b.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        return SparsePoly._raw(out, a.vars)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly._raw({e: -c for e, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return a + (-b)

    def __rsub__(self, other):
        pair = self._align(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        return b + (-a)

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            c = as_qi(other)
            if c is NotImplemented:
                return NotImplemented
            if not c:
                return SparsePoly._raw({}, self.vars)
            return SparsePoly._raw({e: v * c for e, v in self.terms.items()}, self.vars)
        a, b = self._align(other)
        out: dict = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(p + q for p, q in zip(e1, e2))
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return SparsePoly._raw({e: c for e, c in out.items() if c}, a.vars)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = SparsePoly.const(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, other):
        c = as_qi(other)
        if c is NotImplemented:
            return NotImplemented
        return self * c.inverse()

    # comparisons ----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, SparsePoly) and as_qi(other) is NotImplemented:
            return NotImplemented
        try:
            a, b = self._align(other)
        except VariableMismatch:
            return False
        return a.terms == b.terms

    def __hash__(self):
        if self._hash is None:
            # hash is variable-set independent so promoted copies collide
            items = []
            for e, c in self.terms.items():
                named = tuple((v, k) for v, k in zip(self.vars, e) if k)
                items.append((named, c))
            self._hash = hash(frozenset(items))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # structure ------------------------------------------------------------
    def index(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise VariableMismatch((var,), self.vars) from None

    def degree(self, var: str | None = None) -> int:
        """Degree in ``var`` (or total degree); -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if var is None:
            return max(sum(e) for e in self.terms)
        i = self.index(var)
        return max(e[i] for e in self.terms)

    def total_degree(self) -> int:
        return self.degree()

    def order(self) -> int:
        """Lowest total degree of a term (the m-adic order); -1 for zero."""
        if not self.terms:
            return -1
        return min(sum(e) for e in self.terms)

    def low_degree(self, var: str) -> int:
        if not self.terms:
            return -1
        i = self.index(var)
        return min(e[i] for e in self.terms)

    def coeff(self, exps) -> GaussianRational:
        return self.terms.get(tuple(exps), ZERO)

    def constant_term(self) -> GaussianRational:
        return self.terms.get((0,) * len(self.vars), ZERO)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.terms.values())

    def conjugate(self) -> "SparsePoly":
        return SparsePoly._raw({e: c.conjugate() for e, c in self.terms.items()}, self.vars)

    def items(self):
        return self.terms.items()

    def sorted_terms(self):
        """Terms in a fixed order: descending total degree, then lexicographic."""
        return sorted(self.terms.items(), key=lambda t: (-sum(t[0]), tuple(-k for k in t[0])))

    def leading_coefficient(self) -> GaussianRational:
        return self.sorted_terms()[0][1] if self.terms else ZERO

    def truncate(self, n: int) -> "SparsePoly":
        """Drop every term of total degree >= n (reduction modulo m^n)."""
        return SparsePoly._raw({e: c for e, c in self.terms.items() if sum(e) < n}, self.vars)

    def coefficients_in(self, var: str) -> dict:
        """Split into ``{k: coefficient of var**k}`` with coefficients in the same ring."""
        i = self.index(var)
        out: dict = {}
        for e, c in self.terms.items():
            k = e[i]
            e2 = e[:i] + (0,) + e[i + 1 :]
            out.setdefault(k, {})[e2] = c
        return {k: SparsePoly._raw(t, self.vars) for k, t in out.items()}

    def divide_by_monomial(self, exps) -> "SparsePoly":
        out = {}
        for e, c in self.terms.items():
            d = tuple(p - q for p, q in zip(e, exps))
            if min(d) < 0:
                raise ValueError("monomial does not divide polynomial")
            out[d] = c
        return SparsePoly._raw(out, self.vars)

    def monomial_content(self) -> tuple:
        """Exponents of the largest monomial dividing every term."""
        if not self.terms:
            return (0,) * len(self.vars)
        return tuple(min(col) for col in zip(*self.terms))

    # calculus / substitution -------------------------------------------------
    def derivative(self, var: str, k: int = 1) -> "SparsePoly":
        i = self.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i] < k:
                continue
            f = 1
            for j in range(k):
                f *= e[i] - j
            e2 = e[:i] + (e[i] - k,) + e[i + 1 :]
            out[e2] = c * f
        return SparsePoly._raw(out, self.vars)

    def subs(self, mapping: Mapping[str, object], vars=None) -> "SparsePoly":
        """Substitute polynomials (or scalars) for variables; total.

        The result lives over ``vars`` if given, otherwise over the canonical
        union of the untouched variables and those of the substituted values.
        """
        values = {}
        for name, val in mapping.items():
            self.index(name)
            values[name] = val
        keep = [v for v in self.vars if v not in values]
        if vars is None:
            names = set(keep)
            for val in values.values():
                if isinstance(val, SparsePoly):
                    names |= set(val.vars)
            if names <= set(CANONICAL_VARS):
                vars = tuple(v for v in CANONICAL_VARS if v in names)
            else:
                vars = tuple(keep) + tuple(
                    sorted(n for n in names if n not in keep)
                )
        vars = tuple(vars)
        images = []
        for v in self.vars:
            if v in values:
                val = values[v]
                img = val.promote(vars) if isinstance(val, SparsePoly) else SparsePoly.const(val, vars)
            else:
                img = SparsePoly.var(v, vars)
            images.append(img)
        cache = [dict() for _ in self.vars]

        def power(i, k):
            got = cache[i].get(k)
            if got is None:
                got = images[i] ** k
                cache[i][k] = got
            return got

        acc: dict = {}
        for e, c in self.terms.items():
            term = SparsePoly.const(c, vars)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            for te, tc in term.terms.items():
                s = acc.get(te)
                acc[te] = tc if s is None else s + tc
        return SparsePoly._raw({e: c for e, c in acc.items() if c}, vars)

    def evaluate(self, values: Mapping[str, object]) -> GaussianRational:
        pts = [as_qi(values[v]) if not isinstance(values[v], GaussianRational) else values[v] for v in self.vars]
        total = ZERO
        for e, c in self.terms.items():
            t = c
            for p, k in zip(pts, e):
                if k:
                    t = t * p**k
            total = total + t
        return total

    # formatting -------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                (v if k == 1 else f"{v}^{k}") for v, k in zip(self.vars, e) if k
            )
            if c.is_real():
                mag = abs(c.re)
                sign = "-" if c.re < 0 else "+"
                if not mono:
                    body = str(mag)
                elif mag == 1:
                    body = mono
                else:
                    body = f"{mag}*{mono}"
            else:
                sign = "+"
                cs = f"({c})"
                body = cs if not mono else f"{cs}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"SparsePoly({str(self)!r}, vars={self.vars})"


def poly_arith(op: str, a: SparsePoly, b=None) -> SparsePoly:
    """Dispatch a named ring operation (``add``, ``sub``, ``mul``, ``pow``,
    ``diff`` with ``b`` the variable name, ``subs`` with ``b`` a mapping)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "pow":
        return a**b
    if op == "diff":
        return a.derivative(b)
    if op == "subs":
        return a.subs(b)
    raise ValueError(f"unknown operation {op!r}")


x = SparsePoly.var("x", ("x", "y"))
y = SparsePoly.var("y", ("x", "y"))
z = SparsePoly.var("z", ("x", "y", "z"))


def polys_from(items: Iterable[SparsePoly], vars) -> list:
    return [p.promote(vars) for p in items]
