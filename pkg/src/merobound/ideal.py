"""Product ideals prod_i (y + q_i(x), x^m_i), exact membership and integrality certificates.

Each factor (y + q, x^m) with q(0) = 0 contains (x, y)^m, so the product
contains (x, y)^M with M = sum m_i.  Membership therefore reduces to linear
algebra on polynomials truncated below total degree M.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Iterable, Optional, Sequence

from .arith.poly import SparsePoly
from .errors import MalformedCertificate
from .linalg import EchelonSpan

__all__ = [
    "ProductIdeal",
    "MembershipCertificate",
    "RefutationCertificate",
    "IntegralTerm",
    "IntegralCertificate",
    "build_ideal",
    "expand_generators",
    "member",
    "member_refute_truncated",
    "verify_integral_equation",
    "monomials_below",
]

MAX_FACTORS = 8


@dataclass(frozen=True)
class ProductIdeal:
    """Either a product of factors (q, m) or an explicit generator list.

    ``factors`` repeat per branch and multiplicity; ``q`` is a polynomial in x
    with real coefficients, zero constant term and degree below ``m``.
    """

    factors: tuple = ()
    nvars: int = 2
    generators: Optional[tuple] = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if self.nvars not in (2, 3):
            raise ValueError("nvars must be 2 or 3")
        for q, m in self.factors:
            if m < 1:
                raise ValueError("factor exponent m must be positive")
            if q.constant_term():
                raise ValueError("q must vanish at 0")
            if q.degree("y") > 0 or q.degree("x") >= m:
                raise ValueError("q must be a polynomial in x of degree below m")

    @property
    def vars(self) -> tuple:
        return ("x", "y", "z")[: self.nvars]

    @property
    def bound(self) -> int:
        """M = sum of the m_i; the ideal contains every monomial of degree M."""
        return sum(m for _, m in self.factors)

    @property
    def is_product(self) -> bool:
        return self.generators is None

    @property
    def is_unit(self) -> bool:
        return self.is_product and not self.factors

    def gens(self) -> list:
        if self.generators is not None:
            return [g.promote(self.vars) for g in self.generators]
        got = self._cache.get("gens")
        if got is None:
            got = expand_generators(self)
            self._cache["gens"] = got
        return got

    def describe(self) -> str:
        return "(" + ", ".join(str(g) for g in self.gens()) + ")"


@dataclass(frozen=True)
class MembershipCertificate:
    """f = sum coeff_i * gens[i] + residual with every residual term of degree >= M."""

    combination: tuple  # (coefficient SparsePoly, generator index)
    residual: SparsePoly
    bound: int

    def replay(self, f: SparsePoly, gens: Sequence[SparsePoly]) -> bool:
        acc = SparsePoly.const(0, f.vars)
        for coeff, idx in self.combination:
            acc = acc + coeff * gens[idx]
        rest = f - acc
        if rest != self.residual:
            return False
        return rest.is_zero() or rest.order() >= self.bound


@dataclass(frozen=True)
class RefutationCertificate:
    """f mod m^N lies outside the span of truncated generator multiples."""

    truncation: int
    rows: int
    columns: int
    rank: int
    normal_form: SparsePoly


@dataclass(frozen=True)
class IntegralTerm:
    j: int
    products: tuple  # tuple of tuples of generator indices, each of length j
    coeff: SparsePoly


@dataclass(frozen=True)
class IntegralCertificate:
    """Monic relation f^n + sum_j a_j f^(n-j) = 0 with a_j spelled out in I^j."""

    equation_degree: int
    terms: tuple


# ---------------------------------------------------------------------------


def build_ideal(forms: Iterable) -> ProductIdeal:
    """One factor (q mod x^m, m) per branch: r copies per form, times multiplicity."""
    factors = []
    for form, mult in forms:
        q = form.q.truncate(form.m).to_poly(("x", "y"))
        factors.extend([(q, form.m)] * (form.r * mult))
    return ProductIdeal(tuple(factors))


def _grouped(factors) -> list:
    groups: dict = {}
    order = []
    for q, m in factors:
        key = (q, m)
        if key not in groups:
            groups[key] = 0
            order.append(key)
        groups[key] += 1
    return [(q, m, groups[(q, m)]) for q, m in order]


def expand_generators(I: ProductIdeal) -> list:
    """All choice products of (y + q_i) or x^m_i, deduplicated.

    Ordered by how many x^m factors were chosen, then by the choice pattern.
    """
    if not I.is_product:
        return I.gens()
    if len(I.factors) > MAX_FACTORS and len(_grouped(I.factors)) > MAX_FACTORS:
        raise ValueError(f"more than {MAX_FACTORS} distinct factors")
    vars_ = I.vars
    xv = SparsePoly.var("x", vars_)
    yv = SparsePoly.var("y", vars_)
    groups = _grouped(I.factors)
    choices = sorted(cartesian(*[range(k + 1) for _, _, k in groups]), key=lambda c: (sum(c), c))
    out = []
    seen = set()
    for choice in choices:
        g = SparsePoly.const(1, vars_)
        for (q, m, k), nx in zip(groups, choice):
            g = g * (yv + q.promote(vars_)) ** (k - nx) * xv ** (m * nx)
        key = _projective_key(g)
        if key in seen:
            continue
        seen.add(key)
        out.append(g)
    return out


def _projective_key(g: SparsePoly):
    lead = g.leading_coefficient()
    return g * lead.inverse() if g else g


def monomials_below(n: int, nvars: int) -> list:
    """Exponent tuples of total degree < n, ordered by degree then lexicographically."""
    out = []
    for d in range(n):
        out.extend(_monomials_of_degree(d, nvars))
    return out


def _monomials_of_degree(d: int, nvars: int):
    if nvars == 1:
        return [(d,)]
    out = []
    for a in range(d, -1, -1):
        for rest in _monomials_of_degree(d - a, nvars - 1):
            out.append((a,) + rest)
    return out


class _TruncatedSystem:
    """Span of {generator * monomial} below total degree N, in column form."""

    def __init__(self, gens: Sequence[SparsePoly], vars_: tuple, N: int, track: bool = False):
        self.gens = list(gens)
        self.vars = vars_
        self.N = N
        self.monos = monomials_below(N, len(vars_))
        self.col = {e: k for k, e in enumerate(self.monos)}
        self.span = EchelonSpan(track=track)
        self.multipliers = 0
        for gi, g in enumerate(self.gens):
            low = g.order()
            if low < 0 or low >= N:
                continue
            for mono in monomials_below(N - low, len(vars_)):
                vec = self._vector_of_product(g, mono)
                self.multipliers += 1
                if vec:
                    self.span.add(vec, (gi, mono))

    def _vector_of_product(self, g: SparsePoly, mono) -> dict:
        out = {}
        for e, c in g.terms.items():
            ee = tuple(a + b for a, b in zip(e, mono))
            k = self.col.get(ee)
            if k is not None:
                out[k] = c
        return out

    def vector(self, f: SparsePoly) -> dict:
        return {self.col[e]: c for e, c in f.terms.items() if sum(e) < self.N}

    def poly(self, vec: dict) -> SparsePoly:
        return SparsePoly._raw({self.monos[k]: c for k, c in vec.items()}, self.vars)


def _system(I: ProductIdeal, track: bool) -> _TruncatedSystem:
    key = ("system", track)
    got = I._cache.get(key)
    if got is None:
        got = _TruncatedSystem(I.gens(), I.vars, I.bound, track)
        I._cache[key] = got
    return got


def _certificate_system(I: ProductIdeal) -> _TruncatedSystem:
    """Tracked span over just the independent multipliers of the cached system."""
    got = I._cache.get("cert")
    if got is None:
        base = _system(I, False)
        got = _TruncatedSystem([], I.vars, I.bound, track=True)
        got.gens = base.gens
        for gi, mono in base.span.basis_tags:
            got.span.add(base._vector_of_product(base.gens[gi], mono), (gi, mono))
        I._cache["cert"] = got
    return got


def member(f: SparsePoly, I: ProductIdeal, certify: bool = True):
    """Decide f in I for a 2-variable product ideal.

    Returns ``(True, MembershipCertificate)`` or ``(False, RefutationCertificate)``;
    with ``certify=False`` the certificate slot is ``None`` for members.
    """
    if I.nvars != 2:
        raise ValueError("positive membership is only decidable in two variables; use member_refute_truncated")
    f = f.promote(I.vars)
    if I.is_unit:
        cert = MembershipCertificate(((f, 0),), SparsePoly.const(0, I.vars), 0) if certify else None
        return True, cert
    M = I.bound
    if not I.is_product:
        raise ValueError("membership by truncation needs a product ideal")
    system = _system(I, False)
    rem = system.span.residual(system.vector(f))
    if rem:
        return False, RefutationCertificate(M, system.multipliers, len(system.monos), system.span.rank, system.poly(rem))
    if not certify:
        return True, None
    cert_sys = _certificate_system(I)
    rem, combo = cert_sys.span.express(cert_sys.vector(f))
    assert not rem
    per_gen: dict = {}
    for (gi, mono), c in combo.items():
        term = SparsePoly._raw({mono: c}, I.vars)
        per_gen[gi] = per_gen.get(gi, SparsePoly.const(0, I.vars)) + term
    combination = tuple((per_gen[gi], gi) for gi in sorted(per_gen) if per_gen[gi])
    acc = SparsePoly.const(0, I.vars)
    gens = cert_sys.gens
    for coeff, gi in combination:
        acc = acc + coeff * gens[gi]
    return True, MembershipCertificate(combination, f - acc, M)


def member_refute_truncated(f: SparsePoly, generators: Sequence[SparsePoly], N: int):
    """Sound non-membership test: ``("NotMember", certificate)`` or ``("Unknown", None)``."""
    vars_ = _common_vars([f, *generators])
    gens = [g.promote(vars_) for g in generators]
    f = f.promote(vars_)
    system = _TruncatedSystem(gens, vars_, N)
    rem = system.span.residual(system.vector(f))
    if rem:
        cert = RefutationCertificate(N, system.multipliers, len(system.monos), system.span.rank, system.poly(rem))
        return "NotMember", cert
    return "Unknown", None


def _common_vars(polys) -> tuple:
    names = set()
    for p in polys:
        names |= set(p.vars)
    return tuple(v for v in ("x", "y", "z") if v in names)


def verify_integral_equation(f: SparsePoly, generators: Sequence[SparsePoly], certificate: IntegralCertificate) -> bool:
    """Expand f^n + sum_j a_j f^(n-j) and test for zero.

    Each a_j must be given as coefficient times j-fold generator products;
    anything else raises ``MalformedCertificate``.
    """
    n = certificate.equation_degree
    if not isinstance(n, int) or n < 1:
        raise MalformedCertificate("equation degree must be a positive integer")
    vars_ = _common_vars([f, *generators, *(t.coeff for t in certificate.terms)])
    gens = [g.promote(vars_) for g in generators]
    f = f.promote(vars_)
    a = {}
    for term in certificate.terms:
        if not 1 <= term.j <= n:
            raise MalformedCertificate(f"term degree {term.j} outside 1..{n}")
        if not term.products:
            raise MalformedCertificate("term lists no generator products")
        total = SparsePoly.const(0, vars_)
        for prod in term.products:
            if len(prod) != term.j:
                raise MalformedCertificate(
                    f"a_{term.j} needs {term.j}-fold products, got one of length {len(prod)}"
                )
            p = SparsePoly.const(1, vars_)
            for idx in prod:
                if not 0 <= idx < len(gens):
                    raise MalformedCertificate(f"generator index {idx} out of range")
                p = p * gens[idx]
            total = total + p
        a[term.j] = a.get(term.j, SparsePoly.const(0, vars_)) + term.coeff.promote(vars_) * total
    lhs = f**n
    for j, aj in a.items():
        lhs = lhs + aj * f ** (n - j)
    return lhs.is_zero()

