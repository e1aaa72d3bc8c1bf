"""Conversions to and from sympy for the few operations delegated to it
(squarefree decomposition and gcd over Q(i))."""

from __future__ import annotations

from gmpy2 import mpq

from .gaussian import GaussianRational
from .poly import SparsePoly

__all__ = ["to_sympy", "from_sympy", "squarefree_decomposition", "poly_gcd", "exact_quotient"]


def _domain():
    from sympy import QQ_I

    return QQ_I


def _elem(c: GaussianRational):
    from sympy import Rational

    return _domain()(
        Rational(int(c.re.numerator), int(c.re.denominator)),
        Rational(int(c.im.numerator), int(c.im.denominator)),
    )


def to_sympy(p: SparsePoly):
    from sympy import Poly, symbols

    gens = symbols(" ".join(p.vars)) if len(p.vars) > 1 else (symbols(p.vars[0]),)
    data = {e: _elem(c) for e, c in p.items()}
    if not data:
        return Poly(0, *gens, domain=_domain())
    return Poly.from_dict(data, *gens, domain=_domain())


def from_sympy(P, vars) -> SparsePoly:
    dom = _domain()
    P = P.set_domain(dom) if P.get_domain() != dom else P
    names = [str(s) for s in P.gens]
    terms = {}
    for exps, c in P.terms():
        c = dom.convert(c) if not isinstance(c, type(dom.one)) else c
        full = [0] * len(vars)
        for name, k in zip(names, exps):
            full[vars.index(name)] = k
        terms[tuple(full)] = GaussianRational._make(
            mpq(int(c.x.numerator), int(c.x.denominator)), mpq(int(c.y.numerator), int(c.y.denominator))
        )
    return SparsePoly(terms, tuple(vars))


def squarefree_decomposition(p: SparsePoly):
    """``(constant, [(factor, multiplicity), ...])`` with pairwise coprime squarefree factors."""
    P = to_sympy(p)
    const, parts = P.sqf_list()
    c = _domain().convert(const)
    cq = GaussianRational._make(mpq(int(c.x.numerator), int(c.x.denominator)), mpq(int(c.y.numerator), int(c.y.denominator)))
    return cq, [(from_sympy(f, p.vars), k) for f, k in parts]


def poly_gcd(a: SparsePoly, b: SparsePoly) -> SparsePoly:
    vars_ = a.vars if len(a.vars) >= len(b.vars) else b.vars
    a, b = a.promote(vars_), b.promote(vars_)
    return from_sympy(to_sympy(a).gcd(to_sympy(b)), vars_)


def exact_quotient(a: SparsePoly, b: SparsePoly) -> SparsePoly:
    vars_ = a.vars
    return from_sympy(to_sympy(a).exquo(to_sympy(b.promote(vars_))), vars_)
