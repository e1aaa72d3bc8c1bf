"""Exact real-root isolation (Sturm) and Q(i)-rational root splitting."""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from ..errors import NonRealCoefficients
from .gaussian import ONE, GaussianRational
from .poly import SparsePoly
from .upoly import from_sparse, pderiv, pdivmod, peval, pmonic, pmul, squarefree_parts, to_sparse, trim

__all__ = [
    "RealRootIsolation",
    "isolate_real_roots",
    "gaussian_linear_roots",
    "sturm_sequence",
]


@dataclass(frozen=True)
class RealRootIsolation:
    """Disjoint rational intervals, one real root each, with multiplicities.

    No interval has zero in its interior, and an endpoint is a root only
    for degenerate intervals, so a root is non-negative exactly when its
    lower endpoint is.
    """

    intervals: list
    polynomial: SparsePoly
    nonreal_count: int
    degree: int = field(default=0)

    @property
    def real_count(self) -> int:
        return sum(m for _, _, m in self.intervals)

    def all_real(self) -> bool:
        return self.nonreal_count == 0

    def has_nonnegative_root(self) -> bool:
        return any(lo >= 0 for lo, _, _ in self.intervals)

    def exact_roots(self) -> list:
        return [(lo, m) for lo, hi, m in self.intervals if lo == hi]


def sturm_sequence(p):
    seq = [p, pderiv(p)]
    while len(seq[-1]) > 1:
        r = pdivmod(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def _sign(c: GaussianRational) -> int:
    return (c.re > 0) - (c.re < 0)


def _variations(seq, t) -> int:
    prev, count = 0, 0
    for q in seq:
        s = _sign(peval(q, t))
        if s:
            if prev and s != prev:
                count += 1
            prev = s
    return count


def _cauchy_bound(p) -> mpq:
    lead = abs(p[-1].re)
    return 1 + max(abs(c.re) / lead for c in p[:-1]) if len(p) > 1 else mpq(1)


def _isolate_squarefree(p):
    """Isolating intervals for a real squarefree dense polynomial.

    Works on half-open (lo, hi] cells; a root hit exactly by a bisection
    point becomes a degenerate interval.
    """
    if len(p) <= 1:
        return []
    seq = sturm_sequence(p)
    bound = mpq(int(_cauchy_bound(p)) + 1)
    qi = lambda v: GaussianRational(v)  # noqa: E731

    def count(lo, hi):
        return _variations(seq, qi(lo)) - _variations(seq, qi(hi))

    def is_root(t):
        return not peval(p, qi(t))

    out = []
    stack = [(mpq(0), bound), (-bound, mpq(0))]
    while stack:
        lo, hi = stack.pop()
        n = count(lo, hi)
        if n == 0:
            continue
        if n == 1:
            if is_root(hi):
                out.append((hi, hi))
                continue
            # lo may coincide with a root owned by a neighbouring cell
            while is_root(lo):
                mid = (lo + hi) / 2
                if is_root(mid):
                    lo = hi = mid
                    break
                if count(mid, hi) == 1:
                    lo = mid
                else:
                    hi = mid
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((mid, hi))
        stack.append((lo, mid))
    out.sort()
    # closed intervals must not touch; shrink the left one of a touching pair
    for k in range(len(out) - 1):
        lo, hi = out[k]
        while lo != hi and hi >= out[k + 1][0]:
            mid = (lo + hi) / 2
            if is_root(mid):
                lo = hi = mid
            elif count(lo, mid) == 1:
                hi = mid
            else:
                lo = mid
        out[k] = (lo, hi)
    return out


def isolate_real_roots(u: SparsePoly) -> RealRootIsolation:
    if u.is_zero():
        raise ValueError("cannot isolate the roots of the zero polynomial")
    if not u.is_real():
        raise NonRealCoefficients(f"{u} has non-real coefficients")
    dense = from_sparse(u)
    deg = len(dense) - 1
    parts = squarefree_parts(dense)
    radical = [ONE]
    for _, f in parts:
        radical = pmul(radical, f)
    exact, rest = _rational_roots(radical)
    cells = [(r, r) for r in exact] + _avoid_points(_isolate_squarefree(rest), rest, exact)
    cells.sort()
    intervals = []
    for lo, hi in cells:
        mult = _multiplicity_in(parts, lo, hi)
        intervals.append((lo, hi, mult))
    real = sum(m for _, _, m in intervals)
    return RealRootIsolation(intervals, u, deg - real, deg)


def _rational_roots(radical):
    """Rational roots of a squarefree real polynomial and the quotient without them."""
    roots, _ = gaussian_linear_roots(to_sparse(radical))
    exact = [r.re for r, _ in roots if r.is_real()]
    rest = radical
    for r in exact:
        rest, rem = pdivmod(rest, [GaussianRational(-r), ONE])
        assert not trim(rem)
    return exact, rest


def _avoid_points(cells, p, points):
    """Shrink isolating cells of p until none contains one of ``points``."""
    if not points:
        return cells
    seq = sturm_sequence(p)
    qi = lambda v: GaussianRational(v)  # noqa: E731

    def count(lo, hi):
        return _variations(seq, qi(lo)) - _variations(seq, qi(hi))

    out = []
    for lo, hi in cells:
        while lo != hi and any(lo <= t <= hi for t in points):
            t = next(t for t in points if lo <= t <= hi)
            # t is not a root of p, so the root lies strictly on one side
            if count(lo, t) == 1 and t != lo:
                hi = t
            else:
                lo = t
            mid = (lo + hi) / 2
            if count(lo, mid) == 1:
                hi = mid
            else:
                lo = mid
        out.append((lo, hi))
    return out


def _multiplicity_in(parts, lo, hi) -> int:
    qi = lambda v: GaussianRational(v)  # noqa: E731
    for mult, f in parts:
        if lo == hi:
            if not peval(f, qi(lo)):
                return mult
            continue
        seq = sturm_sequence(f)
        if _variations(seq, qi(lo)) - _variations(seq, qi(hi)) or not peval(f, qi(lo)):
            return mult
    raise AssertionError("isolated root not found in any squarefree part")


def _to_sympy_poly(dense):
    from sympy import QQ_I, Poly, Symbol

    coeffs = [QQ_I(_sym_rat(c.re), _sym_rat(c.im)) for c in reversed(dense)]
    return Poly(coeffs, Symbol("T"), domain=QQ_I)


def _sym_rat(v):
    from sympy import Rational

    return Rational(int(v.numerator), int(v.denominator))


def _from_sympy_elem(e) -> GaussianRational:
    from sympy import QQ_I

    e = QQ_I.from_sympy(e)
    re, im = e.x, e.y
    return GaussianRational._make(mpq(int(re.numerator), int(re.denominator)), mpq(int(im.numerator), int(im.denominator)))


def gaussian_linear_roots(u: SparsePoly):
    """Roots of ``u`` in Q(i) with multiplicities, plus the root-free cofactor.

    Returns ``(roots, cofactor)`` with roots sorted by (re, im) and
    ``cofactor * prod (T - root)**mult == u``.
    """
    if u.is_zero():
        raise ValueError("the zero polynomial has no root decomposition")
    var = u.vars[0] if len(u.vars) == 1 else "T"
    dense = from_sparse(u)
    if len(dense) <= 1:
        return [], to_sparse(dense, var)
    _, factors = _to_sympy_poly(dense).factor_list()
    roots = []
    linear = [ONE]
    for fac, mult in factors:
        if fac.degree() != 1:
            continue
        a, b = (_from_sympy_elem(c) for c in fac.all_coeffs())
        r = -b / a
        roots.append((r, mult))
        for _ in range(mult):
            linear = pmul(linear, [-r, ONE])
    roots.sort(key=lambda rm: rm[0].sort_key())
    cofactor, rem = pdivmod(dense, linear)
    assert not rem
    return roots, to_sparse(cofactor, var)


def nonlinear_factors(dense):
    """Monic Q(i)-irreducible factors of degree > 1 with multiplicities."""
    if len(dense) <= 2:
        return []
    _, factors = _to_sympy_poly(dense).factor_list()
    out = []
    for fac, mult in factors:
        if fac.degree() > 1:
            coeffs = [_from_sympy_elem(c) for c in reversed(fac.all_coeffs())]
            out.append((pmonic(trim(coeffs)), mult))
    return out


def real_parts_all(dense) -> bool:
    return all(c.is_real() for c in dense)

