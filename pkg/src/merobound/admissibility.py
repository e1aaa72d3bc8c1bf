"""Decide whether g vanishes on the closed local bi-upper-half-plane only at 0.

Every branch of g must look like y + q(x) + x^m * psi(x^(1/r)) with q a real
series, q'(0) > 0, m even and Im psi(0) > 0.  For each cluster of branches
the average h = a_(r-1) / r of the (monic) cluster polynomial carries q and
psi(0) as its first non-real coefficient; the remaining branch data is
verified by a weighted-degree test in the shifted coordinate w = y + h.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import factorial
from typing import Optional, Sequence, Union

from .arith.bridge import squarefree_decomposition
from .arith.gaussian import GaussianRational
from .arith.poly import SparsePoly
from .arith.roots import isolate_real_roots
from .arith.series import SeriesPoly, TruncSeries, series_solve
from .errors import CapExceeded, NotSolvable
from .puiseux import FactorCluster, analytic_clusters, default_precision, newton_polygon

__all__ = [
    "Outcome",
    "Failure",
    "Witness",
    "Verdict",
    "FactorForm",
    "QMData",
    "extract_h",
    "detect_qm",
    "check_factor",
    "admissible",
]


class Outcome(str, Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    INCONCLUSIVE = "Inconclusive"


class Failure(str, Enum):
    X_FACTOR = "XFactor"
    NON_REAL_LEADING = "NonRealLeading"
    NON_POSITIVE_SLOPE = "NonPositiveSlope"
    ALL_REAL = "AllReal"
    ODD_M = "OddM"
    NON_POSITIVE_IM_PSI = "NonPositiveImPsi"
    SHIFTED_POLYGON = "ShiftedPolygonViolation"
    # reasons for an inconclusive verdict
    UNSPLIT = "UnsplitCharPoly"
    CAP = "CapExceeded"
    PRECISION = "PrecisionExhausted"


@dataclass(frozen=True)
class Witness:
    kind: Failure
    data: dict = field(default_factory=dict)

    def __str__(self):
        if not self.data:
            return self.kind.value
        body = ", ".join(f"{k}={v}" for k, v in self.data.items())
        return f"{self.kind.value}({body})"


@dataclass(frozen=True)
class FactorForm:
    """Branch data (q, m, psi(0), r) of one admissible cluster.

    ``q`` holds the real part of the expansion below x^m; ``ramification_hint``
    is the x-order of the shifted branches (its denominator is the
    ramification index when they are fractional).
    """

    q: TruncSeries
    m: int
    psi0: GaussianRational
    r: int
    ramification_hint: Optional[Fraction] = None

    def __post_init__(self):
        if self.q.cap != self.m:
            raise ValueError("q must be recorded exactly through degree m-1")
        if not self.q.is_real() or self.q[0]:
            raise ValueError("q must be real with zero constant term")
        if self.m < 2 or self.m % 2:
            raise ValueError("m must be a positive even integer")
        if not self.q[1].re > 0:
            raise ValueError("q'(0) must be positive")
        if not self.psi0.im > 0:
            raise ValueError("Im psi(0) must be positive")

    def q_poly(self, vars=("x", "y")) -> SparsePoly:
        return self.q.to_poly(vars)


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    witness: Optional[Witness] = None
    forms: tuple = ()

    @property
    def holds(self) -> bool:
        return self.outcome is Outcome.HOLDS

    @property
    def fails(self) -> bool:
        return self.outcome is Outcome.FAILS

    @classmethod
    def fail(cls, kind: Failure, **data) -> "Verdict":
        return cls(Outcome.FAILS, Witness(kind, data))

    @classmethod
    def unknown(cls, kind: Failure, **data) -> "Verdict":
        return cls(Outcome.INCONCLUSIVE, Witness(kind, data))


@dataclass(frozen=True)
class QMData:
    """Result of reading h: either (q, m, psi0), a certified all-real h, or undecided."""

    kind: str  # "qm" | "all_real" | "inconclusive"
    q: Optional[TruncSeries] = None
    m: Optional[int] = None
    psi0: Optional[GaussianRational] = None
    cap: Optional[int] = None


ClusterLike = Union[FactorCluster, SparsePoly]


def _exact_of(p: ClusterLike) -> Optional[SparsePoly]:
    if isinstance(p, SparsePoly):
        return p
    return p.exact


def _degree_of(p: ClusterLike) -> int:
    if isinstance(p, SparsePoly):
        return p.degree("y")
    return p.y_degree


def extract_h(p: ClusterLike, cap: int) -> TruncSeries:
    """The series h with (1/r!) d^(r-1)p/dy^(r-1) (x, -h(x)) = 0 mod x**cap."""
    r = _degree_of(p)
    exact = _exact_of(p)
    if exact is not None and exact.degree("y") == r:
        F = exact.derivative("y", r - 1) / factorial(r)
        return -series_solve(F, cap)
    approx: SeriesPoly = p.approximant
    if not approx.is_monic():
        approx = approx.make_monic()
    a = approx[r - 1]
    if a[0]:
        raise NotSolvable("cluster is not centred at the origin")
    cap = min(cap, approx.cap)
    return a.truncate(cap) * GaussianRational(Fraction(1, r))


def _certified_real(p: ClusterLike) -> bool:
    if isinstance(p, FactorCluster) and p.real_exact:
        return True
    exact = _exact_of(p)
    if exact is None:
        return False
    r = exact.degree("y")
    by_y = exact.coefficients_in("y")
    zero = SparsePoly.const(0, exact.vars)
    top, nxt = by_y.get(r, zero), by_y.get(r - 1, zero)
    return nxt * top.conjugate() == nxt.conjugate() * top


def detect_qm(h: TruncSeries, p: ClusterLike) -> QMData:
    m = h.first_nonreal()
    if m is not None:
        return QMData("qm", h.truncate(m) if m else None, m, h[m])
    if _certified_real(p):
        return QMData("all_real")
    return QMData("inconclusive", cap=h.cap)


def _shifted_terms(p: ClusterLike, shift: SparsePoly, need: int):
    """Support (w-exponent, x-exponent) of p in w = y + shift, or None if too imprecise."""
    exact = _exact_of(p)
    if exact is not None:
        w = exact.subs({"y": SparsePoly.var("y") - shift}, vars=("x", "y"))
        return {(e[1], e[0]) for e in w.terms}, None
    approx: SeriesPoly = p.approximant
    if approx.cap <= need:
        return None, approx.cap
    s = TruncSeries.from_poly(shift, approx.cap)
    shifted = approx.shift_y(-s)
    return {(j, n) for n, j in shifted.support()}, None


def check_factor(p: ClusterLike, cap: Optional[int] = None):
    """Check one cluster; returns ``(Verdict, FactorForm or None)``."""
    r = _degree_of(p)
    if cap is None:
        exact = _exact_of(p)
        cap = default_precision(exact) if exact is not None else p.x_precision
    try:
        h = extract_h(p, cap)
    except NotSolvable as exc:
        return Verdict.unknown(Failure.PRECISION, reason=str(exc)), None
    found = detect_qm(h, p)
    status = getattr(p, "status", None)
    if found.kind == "all_real":
        # a real average can hide non-real branch directions (y^2 + x^2)
        exact = _exact_of(p)
        if exact is not None and exact.degree("y") == r and not exact.low_degree("x"):
            leading = _root_check(exact, r)
            if leading is not None:
                return leading, None
        return Verdict.fail(Failure.ALL_REAL, r=r), None
    if found.kind == "inconclusive":
        if status == "fractional":
            # a fractional term follows a real prefix: no branch can be admissible
            return Verdict.fail(Failure.SHIFTED_POLYGON, branch_order=p.mu), None
        return Verdict.unknown(Failure.PRECISION, cap=found.cap), None
    m, psi0 = found.m, found.psi0
    q = found.q
    if m == 1:
        return Verdict.fail(Failure.NON_REAL_LEADING, coefficient=h[1]), None
    if not q[1].re > 0:
        return Verdict.fail(Failure.NON_POSITIVE_SLOPE, slope=q[1]), None
    if m % 2:
        return Verdict.fail(Failure.ODD_M, m=m), None
    if not psi0.im > 0:
        return Verdict.fail(Failure.NON_POSITIVE_IM_PSI, psi0=psi0), None
    shift = h.truncate(m + 1).to_poly()
    terms, short = _shifted_terms(p, shift, m * r)
    if terms is None:
        return Verdict.unknown(Failure.PRECISION, cap=short, needed=m * r + 1), None
    deviation = None
    for i, j in sorted(terms):
        if (i, j) == (r, 0):
            continue
        if not m * i + j > m * r:
            return Verdict.fail(Failure.SHIFTED_POLYGON, term=(i, j), m=m, r=r), None
        if i < r:
            order = Fraction(j, r - i)
            deviation = order if deviation is None else min(deviation, order)
    form = FactorForm(q, m, psi0, r, deviation)
    return Verdict(Outcome.HOLDS, forms=((form, 1),)), form


def _decide_unsplit(c: FactorCluster) -> Verdict:
    """Decide a cluster whose characteristic polynomial has no Q(i) roots."""
    chi = c.char_poly / c.char_poly.leading_coefficient()
    mu = int(c.mu)
    if not chi.is_real():
        # a monic polynomial with a non-real coefficient has a non-real root
        if mu == 1:
            return Verdict.fail(Failure.NON_REAL_LEADING, char_poly=str(chi))
        if mu % 2:
            return Verdict.fail(Failure.ODD_M, m=mu, char_poly=str(chi))
        return Verdict.unknown(Failure.UNSPLIT, char_poly=str(chi), m=mu)
    iso = isolate_real_roots(chi)
    if iso.nonreal_count:
        if mu == 1:
            return Verdict.fail(Failure.NON_REAL_LEADING, char_poly=str(chi))
        if mu % 2:
            return Verdict.fail(Failure.ODD_M, m=mu, char_poly=str(chi))
        # conjugate roots: one of them has negative imaginary part
        return Verdict.fail(Failure.NON_POSITIVE_IM_PSI, char_poly=str(chi))
    if mu == 1 and iso.has_nonnegative_root():
        return Verdict.fail(Failure.NON_POSITIVE_SLOPE, char_poly=str(chi))
    return Verdict.unknown(Failure.UNSPLIT, char_poly=str(chi), branch_order=mu)


def _root_check(part: SparsePoly, r: int) -> Optional[Verdict]:
    """Leading-order test: every branch must be y ~ c*x with c real negative."""
    poly = newton_polygon(part)
    first = poly.vertices.index((0, r)) if (0, r) in poly.vertices else None
    edges = poly.edges[first:] if first is not None else ()
    if len(edges) != 1 or edges[0].end != (r, 0):
        orders = [str(e.branch_order) for e in edges]
        return Verdict.fail(Failure.NON_POSITIVE_SLOPE, branch_orders=orders)
    chi = edges[0].char_poly
    chi = chi / chi.leading_coefficient()
    if not chi.is_real():
        return Verdict.fail(Failure.NON_REAL_LEADING, char_poly=str(chi))
    iso = isolate_real_roots(chi)
    if iso.nonreal_count:
        return Verdict.fail(Failure.NON_REAL_LEADING, char_poly=str(chi))
    if iso.has_nonnegative_root():
        return Verdict.fail(Failure.NON_POSITIVE_SLOPE, char_poly=str(chi))
    return None


def _combine(verdicts: Sequence[Verdict]) -> Verdict:
    for v in verdicts:
        if v.fails:
            return v
    for v in verdicts:
        if v.outcome is Outcome.INCONCLUSIVE:
            return v
    forms = tuple(f for v in verdicts for f in v.forms)
    return Verdict(Outcome.HOLDS, forms=forms)


def _check_part(part: SparsePoly, mult: int, depth_cap: int, x_precision: Optional[int]) -> Verdict:
    part = part.promote(("x", "y")) if part.vars != ("x", "y") else part
    by_y = part.coefficients_in("y")
    r = min(k for k, c in by_y.items() if c.constant_term())
    if r == 0:
        return Verdict(Outcome.HOLDS)
    early = _root_check(part, r)
    if early is not None:
        return early
    try:
        analysis = analytic_clusters(part, depth_cap=depth_cap, x_precision=x_precision)
    except CapExceeded as exc:
        return Verdict.unknown(Failure.CAP, cap=exc.cap, message=str(exc))
    results = []
    for cluster in analysis.clusters:
        if cluster.status == "unsplit":
            results.append(_decide_unsplit(cluster))
            continue
        verdict, form = check_factor(cluster)
        if form is not None:
            verdict = Verdict(Outcome.HOLDS, forms=((form, mult),))
        results.append(verdict)
    return _combine(results)


def admissible(
    g: SparsePoly,
    *,
    factors: Optional[Sequence[SparsePoly]] = None,
    depth_cap: int = 64,
    x_precision: Optional[int] = None,
) -> Verdict:
    """Classify g; ``Holds`` carries ``(FactorForm, multiplicity)`` pairs.

    ``factors`` optionally supplies a user factorisation of g (as in the
    source expression); each factor is analysed on its own.
    """
    if g.is_zero():
        raise ValueError("g must be nonzero")
    g = g.promote(("x", "y")) if g.vars != ("x", "y") else g
    xmult = g.low_degree("x")
    if xmult:
        return Verdict.fail(Failure.X_FACTOR, multiplicity=xmult)
    pieces = list(factors) if factors else [g]
    parts: dict = {}
    order = []
    for piece in pieces:
        piece = piece.promote(("x", "y")) if piece.vars != ("x", "y") else piece
        if piece.is_constant():
            continue
        _, sqf = squarefree_decomposition(piece)
        for f, k in sqf:
            key = _normalise(f)
            if key not in parts:
                order.append(key)
                parts[key] = 0
            parts[key] += k
    verdicts = [_check_part(p, parts[p], depth_cap, x_precision) for p in order]
    return _combine(verdicts)


def _normalise(f: SparsePoly) -> SparsePoly:
    lead = f.leading_coefficient()
    return f * lead.inverse()
