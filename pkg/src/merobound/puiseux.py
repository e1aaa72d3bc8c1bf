"""Newton polygons, Hensel splitting and the branch-cluster recursion.

A polynomial g(x, y) is first stripped of its x-power and split (Weierstrass)
into a unit times a monic polynomial W in y whose roots are the branches
through the origin.  W is then refined into clusters: groups of branches
that share every integer-exponent term up to the point where they are
either distinguished by a non-real coefficient, become fractional, or can no
longer be separated over Q(i).

Clusters are tracked in shifted coordinates w = y + S(x), where S is the
common real prefix found so far.  A branch y ~ c*x^mu therefore shows up
as a root c of an edge characteristic polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from .arith.gaussian import ONE, ZERO, GaussianRational
from .arith.poly import SparsePoly
from .arith.roots import gaussian_linear_roots, nonlinear_factors
from .arith.series import SeriesPoly, TruncSeries
from .arith.upoly import from_sparse, pdivmod, pmonic, pmul, psub, pxgcd, to_sparse, trim
from .errors import CapExceeded, NotCoprime, XFactorError

__all__ = [
    "Edge",
    "NewtonPolygon",
    "FactorCluster",
    "ClusterAnalysis",
    "newton_polygon",
    "hensel_split",
    "weierstrass_split",
    "analytic_clusters",
    "default_precision",
]


# ---------------------------------------------------------------------------
# polygon


@dataclass(frozen=True)
class Edge:
    """Segment of the lower-left hull from ``start`` (higher y-exponent) to ``end``."""

    start: tuple
    end: tuple
    char_poly: SparsePoly

    @property
    def height(self) -> int:
        return self.start[1] - self.end[1]

    @property
    def width(self) -> int:
        return self.end[0] - self.start[0]

    @property
    def slope(self) -> Fraction:
        return Fraction(-self.height, self.width)

    @property
    def branch_order(self) -> Fraction:
        """x-order of the branches this edge describes (y ~ c * x**order)."""
        return Fraction(self.width, self.height)


@dataclass(frozen=True)
class NewtonPolygon:
    support: tuple
    vertices: tuple
    edges: tuple


def _support_terms(p) -> dict:
    if isinstance(p, SeriesPoly):
        return {(n, j): a for j, c in enumerate(p.coeffs) for n, a in enumerate(c.coeffs) if a}
    ix, iy = p.index("x"), p.index("y")
    extra = [k for k in range(len(p.vars)) if k not in (ix, iy)]
    out = {}
    for e, c in p.items():
        if any(e[k] for k in extra):
            raise ValueError("Newton polygon needs a polynomial in x and y only")
        out[(e[ix], e[iy])] = c
    return out


def _polygon(terms: dict) -> NewtonPolygon:
    support = tuple(sorted(terms))
    if not terms:
        raise ValueError("zero polynomial has no Newton polygon")
    xmult = min(i for i, _ in terms)
    if xmult:
        raise XFactorError(xmult)
    best = {}
    for i, j in terms:
        if j not in best or i < best[j]:
            best[j] = i
    j0 = min(j for i, j in terms if i == 0)
    jmin = min(best)
    cur = (0, j0)
    vertices = [cur]
    edges = []
    while cur[1] > jmin:
        ci, cj = cur
        choice = None
        for j, i in best.items():
            if j >= cj:
                continue
            mu = Fraction(i - ci, cj - j)
            if choice is None or mu < choice[0] or (mu == choice[0] and j < choice[1][1]):
                choice = (mu, (i, j))
        mu, nxt = choice
        on_edge = {}
        for (i, j), c in terms.items():
            if nxt[1] <= j <= cj and Fraction(i - ci) == mu * (cj - j):
                on_edge[j - nxt[1]] = c
        char = SparsePoly._raw({(k,): c for k, c in on_edge.items()}, ("T",))
        edges.append(Edge(cur, nxt, char))
        vertices.append(nxt)
        cur = nxt
    return NewtonPolygon(support, tuple(vertices), tuple(edges))


def newton_polygon(p) -> NewtonPolygon:
    """Lower-left hull of the support of ``p`` (a ``SparsePoly`` or ``SeriesPoly``).

    Raises ``XFactorError`` when x divides p.
    """
    return _polygon(_support_terms(p))


# ---------------------------------------------------------------------------
# Hensel lifting


def _slices(F: SeriesPoly):
    return [trim(sl) for sl in F.x_slices()]


def _assemble(parts_by_n, cap: int) -> SeriesPoly:
    ydeg = max(len(p) for p in parts_by_n) - 1
    padded = [list(p) + [ZERO] * (ydeg + 1 - len(p)) for p in parts_by_n]
    return SeriesPoly.from_x_slices(padded, cap, ydeg)


def _lift_pair(slices, a0, b0, cap):
    """Lift F(0, v) = a0 * b0 (a0 monic, coprime to b0) to F = A * B mod x**cap."""
    g, _, t = pxgcd(a0, b0)
    if g != [ONE]:
        raise NotCoprime("factors of the reduction share a root")
    A, B = [a0], [b0]
    for n in range(1, cap):
        e = slices[n] if n < len(slices) else []
        for a in range(1, n):
            if A[a] and B[n - a]:
                e = psub(e, pmul(A[a], B[n - a]))
        an = pdivmod(pmul(t, e), a0)[1]
        bn, rem = pdivmod(psub(e, pmul(an, b0)), a0)
        if rem:
            raise AssertionError("Hensel step left a remainder")
        A.append(an)
        B.append(bn)
    return A, B


def _lift_factors(F: SeriesPoly, parts) -> list:
    """Lift a pairwise-coprime factorisation of F(0, v) into factors of F.

    ``parts`` are monic dense polynomials; returns SeriesPoly factors in the
    same order, each monic of the matching degree.
    """
    cap = F.cap
    slices = _slices(F)
    out = []
    rest_slices = slices
    for k, part in enumerate(parts[:-1]):
        cof = [ONE]
        for other in parts[k + 1 :]:
            cof = pmul(cof, other)
        lead = rest_slices[0][-1] if rest_slices[0] else ONE
        A, B = _lift_pair(rest_slices, part, pmul(cof, [lead]), cap)
        out.append(_assemble(A, cap))
        rest_slices = B
    out.append(_assemble(rest_slices, cap) if len(parts) > 1 else F)
    return out


def weierstrass_split(g: SeriesPoly):
    """Split g = W * U with W monic in y, W(0, y) = y**r and U(0, 0) != 0."""
    base = trim([c.coeffs[0] for c in g.coeffs])
    r = next(k for k, c in enumerate(base) if c)
    if r == 0:
        return SeriesPoly([TruncSeries.one(g.cap)], g.cap), g
    a0 = [ZERO] * r + [ONE]
    b0 = base[r:]
    A, B = _lift_pair(_slices(g), a0, b0, g.cap)
    return _assemble(A, g.cap), _assemble(B, g.cap)


# ---------------------------------------------------------------------------
# clusters


@dataclass(frozen=True)
class FactorCluster:
    """A monic factor of g in y grouping branches with a common expansion.

    ``status`` says why refinement stopped:

    * ``decided``: a non-real coefficient ``lead`` appeared at x^``mu``
    * ``real``: the factor has real coefficients and a single branch direction
    * ``fractional``: the next edge has a non-integer slope
    * ``linear``: a single branch (y-degree 1)
    * ``unsplit``: ``char_poly`` has no further roots in Q(i)
    """

    approximant: SeriesPoly
    y_degree: int
    x_precision: int
    provenance: tuple
    status: str
    prefix: TruncSeries
    real_exact: bool
    exact: Optional[SparsePoly] = None
    mu: Optional[Fraction] = None
    lead: Optional[GaussianRational] = None
    char_poly: Optional[SparsePoly] = None

    @property
    def r(self) -> int:
        return self.y_degree

    @property
    def prefix_is_real(self) -> bool:
        return self.prefix.is_real()


@dataclass(frozen=True)
class ClusterAnalysis:
    unit: SeriesPoly
    unit_constant: GaussianRational
    x_multiplicity: int
    clusters: tuple
    x_precision: int

    @property
    def unresolved(self) -> list:
        return [c for c in self.clusters if c.status == "unsplit"]

    @property
    def inconclusive(self) -> bool:
        return bool(self.unresolved)

    def reconstruct(self) -> SeriesPoly:
        """unit * prod(clusters), to the common precision (x-power excluded)."""
        acc = self.unit
        for c in self.clusters:
            acc = acc * c.approximant
        return acc


def default_precision(g: SparsePoly) -> int:
    return 4 * max(g.total_degree(), 1) + 8


@dataclass
class _Node:
    Q: SeriesPoly  # monic in w = y + S
    S: TruncSeries
    real: bool
    exact_w: Optional[SparsePoly]  # exact Q when known
    provenance: tuple
    depth: int = 0


def _w_poly(exact: SparsePoly, S: TruncSeries) -> SparsePoly:
    """exact(x, w - S) written back in the names (x, y) with y standing for w."""
    s_poly = S.to_poly(("x", "y"))
    return exact.subs({"y": SparsePoly.var("y") - s_poly}, vars=("x", "y"))


def _exact_series(p: SparsePoly, cap: int) -> SeriesPoly:
    sp = SeriesPoly.from_poly(p, cap)
    return sp.make_monic() if not sp.is_monic() else sp


def _monic_divides(candidate: SparsePoly, g: SparsePoly) -> bool:
    """Exact division of g by a polynomial monic in y."""
    d = candidate.degree("y")
    lead_terms = candidate.coefficients_in("y")
    if d < 0 or lead_terms.get(d) != SparsePoly.const(1, candidate.vars):
        return False
    rem = g
    yv = SparsePoly.var("y", g.vars)
    while not rem.is_zero() and rem.degree("y") >= d:
        k = rem.degree("y")
        top = rem.coefficients_in("y")[k]
        rem = rem - top * yv ** (k - d) * candidate
    return rem.is_zero()


def _shift_series(c: GaussianRational, mu: int, cap: int) -> TruncSeries:
    coeffs = [ZERO] * cap
    if mu < cap:
        coeffs[mu] = c
    return TruncSeries._raw(tuple(coeffs), cap)


def _rescale_down(Q: SeriesPoly, mu: int) -> SeriesPoly:
    """x^(-mu*k) Q(x, x^mu v) for Q monic of degree k whose first edge has order mu."""
    k = Q.degree
    cap = Q.cap - mu * k
    coeffs = [Q[j].divide_x(mu * (k - j)).truncate(cap) if j < k else TruncSeries.one(cap) for j in range(k + 1)]
    return SeriesPoly(coeffs, cap)


def _rescale_up(F: SeriesPoly, mu: int) -> SeriesPoly:
    d = F.degree
    cap = F.cap + mu
    coeffs = [F[j].shift(mu * (d - j)).truncate(cap) if j < d else TruncSeries.one(cap) for j in range(d + 1)]
    return SeriesPoly(coeffs, cap)


def _root_parts(chi_full):
    """Coprime monic parts of the characteristic polynomial.

    Each part is (dense poly, root or None); linear-root parts come first in
    (re, im) order, nonlinear cofactors after.
    """
    roots, _ = gaussian_linear_roots(to_sparse(chi_full))
    parts = []
    for root, mult in roots:
        lin = [ONE]
        for _ in range(mult):
            lin = pmul(lin, [-root, ONE])
        parts.append((lin, root))
    for fac, mult in nonlinear_factors(chi_full):
        power = [ONE]
        for _ in range(mult):
            power = pmul(power, fac)
        parts.append((power, None))
    return parts


class _Refiner:
    def __init__(self, root_exact: Optional[SparsePoly], depth_cap: int, x_precision: int):
        self.root_exact = root_exact
        self.depth_cap = depth_cap
        self.x_precision = x_precision
        self.done: list = []

    def finish(self, node: _Node, status: str, **extra) -> None:
        approx = node.Q.shift_y(node.S.truncate(node.Q.cap) if node.S.cap > node.Q.cap else _extend(node.S, node.Q.cap))
        exact = None
        if node.exact_w is not None:
            exact = node.exact_w.subs({"y": SparsePoly.var("y") + node.S.to_poly()}, vars=("x", "y"))
        self.done.append(
            FactorCluster(
                approximant=approx,
                y_degree=node.Q.degree,
                x_precision=approx.cap,
                provenance=node.provenance,
                status=status,
                prefix=node.S,
                real_exact=node.real,
                exact=exact,
                **extra,
            )
        )

    def partial(self, unit, unit_const, xmult):
        return ClusterAnalysis(unit, unit_const, xmult, tuple(self.done), self.x_precision)

    def refine(self, node: _Node) -> None:
        stack = [node]
        while stack:
            node = stack.pop()
            self._step(node, stack)

    def _step(self, node: _Node, stack) -> None:
        if node.depth > self.depth_cap:
            raise CapExceeded(f"cluster refinement exceeded depth {self.depth_cap}", cap="depth")
        k = node.Q.degree
        if k == 1:
            self.finish(node, "linear")
            return
        if node.exact_w is not None:
            poly = newton_polygon(node.exact_w) if not _is_pure_power(node.exact_w, k) else None
        else:
            poly = newton_polygon(node.Q)
        if poly is None or not poly.edges:
            if node.exact_w is not None:
                # exactly (y + S)^k with S real
                self.finish(replace(node, real=True), "real")
                return
            raise CapExceeded("x-precision exhausted before the cluster separated", cap="x_precision")
        edge = poly.edges[0]
        mu_frac = edge.branch_order
        if mu_frac.denominator != 1:
            self.finish(node, "fractional", mu=mu_frac)
            return
        mu = int(mu_frac)
        Q = node.Q
        if node.exact_w is not None:
            Q = _exact_series(node.exact_w, self.x_precision + mu * k)
        elif Q.cap <= mu * k:
            raise CapExceeded("x-precision too small to read the next edge", cap="x_precision")
        chi_full = trim([ZERO] * (k - edge.height) + list(from_sparse(edge.char_poly)))
        parts = _root_parts(chi_full)
        if len(parts) == 1:
            dense, root = parts[0]
            if root is None:
                self.finish(node, "unsplit", mu=mu_frac, char_poly=to_sparse(pmonic(chi_full)))
                return
            if not root.is_real():
                self.finish(node, "decided", mu=mu_frac, lead=root)
                return
            if node.real:
                self.finish(node, "real", mu=mu_frac, lead=root)
                return
            shift = _shift_series(root, mu, Q.cap)
            new_S = node.S - _shift_series(root, mu, node.S.cap)
            exact_w = None
            if node.exact_w is not None:
                exact_w = node.exact_w.subs(
                    {"y": SparsePoly.var("y") + root * SparsePoly.var("x") ** mu}, vars=("x", "y")
                )
            stack.append(
                _Node(
                    Q.shift_y(shift),
                    new_S,
                    node.real,
                    exact_w,
                    node.provenance + (f"shift {root}*x^{mu}",),
                    node.depth + 1,
                )
            )
            return
        scaled = _rescale_down(Q, mu)
        factors = _lift_factors(scaled, [d for d, _ in parts])
        children = []
        for (dense, root), fac in zip(parts, factors):
            F = _rescale_up(fac, mu)
            tag = f"split at x^{mu} by {to_sparse(dense)}"
            real = node.real and all(c.is_real() for c in dense)
            child = _Node(F, node.S, real, None, node.provenance + (tag,), node.depth + 1)
            child = self._try_exact(child)
            if root is None:
                chi = to_sparse(dense)
                self.finish(child, "unsplit", mu=mu_frac, char_poly=chi)
                continue
            if not root.is_real():
                self.finish(child, "decided", mu=mu_frac, lead=root)
                continue
            children.append(child)
        # keep the (re, im) order when popping from the stack
        stack.extend(reversed(children))

    def _try_exact(self, node: _Node) -> _Node:
        """Promote an approximant to an exact factor when it divides the input."""
        if self.root_exact is None:
            return node
        approx = node.Q.shift_y(_extend(node.S, node.Q.cap))
        cand = approx.to_poly()
        if cand.degree("y") != node.Q.degree or not _monic_divides(cand, self.root_exact):
            return node
        exact_w = _w_poly(cand, node.S)
        real = node.real or cand.is_real()
        return replace(node, exact_w=exact_w, real=real)


def _extend(S: TruncSeries, cap: int) -> TruncSeries:
    if S.cap >= cap:
        return S.truncate(cap)
    return TruncSeries._raw(S.coeffs + (ZERO,) * (cap - S.cap), cap)


def _is_pure_power(p: SparsePoly, k: int) -> bool:
    iy = p.index("y")
    return len(p.terms) == 1 and all(e[iy] == k and sum(e) == k for e in p.terms)


def analytic_clusters(g: SparsePoly, depth_cap: int = 64, x_precision: Optional[int] = None) -> ClusterAnalysis:
    """Split g into x-power, unit and monic branch clusters.

    Exact polynomial factors are kept exact as long as possible; after a
    Hensel split the factors are series approximants known mod
    x**x_precision (the precision shrinks by the scaled edge height at each
    split).  Clusters whose characteristic polynomial cannot be split over
    Q(i) are returned with status ``unsplit``; ``ClusterAnalysis.inconclusive``
    reports this.
    """
    if g.is_zero():
        raise ValueError("g must be nonzero")
    if x_precision is None:
        x_precision = default_precision(g)
    xmult = g.low_degree("x")
    if xmult:
        g = g.divide_by_monomial(tuple(xmult if v == "x" else 0 for v in g.vars))
    g = g.promote(("x", "y")) if g.vars != ("x", "y") else g
    gs = SeriesPoly.from_poly(g, x_precision)
    by_y = g.coefficients_in("y")
    ord_y = min(k for k, c in by_y.items() if c.constant_term())
    if ord_y == 0:
        return ClusterAnalysis(gs, gs[0][0], xmult, (), x_precision)
    deg_y = g.degree("y")
    refiner = _Refiner(g, depth_cap, x_precision)
    lead = by_y[deg_y]
    if deg_y == ord_y and lead.is_constant():
        c = lead.constant_term()
        W_exact = g * c.inverse()
        W = SeriesPoly.from_poly(W_exact, x_precision)
        U = SeriesPoly([TruncSeries((c,), x_precision)], x_precision)
    else:
        W, U = weierstrass_split(gs)
        W_exact = None
        cand = W.to_poly()
        if _monic_divides(cand, g):
            W_exact = cand
    unit_const = U[0][0]
    root = _Node(W, TruncSeries.zero(x_precision), g.is_real(), W_exact, ("weierstrass",))
    try:
        refiner.refine(root)
    except CapExceeded as exc:
        raise CapExceeded(str(exc), cap=exc.cap, partial=refiner.partial(U, unit_const, xmult)) from None
    return ClusterAnalysis(U, unit_const, xmult, tuple(refiner.done), x_precision)


def hensel_split(p, coprime_parts, x_precision: int) -> list:
    """Split p along the first edge of its Newton polygon.

    ``coprime_parts`` factor that edge's characteristic polynomial (padded
    by T^(k - height) when the edge does not reach the y = 0 line) into
    pairwise coprime pieces.  Returns monic clusters in the original y
    coordinate whose product agrees with p mod x**(x_precision - mu*k + mu).
    """
    if isinstance(p, FactorCluster):
        Q = p.approximant
    else:
        P = SeriesPoly.from_poly(p, x_precision)
        Q = P.make_monic() if not P.is_monic() else P
    k = Q.degree
    poly = newton_polygon(Q)
    edge = poly.edges[0]
    mu_frac = edge.branch_order
    if mu_frac.denominator != 1:
        raise ValueError("Hensel splitting needs an integer branch order")
    mu = int(mu_frac)
    if Q.cap <= mu * k:
        raise CapExceeded("x-precision too small to split", cap="x_precision")
    chi_full = trim([ZERO] * (k - edge.height) + list(from_sparse(edge.char_poly)))
    dense_parts = [pmonic(from_sparse(part)) for part in coprime_parts]
    prod = [ONE]
    for d in dense_parts:
        prod = pmul(prod, d)
    if prod != pmonic(chi_full):
        raise ValueError("parts do not multiply to the characteristic polynomial")
    for a in range(len(dense_parts)):
        for b in range(a + 1, len(dense_parts)):
            if pxgcd(dense_parts[a], dense_parts[b])[0] != [ONE]:
                raise NotCoprime(f"{to_sparse(dense_parts[a])} and {to_sparse(dense_parts[b])} share a root")
    if len(dense_parts) == 1:
        return [_plain_cluster(Q, ("unsplit input",))]
    factors = _lift_factors(_rescale_down(Q, mu), dense_parts)
    out = []
    for d, fac in zip(dense_parts, factors):
        F = _rescale_up(fac, mu)
        out.append(_plain_cluster(F, (f"split at x^{mu} by {to_sparse(d)}",)))
    return out


def _plain_cluster(F: SeriesPoly, provenance) -> FactorCluster:
    return FactorCluster(
        approximant=F,
        y_degree=F.degree,
        x_precision=F.cap,
        provenance=provenance,
        status="linear" if F.degree == 1 else "unsplit",
        prefix=TruncSeries.zero(F.cap),
        real_exact=False,
    )

