"""Randomised invariants, each run on at least 200 generated cases."""

from fractions import Fraction

from hypothesis import assume, given, settings
from hypothesis import strategies as st
from strategies import gaussians, nonzero_polys, polys, rationals

from merobound.admissibility import Outcome, admissible, check_factor
from merobound.arith import GaussianRational, SeriesPoly, SparsePoly, TruncSeries, gaussian_linear_roots, isolate_real_roots, series_solve
from merobound.arith.upoly import from_sparse, pmul, to_sparse
from merobound.blowup import dumps as tree_dumps
from merobound.blowup import monomialize, ord_divisor
from merobound.errors import CapExceeded
from merobound.ideal import ProductIdeal, member, member_refute_truncated
from merobound.jsonio import dumps, verdict_to_json
from merobound.oracle import SamplePlan, ratio_scan
from merobound.parser import parse
from merobound.puiseux import analytic_clusters

EXAMPLES = settings(max_examples=200)
XY = ("x", "y")
X = SparsePoly.var("x", XY)
Y = SparsePoly.var("y", XY)


def x_poly(coeffs, shift=0):
    """Polynomial sum c_k x^(k+shift) in the variables x, y."""
    return SparsePoly({(k + shift, 0): c for k, c in enumerate(coeffs) if c}, XY)


# --- arithmetic ----------------------------------------------------------------


@EXAMPLES
@given(polys(), polys(), polys())
def test_ring_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a - a == SparsePoly.const(0, XY)


@EXAMPLES
@given(st.lists(gaussians(), min_size=1, max_size=4))
def test_root_reconstruction(roots):
    dense = [GaussianRational(1)]
    for r in roots:
        dense = pmul(dense, [-r, GaussianRational(1)])
    u = to_sparse(dense)
    found, cofactor = gaussian_linear_roots(u)
    rebuilt = from_sparse(cofactor)
    for r, k in found:
        for _ in range(k):
            rebuilt = pmul(rebuilt, [-r, GaussianRational(1)])
    assert to_sparse(rebuilt) == u
    assert sum(k for _, k in found) == len(roots)
    assert {r for r, _ in found} == set(roots)


@EXAMPLES
@given(st.lists(rationals, min_size=1, max_size=4), st.integers(0, 2), st.integers(1, 5))
def test_isolation_is_complete(real_roots, pairs, shift):
    dense = [GaussianRational(1)]
    for r in real_roots:
        dense = pmul(dense, [GaussianRational(-r), GaussianRational(1)])
    for k in range(pairs):
        # x^2 + shift + k has no real roots
        dense = pmul(dense, [GaussianRational(shift + k), GaussianRational(0), GaussianRational(1)])
    iso = isolate_real_roots(to_sparse(dense))
    assert iso.real_count == len(real_roots)
    assert iso.nonreal_count == 2 * pairs
    cells = iso.intervals
    for r in set(real_roots):
        inside = [c for c in cells if c[0] <= r <= c[1]]
        assert len(inside) == 1 and inside[0][2] == real_roots.count(r)


@st.composite
def solvable_equations(draw):
    """F with F(0, 0) = 0 and an invertible y-derivative at the origin."""
    lead = draw(gaussians().filter(lambda c: c != 0))
    rest = draw(polys(max_terms=4, max_deg=3))
    rest = SparsePoly({e: c for e, c in rest.items() if e != (0, 0) and e != (0, 1)}, XY)
    return Y * lead + rest


@EXAMPLES
@given(solvable_equations(), st.integers(1, 10))
def test_series_solve_residual(F, cap):
    s = series_solve(F, cap)
    residual = SeriesPoly.from_poly(F, cap).evaluate_y(s)
    assert residual == TruncSeries.zero(cap)


# --- clusters ----------------------------------------------------------------------


@st.composite
def branch_products(draw):
    """unit * prod (y + a x + b x^2) + c x^n with small Gaussian data."""
    k = draw(st.integers(1, 3))
    g = SparsePoly.const(draw(gaussians().filter(lambda c: c != 0)), XY)
    for _ in range(k):
        a = draw(st.integers(-3, 3))
        b = draw(gaussians())
        g = g * (Y + X * a + X**2 * b)
    if draw(st.booleans()):
        g = g * (SparsePoly.const(1, XY) + X + Y * draw(st.integers(-2, 2)))
    n = draw(st.integers(2 * k, 2 * k + 3))
    return g + X**n * draw(gaussians())


@EXAMPLES
@given(branch_products())
def test_cluster_product_reconstruction(g):
    assume(not g.is_zero())
    try:
        analysis = analytic_clusters(g, x_precision=4 * g.degree() + 8)
    except CapExceeded:
        assume(False)
    stripped = g.divide_by_monomial((analysis.x_multiplicity, 0))
    cap = min([analysis.unit.cap] + [c.x_precision for c in analysis.clusters])
    assert analysis.reconstruct().truncate(cap) == SeriesPoly.from_poly(stripped, cap)
    assert analysis.unit.degree + sum(c.r for c in analysis.clusters) == g.degree("y")


@st.composite
def branch_data(draw):
    m = draw(st.sampled_from([2, 4]))
    r = draw(st.integers(1, 3))
    q = [Fraction(0), draw(rationals.filter(lambda v: v > 0))] + [draw(rationals) for _ in range(m - 2)]
    psi0 = GaussianRational(draw(rationals), draw(rationals.filter(lambda v: v > 0)))
    return q, m, psi0, r


@settings(max_examples=60)
@given(branch_data())
def test_branch_data_recovered(data):
    q, m, psi0, r = data
    w = Y + x_poly([GaussianRational(c) for c in q]) + X**m * psi0
    p = w**r - X ** (m * r + 1)
    verdict, form = check_factor(p)
    assert verdict.outcome is Outcome.HOLDS
    assert (form.m, form.psi0, form.r) == (m, psi0, r)
    assert [form.q[k] for k in range(m)] == [GaussianRational(c) for c in q]


# --- ideals ---------------------------------------------------------------------------


@st.composite
def product_ideals(draw, max_factors=2, max_m=3):
    factors = []
    for _ in range(draw(st.integers(1, max_factors))):
        m = draw(st.integers(1, max_m))
        coeffs = [0] + [draw(st.integers(-3, 3)) for _ in range(m - 1)]
        factors.append((x_poly([GaussianRational(c) for c in coeffs]), m))
    return ProductIdeal(tuple(factors))


@EXAMPLES
@given(product_ideals(max_factors=1, max_m=4), polys(max_terms=3, max_deg=2, real=True), polys(max_terms=5, max_deg=4, real=True))
def test_q_truncation_invariance(ideal, s, f):
    ((q, m),) = ideal.factors
    s = s.subs({"y": SparsePoly.const(0, XY)}, vars=XY)
    lifted = [Y + q + X**m * s, X**m]
    exact, _ = member(f, ideal, certify=False)
    status, _ = member_refute_truncated(f, lifted, m)
    assert exact == (status == "Unknown")


@EXAMPLES
@given(
    product_ideals(),
    st.lists(polys(max_terms=2, max_deg=2), min_size=1, max_size=3),
    polys(max_terms=3, max_deg=2),
)
def test_ideal_closure(ideal, multipliers, v):
    gens = ideal.gens()
    f = SparsePoly.const(0, XY)
    for k, c in enumerate(multipliers):
        f = f + c * gens[k % len(gens)]
    assert member(f, ideal, certify=False)[0]
    for factor in (X, Y, v):
        ok, cert = member(f * factor, ideal)
        assert ok and cert.replay(f * factor, gens)


# --- divisorial orders -------------------------------------------------------------------

TREES = [
    monomialize([parse("y"), parse("x^2")])[0],
    monomialize([parse("(y+x)^2"), parse("(y+x)*x^2"), parse("x^4")])[0],
    monomialize([parse("y^2 - x^3"), parse("x^4"), parse("x^2*y")])[0],
    monomialize(ProductIdeal(((parse("x"), 2), (parse("2*x - x^2"), 3))))[0],
]


@EXAMPLES
@given(st.sampled_from(TREES), nonzero_polys(max_terms=4, max_deg=4), nonzero_polys(max_terms=4, max_deg=4))
def test_valuation_additivity(tree, f, g):
    for d in tree.divisors:
        assert ord_divisor(f * g, tree, d) == ord_divisor(f, tree, d) + ord_divisor(g, tree, d)


# --- front end -----------------------------------------------------------------------------


@EXAMPLES
@given(st.sampled_from([("x", "y"), ("x", "y", "z")]).flatmap(lambda v: polys(vars=v, max_terms=6)))
def test_parser_round_trip(p):
    assert parse(str(p), p.vars) == p


@EXAMPLES
@given(st.integers(0, 2**32 - 1), st.sampled_from(["H2", "R2", "C2"]), nonzero_polys(max_terms=3, max_deg=3))
def test_json_determinism(seed, region, f):
    plan = SamplePlan(region, (2, 3, 4), 4, seed)
    gens = [parse("y + x"), parse("x^2")]
    assert ratio_scan(f, gens, plan).dumps() == ratio_scan(f, gens, plan).dumps()


@EXAMPLES
@given(product_ideals(max_factors=2, max_m=2), nonzero_polys(max_terms=3, max_deg=3))
def test_document_determinism(ideal, g):
    first, second = monomialize(ideal)[0], monomialize(ideal)[0]
    assert tree_dumps(first) == tree_dumps(second)
    g = g + Y
    assert dumps(verdict_to_json(admissible(g))) == dumps(verdict_to_json(admissible(g)))
