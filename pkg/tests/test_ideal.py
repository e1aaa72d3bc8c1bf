import pytest
import sympy

from merobound.admissibility import admissible
from merobound.arith import SparsePoly, series_solve
from merobound.errors import MalformedCertificate
from merobound.fixtures import load_fixture
from merobound.ideal import (
    IntegralCertificate,
    IntegralTerm,
    ProductIdeal,
    build_ideal,
    expand_generators,
    member,
    member_refute_truncated,
    monomials_below,
    verify_integral_equation,
)
from merobound.parser import parse

X, Y = sympy.symbols("x y")


def factors(*pairs):
    return ProductIdeal(tuple((parse(q), m) for q, m in pairs))


def groebner_member(f: SparsePoly, I: ProductIdeal) -> bool:
    """Independent check: reduce f by a Groebner basis of the generators."""
    gens = [sympy.sympify(str(g).replace("^", "**"), locals={"x": X, "y": Y}) for g in I.gens()]
    basis = sympy.groebner(gens, X, Y, order="grevlex", domain="QQ")
    target = sympy.sympify(str(f).replace("^", "**"), locals={"x": X, "y": Y})
    return basis.reduce(target)[1] == 0


SQUARED_IDEAL = [("x", 2), ("x", 2)]


# --- construction ----------------------------------------------------------------


def test_build_ideal_from_deviated_cusp():
    for g in ["(y+x+i*x^2)^2 - x^5", "(y+x+i*x^2)^2 - x^7"]:
        I = build_ideal(admissible(parse(g)).forms)
        assert I.factors == factors(*SQUARED_IDEAL).factors


def test_unit_ideal_contains_everything():
    I = build_ideal([])
    assert I.is_unit
    ok, cert = member(parse("1 + x"), I)
    assert ok and cert.replay(parse("1 + x"), [SparsePoly.const(1, ("x", "y"))])


@pytest.mark.parametrize(
    "pairs, expected",
    [
        (SQUARED_IDEAL, ["x^2 + 2*x*y + y^2", "x^3 + x^2*y", "x^4"]),
        ([("x", 2), ("2*x", 3)], ["(y+x)*(y+2*x)", "(y+x)*x^3", "(y+2*x)*x^2", "x^5"]),
        ([("x", 2)], ["y + x", "x^2"]),
    ],
)
def test_expand_generators(pairs, expected):
    got = expand_generators(factors(*pairs))
    assert got == [parse(e) for e in expected]


def test_factor_validation():
    with pytest.raises(ValueError):
        factors(("x + 1", 2))
    with pytest.raises(ValueError):
        factors(("x^2", 2))
    with pytest.raises(ValueError):
        ProductIdeal((), nvars=4)


# --- membership ------------------------------------------------------------------


@pytest.mark.parametrize("f, expected", [("(y+x)*x^2", True), ("x^3", False), ("y^4", True)])
def test_member_examples(f, expected):
    I = factors(*SQUARED_IDEAL)
    ok, cert = member(parse(f), I)
    assert ok is expected
    if ok:
        assert cert.replay(parse(f), I.gens())
    else:
        assert cert.truncation == 4 and not cert.normal_form.is_zero()


@pytest.mark.parametrize(
    "pairs",
    [SQUARED_IDEAL, [("x", 2), ("2*x", 3)], [("x + x^2", 4)], [("0", 1), ("x - x^2", 3), ("x", 2)]],
)
def test_membership_agrees_with_groebner(pairs):
    I = factors(*pairs)
    for exps in monomials_below(I.bound, 2):
        f = SparsePoly.monomial(exps)
        assert member(f, I, certify=False)[0] == groebner_member(f, I), exps
    for text in ["x^2*y + y^3", "(y+x)^2 - x^3", "y^2 + 3*x*y + 2*x^2", "x*y - y^2 + x^4"]:
        f = parse(text)
        assert member(f, I, certify=False)[0] == groebner_member(f, I), text


@pytest.mark.parametrize("pairs", [SQUARED_IDEAL, [("x", 2), ("2*x", 3)], [("x + x^2", 4)]])
def test_top_degree_monomials_are_members(pairs):
    I = factors(*pairs)
    M = I.bound
    for a in range(M + 1):
        ok, cert = member(parse(f"x^{a}*y^{M - a}"), I)
        assert ok and cert.replay(parse(f"x^{a}*y^{M - a}"), I.gens())


def test_three_variable_member_is_refused():
    with pytest.raises(ValueError):
        member(parse("x"), ProductIdeal((), 3, (parse("x", ("x", "y", "z")),)))


def test_swap_symmetry():
    # (y + q(x), x^m) written as (x + s(y), y^m) with x = -s(y) solving y + q(x) = 0
    q, m = parse("2*x + x^2"), 3
    I = ProductIdeal(((q, m),))
    inverse = series_solve(parse("x") + q.subs({"x": parse("y")}, vars=("x", "y")), m)
    swapped = ProductIdeal(((-inverse.truncate(m).to_poly(), m),))
    for exps in monomials_below(m + 1, 2):
        for text in ["y + 2*x + x^2", "x*y", "x + y"]:
            f = parse(text) * SparsePoly.monomial(exps)
            f_swapped = f.subs({"x": parse("y"), "y": parse("x")}, vars=("x", "y"))
            assert member(f, I, certify=False)[0] == member(f_swapped, swapped, certify=False)[0]


# --- three variables ----------------------------------------------------------------

XYZ = ("x", "y", "z")
REM = load_fixture("three_variables")


def rem_generators():
    return [parse(g, XYZ) for g in REM["generators"]]


def test_refutation_examples():
    gens = rem_generators()
    status, cert = member_refute_truncated(parse("(z+x+y)*x*y", XYZ), gens, 5)
    assert status == "NotMember" and cert.truncation == 5
    assert member_refute_truncated(parse("(z+x+y)^2", XYZ), gens, 5) == ("Unknown", None)
    assert member_refute_truncated(parse("z^5*x", XYZ), gens, 5) == ("Unknown", None)


def test_integral_equation_for_the_counterexample():
    u, a, b = "(z+x+y)", "(x^2+y^2)", "(x^2+2*y^2)"
    gens = rem_generators()
    # x^2 y^2 = -2 A^2 + 3 A B - B^2
    identity = parse(f"-2*{a}^2 + 3*{a}*{b} - {b}^2", XYZ)
    assert identity == parse("x^2*y^2", XYZ)
    one = SparsePoly.const(1, XYZ)
    cert = IntegralCertificate(
        2,
        (
            IntegralTerm(2, ((1, 1),), one * 2),
            IntegralTerm(2, ((1, 2),), one * -3),
            IntegralTerm(2, ((2, 2),), one),
        ),
    )
    assert verify_integral_equation(parse(f"{u}*x*y", XYZ), gens, cert)
    assert not verify_integral_equation(parse(f"{u}*x", XYZ), gens, cert)


def test_integral_equation_small_cases():
    gens = [parse("y"), parse("x^2")]
    one = SparsePoly.const(1, ("x", "y"))
    linear = IntegralCertificate(1, (IntegralTerm(1, ((0,),), -parse("x")),))
    assert verify_integral_equation(parse("x*y"), gens, linear)
    wrong_arity = IntegralCertificate(2, (IntegralTerm(2, ((1,),), -one),))
    with pytest.raises(MalformedCertificate):
        verify_integral_equation(parse("x"), gens, wrong_arity)


@pytest.mark.parametrize(
    "cert",
    [
        IntegralCertificate(0, ()),
        IntegralCertificate(2, (IntegralTerm(3, ((0, 0, 0),), SparsePoly.const(1, XYZ)),)),
        IntegralCertificate(2, (IntegralTerm(2, ((0, 9),), SparsePoly.const(1, XYZ)),)),
        IntegralCertificate(2, (IntegralTerm(2, (), SparsePoly.const(1, XYZ)),)),
    ],
)
def test_malformed_certificates(cert):
    with pytest.raises(MalformedCertificate):
        verify_integral_equation(parse("x*y", XYZ), rem_generators(), cert)
