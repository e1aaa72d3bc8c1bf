import pytest

from merobound.arith import SparsePoly
from merobound.blowup import monomialize, transversal_arc, valuative_member
from merobound.oracle import (
    BOUNDED,
    DIVERGENT,
    EQUIVOCAL,
    SamplePlan,
    _hint,
    arc_hint,
    arc_ratio,
    equivalence_report,
    mutual_bound_report,
    ratio_scan,
    report_to_json,
)
from merobound.parser import parse

GENS = [parse("(y+x)^2"), parse("(y+x)*x^2"), parse("x^4")]
CURVES = ((parse("x"), 2),)
G = parse("(y+x+i*x^2)^2 - x^5")
LEVELS = tuple(range(4, 11))


def plan(region, **kw):
    return SamplePlan(region, LEVELS, 24, 7, CURVES, **kw)


def test_generator_over_generators_is_at_most_one():
    rep = ratio_scan(parse("(y+x)^2"), GENS, plan("C2"))
    assert max(rep.sups) <= 1.0
    assert rep.hint == BOUNDED


def test_non_member_diverges_on_real_points():
    rep = ratio_scan(parse("x^3"), GENS, plan("R2"))
    assert rep.hint == DIVERGENT
    assert all(g == pytest.approx(2.0, rel=0.05) for g in rep.growth[-3:])


def test_member_is_bounded_on_half_planes():
    assert ratio_scan(parse("(y+x)*x^2"), GENS, plan("H2")).hint == BOUNDED


def test_scan_is_deterministic():
    a = ratio_scan(parse("x^3 + y^3"), GENS, plan("C2"))
    b = ratio_scan(parse("x^3 + y^3"), GENS, plan("C2"))
    assert a.dumps() == b.dumps()
    assert set(a.to_json()) == {"levels", "sups", "growth", "hint"}


def test_plan_validation():
    with pytest.raises(ValueError):
        SamplePlan("H3")
    with pytest.raises(ValueError):
        SamplePlan("ARC")
    with pytest.raises(ValueError):
        SamplePlan("C2", levels=())


def test_zero_generator_rejected():
    with pytest.raises(ValueError):
        ratio_scan(parse("x"), [SparsePoly.const(0, ("x", "y"))], plan("C2"))


@pytest.mark.parametrize(
    "sups, expected",
    [
        ([0, 0, 0, 0], BOUNDED),
        ([1, 2, 4, 8, 16], DIVERGENT),
        ([1, 1.01, 1.02, 1.02], BOUNDED),
        ([1, 2, 2, 4, 4], EQUIVOCAL),
        ([1, 2], EQUIVOCAL),
    ],
)
def test_hint_thresholds(sups, expected):
    growth = [b / a for a, b in zip(sups, sups[1:])] if sups[0] else [0.0] * (len(sups) - 1)
    assert _hint(sups, growth) == expected


# --- arcs ----------------------------------------------------------------------------


@pytest.fixture(scope="module")
def y_x2():
    return monomialize([parse("y"), parse("x^2")])[0]


def test_arc_ratio_examples(y_x2):
    gens = [parse("y"), parse("x^2")]
    e2, e1 = transversal_arc(y_x2, "E2"), transversal_arc(y_x2, "E1")
    ks = range(2, 9)
    along_x = arc_ratio(parse("x"), gens, e2, ks)
    assert [r for _, r in along_x] == pytest.approx([2.0 ** (k - 1) for k in ks])
    assert arc_hint(along_x) == DIVERGENT
    along_xy = arc_ratio(parse("x*y"), gens, e2, ks)
    assert [r for _, r in along_xy] == pytest.approx([t / 2 for t, _ in along_xy])
    assert arc_hint(along_xy) != DIVERGENT
    along_y = arc_ratio(parse("y"), gens, e1, range(4, 14))
    assert along_y[-1][1] == pytest.approx(1.0, rel=1e-3)
    assert arc_hint(along_y) == BOUNDED


def test_arc_hints_match_valuative_membership(y_x2):
    gens = [parse("y"), parse("x^2")]
    for text in ["x", "y", "x*y", "x^2", "x + y", "x^3"]:
        f = parse(text)
        exact = valuative_member(f, gens, y_x2)
        for d in y_x2.divisors:
            hint = arc_hint(arc_ratio(f, gens, transversal_arc(y_x2, d), range(3, 12)))
            if exact:
                assert hint != DIVERGENT, (text, d.name)
        if not exact:
            hints = [arc_hint(arc_ratio(f, gens, transversal_arc(y_x2, d), range(3, 12))) for d in y_x2.divisors]
            assert DIVERGENT in hints, text


# --- equivalence -----------------------------------------------------------------------


def test_equivalence_member():
    rep = equivalence_report(parse("(y+x)*x^2"), G, levels=LEVELS, samples=24)
    assert rep["member"] and rep["agree"]
    assert all(r.hint == BOUNDED for r in rep["conditions"].values())


def test_equivalence_non_member():
    rep = equivalence_report(parse("x^3"), G, levels=LEVELS, samples=24)
    assert not rep["member"] and rep["agree"]
    assert all(r.hint == DIVERGENT for r in rep["conditions"].values())


def test_equivalence_zero():
    rep = equivalence_report(SparsePoly.const(0, ("x", "y")), G, levels=LEVELS, samples=8)
    assert rep["member"]
    assert all(max(r.sups) == 0 and r.hint == BOUNDED for r in rep["conditions"].values())


def test_equivalence_requires_admissible_g():
    with pytest.raises(ValueError):
        equivalence_report(parse("x"), parse("y + x"))


def test_mutual_bounds():
    rep = mutual_bound_report(G, GENS, plan("H2"))
    assert rep["g_over_gens"].hint == BOUNDED
    assert rep["gens_over_g"].hint == BOUNDED


def test_report_json_is_deterministic():
    a = report_to_json(equivalence_report(parse("x^3"), G, levels=LEVELS, samples=8, seed=3))
    b = report_to_json(equivalence_report(parse("x^3"), G, levels=LEVELS, samples=8, seed=3))
    assert a == b


def test_three_variable_ratio():
    xyz = ("x", "y", "z")
    gens = [parse(t, xyz) for t in ["(z+x+y)^2", "(z+x+y)*(x^2+y^2)", "(z+x+y)*(x^2+2*y^2)", "(x^2+y^2)*(x^2+2*y^2)"]]
    rep = ratio_scan(parse("(z+x+y)*x*y", xyz), gens, SamplePlan("C2", LEVELS, 24, 1, nvars=3))
    assert rep.hint != DIVERGENT
