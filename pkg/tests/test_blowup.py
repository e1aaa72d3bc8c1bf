import json
import math

import pytest
import sympy

from merobound.arith import SparsePoly
from merobound.blowup import (
    INFINITE_ORDER,
    BlowupTree,
    blow_up,
    dumps,
    monomialize,
    ord_divisor,
    real_points_check,
    transversal_arc,
    valuative_member,
)
from merobound.errors import CapExceeded
from merobound.ideal import ProductIdeal, member
from merobound.parser import parse

X, Y = sympy.symbols("x y")


def gens(*texts):
    return [parse(t) for t in texts]


@pytest.fixture(scope="module")
def y_x2():
    tree, _ = monomialize(gens("y", "x^2"))
    return tree


SQUARED = ProductIdeal(((parse("x"), 2), (parse("x"), 2)))


# --- single blow-ups --------------------------------------------------------------


def test_first_blowup_charts():
    from merobound.blowup import _new_tree

    tree = blow_up(_new_tree(gens("y")), 0, (0, 0))
    a, b = tree.chart(1), tree.chart(2)
    assert a.pullback(parse("y")) == parse("x*y")
    assert b.pullback(parse("y")) == parse("y")
    assert a.pullback(parse("x^2")) == parse("x^2")
    assert ord_divisor(parse("x^2"), tree, "E1") == 2


def test_second_blowup_makes_ideal_principal(y_x2):
    chart = y_x2.chart(y_x2.divisor("E2").chart_a)
    assert chart.pullback(parse("y")) == parse("x^2*y")
    assert chart.pullback(parse("x^2")) == parse("x^2")


# --- monomialize -------------------------------------------------------------------


def test_monomialize_y_x2(y_x2):
    assert y_x2.steps == 2
    assert y_x2.order_table() == {
        "E1": {"generators": [1, 2], "ideal": 1},
        "E2": {"generators": [2, 2], "ideal": 2},
    }


def test_monomialize_squared_ideal():
    tree, _ = monomialize(SQUARED)
    assert tree.steps == 2
    assert tree.order_table()["E2"]["ideal"] == 4


def test_monomialize_maximal_ideal():
    tree, _ = monomialize(gens("y", "x"))
    assert tree.steps == 1
    assert tree.order_table()["E1"]["ideal"] == 1


def test_step_cap_reports_partial_tree():
    with pytest.raises(CapExceeded) as info:
        monomialize(gens("y", "x^5"), max_blowups=2)
    assert isinstance(info.value.partial, BlowupTree)
    assert info.value.partial.steps == 2


def to_sympy(p):
    return sympy.sympify(str(p).replace("^", "**"), locals={"x": X, "y": Y})


def principal_at(pulls, point):
    """Some pullback divides every other one in the local ring at ``point``."""
    at = {X: point[0], Y: point[1]}
    for lead in pulls:
        ratios = [sympy.fraction(sympy.cancel(p / lead))[1] for p in pulls]
        if all(den.subs(at) != 0 for den in ratios):
            return True
    return False


@pytest.mark.parametrize("ideal", [["y", "x^2"], ["(y+x)^2", "(y+x)*x^2", "x^4"], ["y^2 - x^3", "x^4", "x^2*y"]])
def test_leaf_pullbacks_are_principal(ideal):
    tree, _ = monomialize(gens(*ideal))
    for chart in tree.leaves():
        pulls = [to_sympy(chart.pullback(g)) for g in gens(*ideal)]
        points = [(0, 0)]
        if chart.kind == "A":
            # the whole new divisor x = 0 is visible here
            points += [(0, sympy.Rational(c, 2)) for c in range(-6, 7) if c]
        for point in points:
            assert principal_at(pulls, point), (chart.id, point)


# --- orders ------------------------------------------------------------------------


@pytest.mark.parametrize("f, e1, e2", [("x", 1, 1), ("y", 1, 2), ("1", 0, 0), ("x*y", 2, 3)])
def test_divisor_orders(y_x2, f, e1, e2):
    assert ord_divisor(parse(f), y_x2, "E1") == e1
    assert ord_divisor(parse(f), y_x2, "E2") == e2


def test_zero_has_infinite_order(y_x2):
    assert ord_divisor(SparsePoly.const(0, ("x", "y")), y_x2, "E1") == INFINITE_ORDER == math.inf


@pytest.mark.parametrize("text", ["x", "y", "y + x + x^2", "x^3 - 2*y^2", "(y - x)^2 + x*y^3"])
def test_chart_independence(text):
    tree, _ = monomialize(gens("(y+x)^2", "(y+x)*x^2", "x^4"))
    f = parse(text)
    for d in tree.divisors:
        assert ord_divisor(f, tree, d, via="A") == ord_divisor(f, tree, d, via="B")


# --- valuative membership --------------------------------------------------------------


def test_valuative_member_examples(y_x2):
    ideal = gens("y", "x^2")
    assert not valuative_member(parse("x"), ideal, y_x2)
    assert valuative_member(parse("x*y"), ideal, y_x2)
    tree, _ = monomialize(SQUARED)
    assert valuative_member(parse("x^3"), SQUARED, tree) is member(parse("x^3"), SQUARED)[0] is False


# --- arcs ------------------------------------------------------------------------------


def test_transversal_arcs(y_x2):
    e2, e1 = transversal_arc(y_x2, "E2"), transversal_arc(y_x2, "E1")
    assert (str(e2.x), str(e2.y)) == ("t", "t^2")
    assert (str(e1.x), str(e1.y)) == ("t", "t")
    single, _ = monomialize(gens("y", "x"))
    arc = transversal_arc(single, "E1")
    assert (str(arc.x), str(arc.y)) == ("t", "t")


@pytest.mark.parametrize("ideal", [["y", "x^2"], ["(y+x)^2", "(y+x)*x^2", "x^4"], ["y^2 - x^3", "x^4"]])
def test_arc_order_matches_divisor_order(ideal):
    tree, _ = monomialize(gens(*ideal))
    for d in tree.divisors:
        arc = transversal_arc(tree, d)
        for text in ["x", "y", "y + x", "y^2 - x^3", "x*y + x^5"]:
            assert arc.order_of(parse(text)) == ord_divisor(parse(text), tree, d)


# --- real centres ------------------------------------------------------------------------


def test_real_points():
    tree, _ = monomialize(SQUARED)
    assert real_points_check(tree)
    tree, _ = monomialize(gens("y^2 + x^2", "x^3"))
    assert not real_points_check(tree)
    tree, _ = monomialize(gens("y", "x"))
    assert real_points_check(tree)


def test_tree_dump_is_deterministic(y_x2):
    text = dumps(y_x2)
    assert text == dumps(monomialize(gens("y", "x^2"))[0])
    doc = json.loads(text)
    assert doc["order_table"]["E2"]["ideal"] == 2
    assert len(doc["divisors"]) == 2
