"""Point blow-ups of the plane, monomialization of ideals and divisorial orders.

Every chart carries the composed map (X, Y) from its coordinates (x, y) to
the base plane, plus the exceptional divisors that appear in it as
coordinate lines: ``u_divisor`` is the line x = 0 and ``v_divisor`` the
line y = 0.  Blowing up the point (c1, c2) of a chart creates

* chart A: (x, y) -> (c1 + x, c2 + x*y), new divisor on x = 0
* chart B: (x, y) -> (c1 + x*y, c2 + y), new divisor on y = 0

The generators of the ideal are stored in each chart as monomials in the
divisor lines times a residual (the strict transform).  A point is
principal when some generator has a residual not vanishing there and a
monomial dividing every other generator's monomial.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .arith.gaussian import ZERO, GaussianRational
from .arith.poly import SparsePoly
from .arith.roots import gaussian_linear_roots
from .arith.upoly import from_sparse, pgcd, to_sparse
from .errors import CapExceeded, NonRationalCenter

__all__ = [
    "Chart",
    "Divisor",
    "BlowupTree",
    "PulledIdeal",
    "Arc",
    "blow_up",
    "monomialize",
    "ord_divisor",
    "valuative_member",
    "transversal_arc",
    "real_points_check",
    "tree_to_json",
    "INFINITE_ORDER",
]

INFINITE_ORDER = math.inf
_XY = ("x", "y")


def _x():
    return SparsePoly.var("x", _XY)


def _y():
    return SparsePoly.var("y", _XY)


def _valuation(p: SparsePoly, var_index: int) -> int:
    return min(e[var_index] for e in p.terms)


def _split_monomial(p: SparsePoly, use_u: bool, use_v: bool):
    """(a, b, residual) with p = x^a y^b residual over the divisor lines in use."""
    a = _valuation(p, 0) if use_u else 0
    b = _valuation(p, 1) if use_v else 0
    if a or b:
        p = p.divide_by_monomial((a, b))
    return a, b, p


@dataclass
class PulledGenerator:
    u: int
    v: int
    residual: SparsePoly
    total: SparsePoly


@dataclass
class Chart:
    """A coordinate chart of the iterated blow-up."""

    id: int
    parent: Optional[int]
    kind: str  # "base" | "A" | "B"
    center: Optional[tuple]  # point of the parent chart that was blown up
    X: SparsePoly
    Y: SparsePoly
    u_divisor: Optional[int] = None
    v_divisor: Optional[int] = None
    generators: list = field(default_factory=list)
    blown_up: list = field(default_factory=list)  # centers blown up inside this chart
    _powers: dict = field(default_factory=dict, repr=False)

    def power(self, which: str, k: int) -> SparsePoly:
        key = (which, k)
        got = self._powers.get(key)
        if got is None:
            base = self.X if which == "X" else self.Y
            got = base**k if k < 2 else self.power(which, k - 1) * base
            self._powers[key] = got
        return got

    def pullback(self, f: SparsePoly) -> SparsePoly:
        """f(X(x, y), Y(x, y)) using cached powers of the chart map."""
        f = f.promote(_XY) if f.vars != _XY else f
        if self.kind == "base":
            return f
        acc: dict = {}
        for (a, b), c in f.items():
            term = self.power("X", a) * self.power("Y", b) if a and b else (
                self.power("X", a) if a else self.power("Y", b) if b else SparsePoly.const(1, _XY)
            )
            for e, v in term.terms.items():
                s = acc.get(e)
                acc[e] = v * c if s is None else s + v * c
        return SparsePoly._raw({e: v for e, v in acc.items() if v}, _XY)

    def is_leaf(self) -> bool:
        return not self.blown_up


@dataclass(frozen=True)
class Divisor:
    id: int
    step: int
    chart_a: int  # chart where the divisor is the line x = 0
    chart_b: int  # chart where it is the line y = 0
    parent_chart: int
    center: tuple

    @property
    def name(self) -> str:
        return f"E{self.id}"


@dataclass
class BlowupTree:
    charts: list
    divisors: list
    generators: list
    steps: int = 0

    def chart(self, cid: int) -> Chart:
        return self.charts[cid]

    def divisor(self, ref) -> Divisor:
        if isinstance(ref, Divisor):
            return ref
        if isinstance(ref, str):
            ref = int(ref.lstrip("E"))
        return self.divisors[ref - 1]

    @property
    def centers(self) -> list:
        return [(d.parent_chart, d.center) for d in self.divisors]

    def leaves(self) -> list:
        return [c for c in self.charts if c.is_leaf()]

    def order_table(self) -> dict:
        """{divisor name: {"generators": [ord of each generator], "ideal": min}}."""
        table = {}
        for d in self.divisors:
            ords = [g.u for g in self.charts[d.chart_a].generators]
            table[d.name] = {"generators": ords, "ideal": min(ords)}
        return table


@dataclass(frozen=True)
class PulledIdeal:
    charts: tuple  # (chart id, [(u, v, residual)], principal monomial or None)
    order_table: dict


@dataclass(frozen=True)
class Arc:
    divisor: int
    x: SparsePoly  # polynomials in t
    y: SparsePoly
    chart: int
    constant: GaussianRational
    witness: dict

    def compose(self, f: SparsePoly) -> SparsePoly:
        f = f.promote(_XY) if f.vars != _XY else f
        return f.subs({"x": self.x, "y": self.y}, vars=("t",))

    def order_of(self, f: SparsePoly):
        comp = self.compose(f)
        if comp.is_zero():
            return INFINITE_ORDER
        return comp.low_degree("t")


# ---------------------------------------------------------------------------
# construction


def _new_tree(generators: Sequence[SparsePoly]) -> BlowupTree:
    gens = [g.promote(_XY) if g.vars != _XY else g for g in generators]
    if not gens or any(g.is_zero() for g in gens):
        raise ValueError("generators must be nonzero")
    base = Chart(0, None, "base", None, _x(), _y())
    base.generators = [PulledGenerator(0, 0, g, g) for g in gens]
    return BlowupTree([base], [], gens)


def blow_up(tree: BlowupTree, chart, point) -> BlowupTree:
    """Blow up ``point`` (exact coordinates in ``chart``); mutates and returns the tree."""
    parent = tree.chart(chart if isinstance(chart, int) else chart.id)
    c1, c2 = (p if isinstance(p, GaussianRational) else GaussianRational(p) for p in point)
    did = len(tree.divisors) + 1
    xv, yv = _x(), _y()
    specs = (
        ("A", c1 + xv, c2 + xv * yv, did, parent.v_divisor if not c2 else None),
        ("B", c1 + xv * yv, c2 + yv, parent.u_divisor if not c1 else None, did),
    )
    ids = []
    for kind, sx, sy, u_div, v_div in specs:
        cid = len(tree.charts)
        sub = {"x": sx, "y": sy}
        X = parent.X.subs(sub, vars=_XY)
        Y = parent.Y.subs(sub, vars=_XY)
        child = Chart(cid, parent.id, kind, (c1, c2), X, Y, u_div, v_div)
        for g in parent.generators:
            total = g.total.subs(sub, vars=_XY)
            a, b, res = _split_monomial(total, u_div is not None, v_div is not None)
            child.generators.append(PulledGenerator(a, b, res, total))
        tree.charts.append(child)
        ids.append(cid)
    tree.divisors.append(Divisor(did, tree.steps + 1, ids[0], ids[1], parent.id, (c1, c2)))
    parent.blown_up.append((c1, c2))
    tree.steps += 1
    return tree


def _principal_at(chart: Chart, point) -> bool:
    p1, p2 = point
    on_u = chart.u_divisor is not None and not p1
    on_v = chart.v_divisor is not None and not p2
    local = []
    for g in chart.generators:
        exps = (g.u if on_u else 0, g.v if on_v else 0)
        unit = bool(g.residual.evaluate({"x": p1, "y": p2}))
        local.append((exps, unit))
    for exps, unit in local:
        if unit and all(exps[0] <= o[0] and exps[1] <= o[1] for o, _ in local):
            return True
    return False


def _candidates(tree: BlowupTree, chart: Chart):
    """Points of the newest divisor in ``chart`` that may fail to be principal."""
    out = []
    if chart.kind == "base":
        return [(ZERO, ZERO)]
    if chart.kind == "B":
        return [(ZERO, ZERO)]
    # chart A: the divisor is x = 0; away from y = 0 only E passes through
    amin = min(g.u for g in chart.generators)
    G: list = []
    for g in chart.generators:
        if g.u == amin:
            G = pgcd(G, from_sparse(g.residual.subs({"x": 0}, vars=("y",)))) if G else from_sparse(
                g.residual.subs({"x": 0}, vars=("y",))
            )
    points = []
    if len(G) > 1:
        roots, cof = gaussian_linear_roots(to_sparse(G, "y"))
        if cof.degree() > 0:
            raise NonRationalCenter(f"non-principal points at the roots of {cof} are not Q(i)-rational")
        points = [r for r, _ in roots]
    if chart.v_divisor is not None and not any(p.is_zero() for p in points):
        points.append(ZERO)
    for p in sorted(points, key=lambda c: c.sort_key()):
        out.append((ZERO, p))
    return out


def monomialize(ideal, max_blowups: Optional[int] = None):
    """Blow up non-principal points until the ideal is locally monomial everywhere.

    ``ideal`` is a ``ProductIdeal`` or a list of generators.  Returns
    ``(BlowupTree, PulledIdeal)``; raises ``CapExceeded`` (carrying the
    partial tree) when more than ``max_blowups`` steps would be needed.
    """
    gens, bound = _generators_and_bound(ideal)
    if max_blowups is None:
        max_blowups = 16 * max(bound, 1)
    tree = _new_tree(gens)
    queue = [0]
    while queue:
        cid = queue.pop(0)
        chart = tree.chart(cid)
        for point in _candidates(tree, chart):
            if _principal_at(chart, point):
                continue
            if tree.steps >= max_blowups:
                raise CapExceeded(f"monomialization needs more than {max_blowups} blow-ups", cap="blowups", partial=tree)
            blow_up(tree, chart, point)
            queue.extend([len(tree.charts) - 2, len(tree.charts) - 1])
    return tree, _pulled(tree)


def _generators_and_bound(ideal):
    from .ideal import ProductIdeal

    if isinstance(ideal, ProductIdeal):
        if ideal.nvars != 2:
            raise ValueError("monomialization is implemented for two variables")
        gens = ideal.gens()
        bound = ideal.bound if ideal.is_product else max(g.degree() for g in gens)
        return gens, bound
    gens = list(ideal)
    return gens, max(g.degree() for g in gens)


def _pulled(tree: BlowupTree) -> PulledIdeal:
    charts = []
    for c in tree.charts:
        data = [(g.u, g.v, g.residual) for g in c.generators]
        mono = None
        for g in c.generators:
            if g.residual.is_constant() and all(g.u <= o.u and g.v <= o.v for o in c.generators):
                mono = (g.u, g.v)
                break
        charts.append((c.id, data, mono))
    return PulledIdeal(tuple(charts), tree.order_table())


# ---------------------------------------------------------------------------
# orders and membership


def ord_divisor(f: SparsePoly, tree: BlowupTree, divisor, via: str = "A"):
    """Order of vanishing of f along a divisor (``math.inf`` for f = 0).

    ``via`` picks the chart: "A" (divisor is x = 0) or "B" (divisor is y = 0);
    both give the same value.
    """
    if f.is_zero():
        return INFINITE_ORDER
    d = tree.divisor(divisor)
    chart = tree.chart(d.chart_a if via == "A" else d.chart_b)
    index = 0 if via == "A" else 1
    f = f.promote(_XY) if f.vars != _XY else f
    if len(f.terms) == 1:
        # the order is a valuation: additive on monomials
        (a, b), _ = next(iter(f.terms.items()))
        ox = _valuation(chart.X, index)
        oy = _valuation(chart.Y, index)
        return a * ox + b * oy
    return _valuation(chart.pullback(f), index)


def valuative_member(f: SparsePoly, ideal, tree: BlowupTree) -> bool:
    """True iff ord_E(f) >= ord_E(I) along every exceptional divisor of the tree."""
    table = tree.order_table()
    for d in tree.divisors:
        if ord_divisor(f, tree, d) < table[d.name]["ideal"]:
            return False
    return True


def transversal_arc(tree: BlowupTree, divisor, avoid: Sequence[SparsePoly] = ()) -> Arc:
    """Arc t -> chart-A point (t, c) of the divisor, pushed down to the base.

    c runs through 1, 2, 3, ... and is rejected when (0, c) is a later
    blow-up center, or a zero of the strict transform of any ``avoid``
    polynomial.
    """
    d = tree.divisor(divisor)
    chart = tree.chart(d.chart_a)
    blocked = {p2 for p1, p2 in chart.blown_up if not p1}
    residuals = []
    for p in avoid:
        if p.is_zero():
            continue
        pb = chart.pullback(p)
        _, _, res = _split_monomial(pb, True, False)
        residuals.append(res)
    c = 1
    while True:
        cq = GaussianRational(c)
        if cq not in blocked and all(res.evaluate({"x": 0, "y": cq}) for res in residuals):
            break
        c += 1
    t = SparsePoly.var("t", ("t",))
    sub = {"x": t, "y": SparsePoly.const(cq, ("t",))}
    X = chart.X.subs(sub, vars=("t",))
    Y = chart.Y.subs(sub, vars=("t",))
    witness = {"chart": chart.id, "line": f"y = {c}", "avoided_centers": sorted(str(b) for b in blocked)}
    return Arc(d.id, X, Y, chart.id, cq, witness)


def real_points_check(tree: BlowupTree) -> bool:
    return all(c1.is_real() and c2.is_real() for _, (c1, c2) in tree.centers)


# ---------------------------------------------------------------------------
# serialisation


def tree_to_json(tree: BlowupTree) -> dict:
    nodes = []
    for c in tree.charts:
        nodes.append(
            {
                "id": c.id,
                "parent": c.parent,
                "kind": c.kind,
                "center": None if c.center is None else [str(v) for v in c.center],
                "map": [str(c.X), str(c.Y)],
                "u_divisor": c.u_divisor,
                "v_divisor": c.v_divisor,
                "generators": [
                    {"u": g.u, "v": g.v, "residual": str(g.residual)} for g in c.generators
                ],
            }
        )
    divisors = [
        {
            "id": d.name,
            "step": d.step,
            "chart_a": d.chart_a,
            "chart_b": d.chart_b,
            "parent_chart": d.parent_chart,
            "center": [str(v) for v in d.center],
        }
        for d in tree.divisors
    ]
    return {
        "blowups": tree.steps,
        "nodes": nodes,
        "centers": [{"chart": cid, "point": [str(v) for v in p]} for cid, p in tree.centers],
        "divisors": divisors,
        "order_table": tree.order_table(),
    }


def dumps(tree: BlowupTree) -> str:
    return json.dumps(tree_to_json(tree), sort_keys=True)
