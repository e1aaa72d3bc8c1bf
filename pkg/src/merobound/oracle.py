"""Floating-point sampling of boundedness ratios near the origin.

Sample points are generated from a seeded numpy generator and then turned
into exact Gaussian rationals; polynomials are evaluated exactly and only
the final magnitudes become floats.  This keeps ratios meaningful on the
curves y = -q(x), where expanded generators cancel catastrophically in
double precision.

The oracle never proves anything.  Its hints are cross-checks for the exact
membership answers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from gmpy2 import mpq

from .arith.gaussian import GaussianRational
from .arith.poly import SparsePoly

__all__ = [
    "SamplePlan",
    "RatioReport",
    "ratio_scan",
    "arc_ratio",
    "equivalence_report",
    "mutual_bound_report",
    "BOUNDED",
    "DIVERGENT",
    "EQUIVOCAL",
]

BOUNDED = "BoundedLooking"
DIVERGENT = "DivergentLooking"
EQUIVOCAL = "Equivocal"

DIVERGENCE_GROWTH = 1.5
BOUNDED_GROWTH = 1.1
WINDOW = 3
REGIONS = ("H2", "R2", "C2", "ARC")
CURVE_SAMPLES = 8


@dataclass(frozen=True)
class SamplePlan:
    """Where and how densely to sample.

    ``levels`` are the exponents k of the scales t = 2^-k.  ``curves`` lists
    (q, m) pairs whose zero curves y = -q(x) get extra samples at distance
    about t^m; ``arc`` is required for the ARC region.
    """

    region: str
    levels: tuple = tuple(range(4, 12))
    samples_per_level: int = 64
    seed: int = 0
    curves: tuple = ()
    spread: float = 1.0
    arc: object = None
    nvars: int = 2

    def __post_init__(self):
        if self.region not in REGIONS:
            raise ValueError(f"unknown region {self.region!r}; expected one of {REGIONS}")
        if self.region == "ARC" and self.arc is None:
            raise ValueError("ARC plans need an arc")
        if self.nvars not in (2, 3):
            raise ValueError("nvars must be 2 or 3")
        if self.samples_per_level < 1 or not self.levels:
            raise ValueError("need at least one level and one sample")


@dataclass(frozen=True)
class RatioReport:
    levels: tuple
    scales: tuple
    sups: tuple
    means: tuple
    argmax: tuple  # sample point (complex coordinates) attaining each sup
    growth: tuple
    hint: str
    skipped: int = 0
    samples: tuple = field(default=(), repr=False)  # every ratio, per level

    def to_json(self) -> dict:
        return {
            "levels": list(self.levels),
            "sups": [float(s) for s in self.sups],
            "growth": [float(g) for g in self.growth],
            "hint": self.hint,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


# ---------------------------------------------------------------------------
# exact evaluation


def _exact(value: complex) -> GaussianRational:
    return GaussianRational(mpq(float(value.real)), mpq(float(value.imag)))


def _evaluator(p: SparsePoly, names: tuple) -> Callable:
    idx = [names.index(v) for v in p.vars]
    terms = [(tuple(e), c) for e, c in p.items()]

    def run(point, cache):
        total = GaussianRational(0)
        for e, c in terms:
            t = c
            for i, k in zip(idx, e):
                if k:
                    key = (i, k)
                    pw = cache.get(key)
                    if pw is None:
                        pw = point[i] ** k
                        cache[key] = pw
                    t = t * pw
            total = total + t
        return total

    return run


def _magnitude(v: GaussianRational) -> float:
    if v.is_zero():
        return 0.0
    return math.sqrt(float(v.norm()))


def _complex(v: GaussianRational) -> complex:
    return complex(float(v.re), float(v.im))


# ---------------------------------------------------------------------------
# sample generation


def _shapes(plan: SamplePlan):
    """Per-sample shape parameters, drawn once and reused at every scale."""
    rng = np.random.default_rng(plan.seed)
    n = plan.samples_per_level
    return {
        "angles": rng.uniform(0.0, np.pi, size=(n, plan.nvars)),
        "full": rng.uniform(0.0, 2 * np.pi, size=(n, plan.nvars)),
        "radii": rng.uniform(0.25, 1.0, size=(n, plan.nvars)),
        "offsets": rng.uniform(0.1, 1.0, size=n),
        "signs": rng.choice([-1.0, 1.0], size=n),
        "tilts": rng.uniform(0.05, 1.0, size=n),
    }


def _points(plan: SamplePlan, t: float, shapes) -> list:
    """Exact sample points at scale t (tuples over the plan's variables)."""
    tq = _exact(complex(t, 0))
    nv = plan.nvars
    pts = []
    if plan.region == "ARC":
        arc = plan.arc
        pts.append((arc.x.evaluate({"t": tq}), arc.y.evaluate({"t": tq})))
        return pts
    for s in range(plan.samples_per_level):
        r = shapes["radii"][s]
        if plan.region == "H2":
            a = shapes["angles"][s]
            coords = [r[j] * t * np.exp(1j * a[j]) for j in range(nv)]
        elif plan.region == "R2":
            a = shapes["full"][s]
            coords = [r[0] * t * np.cos(a[0]), r[0] * t * np.sin(a[0])] + [r[j] * t for j in range(2, nv)]
        else:
            a = shapes["full"][s]
            coords = [r[j] * t * np.exp(1j * a[j]) for j in range(nv)]
        pts.append(tuple(_exact(complex(c)) for c in coords))
    for q, m in plan.curves:
        pts.extend(_curve_points(plan, q, m, t, tq, shapes))
    if plan.region == "H2":
        pts = [p for p in pts if all(c.im > 0 for c in p)]
    return pts


def _curve_points(plan: SamplePlan, q: SparsePoly, m: int, t: float, tq, shapes) -> list:
    """Points with y + q(x) of size about t^m (and exactly zero for R2 and C2)."""
    out = []
    U = plan.spread
    extra = [_exact(complex(t, 0))] * (plan.nvars - 2)
    for s in range(min(plan.samples_per_level, CURVE_SAMPLES)):
        v = shapes["offsets"][s]
        if plan.region == "H2":
            # nearly real x, y pushed into the upper half plane by U v t^m
            x = _exact(complex(t, t**m * shapes["tilts"][s]))
            w = _exact(complex(0.0, U * v * t**m))
            cand = [(x, w)]
        elif plan.region == "R2":
            sign = shapes["signs"][s]
            x = _exact(complex(sign * t, 0))
            cand = [(x, _exact(complex(w, 0))) for w in (0.0, U * v * t**m, -U * v * t**m)]
        else:
            a = shapes["full"][s]
            x = _exact(t * np.exp(1j * a[0]))
            cand = [(x, _exact(complex(0, 0))), (x, _exact(U * v * t**m * np.exp(1j * a[1])))]
        for x, w in cand:
            y = w - q.evaluate({name: x if name == "x" else 0 for name in q.vars})
            out.append((x, y, *extra))
    return out


# ---------------------------------------------------------------------------
# scanning


def _hint(sups: Sequence[float], growth: Sequence[float]) -> str:
    if all(s == 0 for s in sups):
        return BOUNDED
    tail = list(growth[-WINDOW:])
    if len(tail) < WINDOW:
        return EQUIVOCAL
    if all(g > DIVERGENCE_GROWTH for g in tail):
        return DIVERGENT
    if all(g <= BOUNDED_GROWTH for g in tail):
        return BOUNDED
    return EQUIVOCAL


def _growth(sups) -> list:
    out = []
    for a, b in zip(sups, sups[1:]):
        if a == 0:
            out.append(0.0 if b == 0 else math.inf)
        else:
            out.append(b / a)
    return out


def _scan(numerator: Callable, denominator: Callable, plan: SamplePlan) -> RatioReport:
    shapes = _shapes(plan) if plan.region != "ARC" else None
    scales, sups, means, argmax, samples = [], [], [], [], []
    skipped = 0
    for k in plan.levels:
        t = 2.0**-k
        ratios = []
        best, best_pt = -1.0, None
        for pt in _points(plan, t, shapes):
            cache: dict = {}
            den = denominator(pt, cache)
            if den == 0:
                skipped += 1
                continue
            r = numerator(pt, cache) / den
            ratios.append(r)
            if r > best:
                best, best_pt = r, pt
        scales.append(t)
        sups.append(max(ratios) if ratios else 0.0)
        means.append(float(np.mean(ratios)) if ratios else 0.0)
        argmax.append(tuple(_complex(c) for c in best_pt) if best_pt else ())
        samples.append(tuple(ratios))
    growth = _growth(sups)
    return RatioReport(
        tuple(plan.levels), tuple(scales), tuple(sups), tuple(means), tuple(argmax),
        tuple(growth), _hint(sups, growth), skipped, tuple(samples),
    )


def _names(plan: SamplePlan) -> tuple:
    return ("x", "y", "z")[: plan.nvars]


def _abs_of(p: SparsePoly, names):
    run = _evaluator(p, names)
    return lambda pt, cache: _magnitude(run(pt, cache))


def _abs_sum(polys: Sequence[SparsePoly], names):
    runs = [_evaluator(p, names) for p in polys]
    return lambda pt, cache: sum(_magnitude(r(pt, cache)) for r in runs)


def ratio_scan(f: SparsePoly, gens: Sequence[SparsePoly], plan: SamplePlan) -> RatioReport:
    """Sup of |f| / sum |g_i| per scale level, with growth factors and a hint."""
    if not gens or any(g.is_zero() for g in gens):
        raise ValueError("generators must be nonzero")
    names = _names(plan)
    return _scan(_abs_of(f, names), _abs_sum(gens, names), plan)


def mutual_bound_report(g: SparsePoly, gens: Sequence[SparsePoly], plan: SamplePlan) -> dict:
    """Both directions |g| / sum|gens| and sum|gens| / |g|."""
    names = _names(plan)
    abs_g = _abs_of(g, names)
    sum_gens = _abs_sum(gens, names)
    return {
        "g_over_gens": _scan(abs_g, sum_gens, plan),
        "gens_over_g": _scan(sum_gens, abs_g, plan),
    }


def arc_ratio(f: SparsePoly, gens: Sequence[SparsePoly], arc, k_range) -> list:
    """[(t, |f(arc(t))| / sum |g_i(arc(t))|)] for t = 2^-k."""
    fa = arc.compose(f)
    ga = [arc.compose(g) for g in gens]
    out = []
    for k in k_range:
        t = GaussianRational(mpq(1, 2**k))
        den = sum(_magnitude(p.evaluate({"t": t})) for p in ga)
        num = _magnitude(fa.evaluate({"t": t}))
        out.append((2.0**-k, num / den if den else math.inf))
    return out


def arc_hint(ratios: Sequence[tuple]) -> str:
    sups = [r for _, r in ratios]
    return _hint(sups, _growth(sups))


# ---------------------------------------------------------------------------


CONDITIONS = ("f_over_g_H2", "f_over_gens_H2", "f_over_gens_R2", "f_over_gens_C2")


def equivalence_report(
    f: SparsePoly,
    g: SparsePoly,
    levels: Sequence[int] = tuple(range(4, 12)),
    samples: int = 32,
    seed: int = 0,
) -> dict:
    """Compare the four sampled boundedness conditions with exact membership.

    Requires g to be admissible.  A condition is consistent when its hint is
    not DivergentLooking for a member and not BoundedLooking for a
    non-member; Equivocal hints are reported, never resolved.
    """
    from .admissibility import admissible
    from .ideal import build_ideal, member

    verdict = admissible(g)
    if not verdict.holds:
        raise ValueError(f"g is not admissible: {verdict.outcome.value}")
    ideal = build_ideal(verdict.forms)
    gens = ideal.gens()
    curves = tuple((q, m) for q, m in dict.fromkeys(ideal.factors))
    is_member, _ = member(f, ideal, certify=False)

    def plan(region):
        return SamplePlan(region, tuple(levels), samples, seed, curves)

    reports = {
        "f_over_g_H2": ratio_scan(f, [g], plan("H2")),
        "f_over_gens_H2": ratio_scan(f, gens, plan("H2")),
        "f_over_gens_R2": ratio_scan(f, gens, plan("R2")),
        "f_over_gens_C2": ratio_scan(f, gens, plan("C2")),
    }
    mutual = mutual_bound_report(g, gens, plan("H2"))
    consistent = {}
    for name, rep in reports.items():
        bad = DIVERGENT if is_member else BOUNDED
        consistent[name] = rep.hint != bad
    return {
        "member": is_member,
        "generators": [str(p) for p in gens],
        "conditions": reports,
        "mutual": mutual,
        "consistent": consistent,
        "equivocal": [n for n, rep in reports.items() if rep.hint == EQUIVOCAL],
        "agree": all(consistent.values()),
    }


def report_to_json(report: dict) -> dict:
    return {
        "member": report["member"],
        "generators": report["generators"],
        "conditions": {k: v.to_json() for k, v in report["conditions"].items()},
        "mutual": {k: v.to_json() for k, v in report["mutual"].items()},
        "consistent": report["consistent"],
        "equivocal": report["equivocal"],
        "agree": report["agree"],
    }
