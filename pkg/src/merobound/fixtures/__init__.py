"""Curated example corpus stored as JSON under ``fixtures/data`` and a runner for it."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Optional

from ..admissibility import admissible
from ..arith.poly import SparsePoly
from ..blowup import monomialize, real_points_check, transversal_arc, valuative_member
from ..errors import MalformedCertificate
from ..ideal import ProductIdeal, build_ideal, member, member_refute_truncated, monomials_below, verify_integral_equation
from ..jsonio import integral_certificate_from_json
from ..parser import parse, parse_poly, top_factors

__all__ = ["FixtureResult", "FixtureReport", "fixture_names", "load_fixture", "run_fixture_suite"]


@dataclass(frozen=True)
class FixtureResult:
    fixture: str
    case: str
    passed: bool
    detail: str = ""


@dataclass
class FixtureReport:
    results: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list:
        return [r for r in self.results if not r.passed]

    def summary(self) -> str:
        ok = sum(r.passed for r in self.results)
        return f"{ok}/{len(self.results)} fixture checks passed"


def _data():
    return resources.files(__package__) / "data"


def fixture_names() -> list:
    return sorted(p.name[:-5] for p in _data().iterdir() if p.name.endswith(".json"))


def load_fixture(name: str) -> dict:
    return json.loads((_data() / f"{name}.json").read_text(encoding="utf-8"))


class _Checker:
    def __init__(self, fixture: str, report: FixtureReport):
        self.fixture = fixture
        self.report = report

    def check(self, case: str, passed: bool, detail: str = ""):
        self.report.results.append(FixtureResult(self.fixture, case, bool(passed), "" if passed else detail))


# ---------------------------------------------------------------------------


def _run_admissible(doc: dict, chk: _Checker):
    for case in doc["cases"]:
        name = case["name"]
        node = parse_poly(case["g"])
        g = parse(case["g"])
        factors = top_factors(node)
        verdict = admissible(g, factors=factors if len(factors) > 1 else None)
        chk.check(f"{name}:outcome", verdict.outcome.value == case["outcome"], f"got {verdict.outcome.value} ({verdict.witness})")
        if "witness" in case:
            kind = verdict.witness.kind.value if verdict.witness else None
            chk.check(f"{name}:witness", kind == case["witness"], f"got {kind}")
        if "forms" in case:
            got = [
                {
                    "q": str(f.q_poly()),
                    "m": f.m,
                    "psi0": str(f.psi0),
                    "r": f.r,
                    "multiplicity": k,
                    **({"deviation_order": str(f.ramification_hint)} if "deviation_order" in exp else {}),
                }
                for (f, k), exp in zip(verdict.forms, case["forms"])
            ]
            chk.check(f"{name}:forms", got == case["forms"], f"got {got}")
        if verdict.holds and ("ideal" in case or "members" in case):
            I = build_ideal(verdict.forms)
            if "ideal" in case:
                gens = [str(p) for p in I.gens()]
                chk.check(f"{name}:ideal", gens == case["ideal"], f"got {gens}")
            for item in case.get("members", []):
                f = parse(item["f"])
                ok, cert = member(f, I)
                replay = cert.replay(f, I.gens()) if ok else cert.normal_form != 0
                chk.check(
                    f"{name}:member[{item['f']}]",
                    ok == item["member"] and replay,
                    f"got {ok}, certificate valid {replay}",
                )


def _run_three_variables(doc: dict, chk: _Checker):
    vars_ = ("x", "y", "z")
    gens = [parse(g, vars_) for g in doc["generators"]]
    f = parse(doc["f"], vars_)
    for item in doc["refutations"]:
        status, _ = member_refute_truncated(f, gens, item["truncation"])
        chk.check(f"refute[N={item['truncation']}]", status == item["status"], f"got {status}")
    cert = integral_certificate_from_json(doc["certificate"], vars_)
    chk.check("integral_equation", verify_integral_equation(f, gens, cert) == doc["accepted"], "rejected")
    for k, bad in enumerate(doc.get("malformed", [])):
        try:
            verify_integral_equation(f, gens, integral_certificate_from_json(bad, vars_))
        except MalformedCertificate:
            chk.check(f"malformed[{k}]", True)
        else:
            chk.check(f"malformed[{k}]", False, "accepted a malformed certificate")


def _run_monomialize(doc: dict, chk: _Checker):
    for case in doc["cases"]:
        name = case["name"]
        gens = [parse(g) for g in case["generators"]]
        tree, _ = monomialize(gens)
        if "blowups" in case:
            chk.check(f"{name}:blowups", tree.steps == case["blowups"], f"got {tree.steps}")
        if "order_table" in case:
            chk.check(f"{name}:orders", tree.order_table() == case["order_table"], f"got {tree.order_table()}")
        chk.check(f"{name}:real_points", real_points_check(tree) == case["real_points"], "mismatch")
        for dname, (ax, ay) in case.get("arcs", {}).items():
            arc = transversal_arc(tree, dname)
            ok = (str(arc.x), str(arc.y)) == (ax, ay)
            chk.check(f"{name}:arc[{dname}]", ok, f"got ({arc.x}, {arc.y})")
        for item in case.get("members", []):
            got = valuative_member(parse(item["f"]), gens, tree)
            chk.check(f"{name}:valmember[{item['f']}]", got == item["member"], f"got {got}")


def corpus_ideal(entry: dict) -> ProductIdeal:
    return ProductIdeal(tuple((parse(f["q"]), f["m"]) for f in entry["factors"]))


def _run_product_corpus(doc: dict, chk: _Checker):
    for entry in doc["ideals"]:
        I = corpus_ideal(entry)
        tree, _ = monomialize(I)
        expected = {tuple(e) for e in entry["members"]}
        mismatches = []
        for exps in monomials_below(entry["bound"] + 1, 2):
            f = SparsePoly.monomial(exps)
            exact, _ = member(f, I, certify=False)
            val = valuative_member(f, I, tree)
            if not (exact == val == (exps in expected)):
                mismatches.append((exps, exact, val))
        chk.check(entry["name"], not mismatches, f"disagreements {mismatches[:5]}")


RUNNERS: dict[str, Callable] = {
    "admissible": _run_admissible,
    "three_variables": _run_three_variables,
    "monomialize": _run_monomialize,
    "product_corpus": _run_product_corpus,
}


def run_fixture_suite(filter: Optional[str] = None) -> FixtureReport:
    """Run every fixture whose name contains ``filter`` (all when None)."""
    report = FixtureReport()
    for name in fixture_names():
        if filter and filter not in name:
            continue
        doc = load_fixture(name)
        RUNNERS[doc["kind"]](doc, _Checker(name, report))
    return report
