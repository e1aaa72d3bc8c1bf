"""JSON encodings with exact numbers written as strings ("a/b", "a/b+c/d*i").

Every top-level document carries ``"schema": 1``.  Dumps are deterministic:
keys are sorted and polynomials print in a canonical term order.
"""

from __future__ import annotations

import json
from typing import Any

from .admissibility import FactorForm, Verdict
from .arith.gaussian import GaussianRational
from .arith.poly import SparsePoly
from .errors import MalformedCertificate
from .ideal import IntegralCertificate, IntegralTerm, MembershipCertificate, ProductIdeal, RefutationCertificate
from .parser import parse

__all__ = [
    "SCHEMA",
    "dumps",
    "number",
    "read_number",
    "poly",
    "read_poly",
    "form_to_json",
    "verdict_to_json",
    "ideal_to_json",
    "ideal_from_json",
    "certificate_to_json",
    "integral_certificate_from_json",
    "integral_certificate_to_json",
    "load",
]

SCHEMA = 1


def dumps(doc: dict) -> str:
    body = {"schema": SCHEMA, **doc}
    return json.dumps(body, sort_keys=True, indent=2)


def load(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: expected a JSON object")
    schema = doc.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise ValueError(f"{path}: unsupported schema {schema!r}")
    return doc


def number(c) -> str:
    return str(c if isinstance(c, GaussianRational) else GaussianRational(c))


def read_number(text) -> GaussianRational:
    if isinstance(text, int):
        return GaussianRational(text)
    if not isinstance(text, str):
        raise ValueError(f"exact numbers are encoded as strings, got {text!r}")
    return GaussianRational.parse(text)


def poly(p: SparsePoly) -> str:
    return str(p)


def read_poly(text: str, vars=None) -> SparsePoly:
    if not isinstance(text, str):
        raise ValueError(f"polynomials are encoded as strings, got {text!r}")
    return parse(text, vars)


# ---------------------------------------------------------------------------


def form_to_json(form: FactorForm, multiplicity: int = 1) -> dict:
    out = {
        "q": poly(form.q_poly()),
        "m": form.m,
        "psi0": number(form.psi0),
        "r": form.r,
        "multiplicity": multiplicity,
    }
    if form.ramification_hint is not None:
        out["deviation_order"] = str(form.ramification_hint)
    return out


def verdict_to_json(verdict: Verdict) -> dict:
    out: dict[str, Any] = {"outcome": verdict.outcome.value}
    if verdict.witness is not None:
        out["witness"] = {
            "kind": verdict.witness.kind.value,
            "data": {k: _plain(v) for k, v in verdict.witness.data.items()},
        }
    out["factors"] = [form_to_json(f, k) for f, k in verdict.forms]
    return out


def _plain(v):
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    return str(v)


def ideal_to_json(I: ProductIdeal) -> dict:
    out: dict[str, Any] = {"nvars": I.nvars}
    if I.is_product:
        out["factors"] = [{"q": poly(q), "m": m} for q, m in I.factors]
    else:
        out["generators"] = [poly(g) for g in I.generators]
    return out


def ideal_from_json(doc: dict) -> ProductIdeal:
    nvars = doc.get("nvars", 2)
    if nvars not in (2, 3):
        raise ValueError("nvars must be 2 or 3")
    vars_ = ("x", "y", "z")[:nvars]
    if doc.get("generators") is not None:
        gens = tuple(read_poly(g, vars_) for g in doc["generators"])
        if not gens:
            raise ValueError("generator list is empty")
        return ProductIdeal((), nvars, gens)
    factors = []
    for item in doc.get("factors", []):
        q = read_poly(item["q"], vars_)
        m = item["m"]
        if not isinstance(m, int):
            raise ValueError("m must be an integer")
        factors.append((q, m))
    return ProductIdeal(tuple(factors), nvars)


def certificate_to_json(cert) -> dict:
    if isinstance(cert, MembershipCertificate):
        return {
            "kind": "membership",
            "bound": cert.bound,
            "combination": [{"generator": i, "coefficient": poly(c)} for c, i in cert.combination],
            "residual": poly(cert.residual),
        }
    if isinstance(cert, RefutationCertificate):
        return {
            "kind": "refutation",
            "truncation": cert.truncation,
            "rows": cert.rows,
            "columns": cert.columns,
            "rank": cert.rank,
            "normal_form": poly(cert.normal_form),
        }
    if isinstance(cert, IntegralCertificate):
        return integral_certificate_to_json(cert)
    raise TypeError(f"not a certificate: {cert!r}")


def integral_certificate_to_json(cert: IntegralCertificate) -> dict:
    return {
        "kind": "integral_equation",
        "equation_degree": cert.equation_degree,
        "terms": [
            {"j": t.j, "products": [list(p) for p in t.products], "coeff": poly(t.coeff)}
            for t in cert.terms
        ],
    }


def integral_certificate_from_json(doc: dict, vars=None) -> IntegralCertificate:
    try:
        n = doc["equation_degree"]
        terms = []
        for t in doc["terms"]:
            products = tuple(tuple(p) for p in t["products"])
            coeff = read_poly(t.get("coeff", t.get("coefficient", "1")), vars)
            terms.append(IntegralTerm(t["j"], products, coeff))
    except (KeyError, TypeError) as exc:
        raise MalformedCertificate(f"certificate is missing or mistypes a field: {exc}") from exc
    return IntegralCertificate(n, tuple(terms))
