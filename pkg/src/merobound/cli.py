"""Command-line front end: ``merobound <command> ...``.

Exit status is 0 after a successful run whatever the verdict, 3 for bad
input and 4 when a depth, precision or blow-up cap stopped the computation.
With ``--exit-verdict`` a finished run exits 0, 1 or 2 for a positive,
negative or inconclusive answer.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from . import jsonio
from .admissibility import Failure, Outcome, admissible
from .arith.bridge import exact_quotient, poly_gcd
from .blowup import monomialize, ord_divisor, transversal_arc, tree_to_json, valuative_member
from .errors import CapExceeded, MalformedCertificate, NonRationalCenter, ParseError
from .ideal import ProductIdeal, build_ideal, member, member_refute_truncated, verify_integral_equation
from .oracle import REGIONS, SamplePlan, equivalence_report, ratio_scan, report_to_json
from .parser import parse_poly, to_poly, top_factors

EXIT_OK = 0
EXIT_INPUT = 3
EXIT_CAP = 4

POSITIVE, NEGATIVE, UNKNOWN = 0, 1, 2


class InputError(Exception):
    pass


class CapStop(Exception):
    def __init__(self, message, doc):
        super().__init__(message)
        self.doc = doc


# ---------------------------------------------------------------------------
# argument parsing


def _global_flags(top: bool) -> argparse.ArgumentParser:
    """Flags accepted before or after the command; only the top level sets defaults."""
    p = argparse.ArgumentParser(add_help=False)

    def d(value):
        return value if top else argparse.SUPPRESS

    p.add_argument("--json", action="store_true", default=d(False), help="emit JSON instead of text")
    p.add_argument("--depth-cap", type=int, default=d(64), help="Newton polygon refinement depth (default 64)")
    p.add_argument(
        "--x-precision", type=int, default=d(None), help="x-adic precision for branch splitting (default 4*deg+8)"
    )
    p.add_argument("--max-blowups", type=int, default=d(None), help="blow-up step cap (default 16*sum m)")
    p.add_argument("--trunc", type=int, default=d(None), help="truncation degree for refutation-only membership")
    p.add_argument(
        "--exit-verdict", action="store_true", default=d(False), help="exit 0/1/2 for positive/negative/inconclusive"
    )
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags(top=False)
    parser = argparse.ArgumentParser(
        prog="merobound",
        description="Decide local boundedness of f/g near the origin of C^2 with exact arithmetic.",
        parents=[_global_flags(top=True)],
    )
    sub = parser.add_subparsers(dest="command")

    def add(name, help_text):
        return sub.add_parser(name, help=help_text, parents=[common])

    c = add("check", "decide whether f/g is bounded near the origin")
    c.add_argument("f")
    c.add_argument("g")
    a = add("admissible", "classify the branches of g")
    a.add_argument("g")
    i = add("ideal", "print the generators of the ideal attached to g")
    i.add_argument("g")
    m = add("member", "decide f in the ideal of g or of an ideal spec")
    m.add_argument("f")
    m.add_argument("g", nargs="?")
    m.add_argument("--ideal", dest="ideal_spec")
    mo = add("monomialize", "blow up until the ideal is locally monomial")
    mo.add_argument("source", help="polynomial g or path to an ideal spec JSON")
    v = add("valmember", "membership in the integral closure via divisorial orders")
    v.add_argument("f")
    v.add_argument("source")
    o = add("oracle", "sample boundedness ratios numerically")
    o.add_argument("f")
    o.add_argument("g")
    o.add_argument("--region", choices=[r for r in REGIONS if r != "ARC"] + ["all"], default="all")
    o.add_argument("--levels", type=int, default=8)
    o.add_argument("--samples", type=int, default=32)
    o.add_argument("--seed", type=int, default=0)
    ce = add("certify", "check an integral-dependence equation certificate")
    ce.add_argument("f")
    ce.add_argument("--ideal", dest="ideal_spec", required=True)
    ce.add_argument("--equation", required=True)
    return parser


# ---------------------------------------------------------------------------
# helpers


def _poly(text: str, vars=None):
    node = parse_poly(text)
    return to_poly(node, vars)


def _denominator(text: str):
    node = parse_poly(text)
    g = to_poly(node, ("x", "y"))
    factors = top_factors(node, ("x", "y"))
    return g, factors if len(factors) > 1 else None


def _admissible(g, factors, args):
    return admissible(g, factors=factors, depth_cap=args.depth_cap, x_precision=args.x_precision)


def _ideal_of(text: str, args):
    """(ideal, verdict) from a spec path or a denominator expression."""
    if os.path.exists(text) and text.endswith(".json"):
        return jsonio.ideal_from_json(jsonio.load(text)), None
    g, factors = _denominator(text)
    verdict = _admissible(g, factors, args)
    if not verdict.holds:
        return None, verdict
    return build_ideal(verdict.forms), verdict


def _cap_doc(verdict) -> bool:
    return (
        verdict is not None
        and verdict.outcome is Outcome.INCONCLUSIVE
        and verdict.witness is not None
        and verdict.witness.kind is Failure.CAP
    )


def _witness_text(verdict) -> str:
    return str(verdict.witness) if verdict.witness else ""


def _gen_list(I: ProductIdeal) -> list:
    return [str(g) for g in I.gens()]


def _ideal_text(I: ProductIdeal) -> str:
    return "(" + ", ".join(_gen_list(I)) + ")"


def _certificate_text(cert, gens) -> str:
    from .ideal import MembershipCertificate

    if isinstance(cert, MembershipCertificate):
        parts = []
        for coeff, idx in cert.combination:
            label = f"generator #{idx + 1}"
            parts.append(label if coeff == 1 else f"({coeff})*{label}")
        text = " + ".join(parts) if parts else "0"
        if cert.residual:
            text += f" + [{cert.residual}, degree >= {cert.bound}]"
        return f"f = {text}"
    return (
        f"truncated linear system infeasible below degree {cert.truncation} "
        f"(rank {cert.rank} of {cert.columns} columns); normal form {cert.normal_form}"
    )


def _divergent_arc(f, I, args):
    """Divisor where f falls short, with its transversal arc, or None."""
    try:
        tree, _ = monomialize(I, max_blowups=args.max_blowups)
    except (CapExceeded, NonRationalCenter):
        return None
    table = tree.order_table()
    for d in tree.divisors:
        need = table[d.name]["ideal"]
        got = ord_divisor(f, tree, d)
        if got < need:
            arc = transversal_arc(tree, d, avoid=[f])
            return {"divisor": d.name, "ord_f": got, "ord_ideal": need, "arc": [str(arc.x), str(arc.y)]}
    return None


# ---------------------------------------------------------------------------
# commands; each returns (verdict code, json document, text lines)


def cmd_check(args):
    f = _poly(args.f, ("x", "y"))
    g, factors = _denominator(args.g)
    if g.is_zero():
        raise InputError("denominator is zero")
    common = poly_gcd(f, g) if f else g
    cancelled = None
    if not common.is_constant():
        f = exact_quotient(f, common)
        g = exact_quotient(g, common)
        factors = None
        cancelled = str(common)
    verdict = _admissible(g, factors, args)
    doc = {"command": "check", "f": str(f), "g": str(g), "admissibility": jsonio.verdict_to_json(verdict)}
    if cancelled:
        doc["cancelled"] = cancelled
    lines = []
    if cancelled:
        lines.append(f"cancelled common factor: {cancelled}")
    if verdict.fails:
        doc["verdict"] = "NotBounded"
        lines += ["NotBounded", f"denominator not admissible: {_witness_text(verdict)}"]
        return NEGATIVE, doc, lines
    if not verdict.holds:
        doc["verdict"] = "Inconclusive"
        lines += ["Inconclusive", f"reason: {_witness_text(verdict)}"]
        if _cap_doc(verdict):
            raise CapStop("\n".join(lines), doc)
        return UNKNOWN, doc, lines
    I = build_ideal(verdict.forms)
    ok, cert = member(f, I)
    doc["ideal"] = {"generators": _gen_list(I), **jsonio.ideal_to_json(I)}
    doc["certificate"] = jsonio.certificate_to_json(cert)
    lines.append("Bounded" if ok else "NotBounded")
    lines.append(f"ideal: {_ideal_text(I)}")
    lines.append(f"certificate: {_certificate_text(cert, I.gens())}")
    doc["verdict"] = "Bounded" if ok else "NotBounded"
    if not ok:
        witness = _divergent_arc(f, I, args)
        if witness:
            doc["witness_arc"] = witness
            lines.append(
                f"witness arc: t -> ({witness['arc'][0]}, {witness['arc'][1]}) "
                f"(ord_{witness['divisor']} f = {witness['ord_f']} < {witness['ord_ideal']})"
            )
    return (POSITIVE if ok else NEGATIVE), doc, lines


def cmd_admissible(args):
    g, factors = _denominator(args.g)
    verdict = _admissible(g, factors, args)
    doc = {"command": "admissible", "g": str(g), **jsonio.verdict_to_json(verdict)}
    lines = [verdict.outcome.value]
    if verdict.witness:
        lines.append(f"witness: {_witness_text(verdict)}")
    for form, k in verdict.forms:
        line = f"factor: q = {form.q_poly()}, m = {form.m}, psi(0) = {form.psi0}, r = {form.r}, multiplicity = {k}"
        if form.ramification_hint is not None:
            line += f", deviation order = {form.ramification_hint}"
        lines.append(line)
    if _cap_doc(verdict):
        raise CapStop("\n".join(lines), doc)
    code = {Outcome.HOLDS: POSITIVE, Outcome.FAILS: NEGATIVE}.get(verdict.outcome, UNKNOWN)
    return code, doc, lines


def cmd_ideal(args):
    code, doc, lines = cmd_admissible(args)
    doc["command"] = "ideal"
    if code != POSITIVE:
        return code, doc, lines
    g, factors = _denominator(args.g)
    I = build_ideal(_admissible(g, factors, args).forms)
    doc["ideal"] = {"generators": _gen_list(I), **jsonio.ideal_to_json(I)}
    return POSITIVE, doc, [_ideal_text(I)]


def cmd_member(args):
    if args.ideal_spec:
        I = jsonio.ideal_from_json(jsonio.load(args.ideal_spec))
    elif args.g:
        I, verdict = _ideal_of(args.g, args)
        if I is None:
            raise InputError(f"g is not admissible: {verdict.outcome.value} {_witness_text(verdict)}")
    else:
        raise InputError("member needs g or --ideal")
    f = _poly(args.f, I.vars)
    doc = {"command": "member", "f": str(f), "ideal": jsonio.ideal_to_json(I)}
    if I.nvars == 2 and I.is_product and args.trunc is None:
        ok, cert = member(f, I)
        doc["member"] = ok
        doc["certificate"] = jsonio.certificate_to_json(cert)
        return (POSITIVE if ok else NEGATIVE), doc, [str(ok), _certificate_text(cert, I.gens())]
    N = args.trunc if args.trunc is not None else (I.bound if I.is_product else max(g.degree() for g in I.gens()) + 2)
    status, cert = member_refute_truncated(f, I.gens(), N)
    doc["member"] = status
    doc["truncation"] = N
    if cert is not None:
        doc["certificate"] = jsonio.certificate_to_json(cert)
        return NEGATIVE, doc, [status, _certificate_text(cert, I.gens())]
    return UNKNOWN, doc, [status, f"no obstruction below degree {N}"]


def _tree_for(source: str, args):
    I, verdict = _ideal_of(source, args)
    if I is None:
        raise InputError(f"g is not admissible: {verdict.outcome.value} {_witness_text(verdict)}")
    try:
        tree, pulled = monomialize(I, max_blowups=args.max_blowups)
    except CapExceeded as exc:
        raise CapStop(str(exc), {"command": args.command, "error": str(exc)})
    except NonRationalCenter as exc:
        raise CapStop(str(exc), {"command": args.command, "error": str(exc)})
    return I, tree


def cmd_monomialize(args):
    I, tree = _tree_for(args.source, args)
    doc = {"command": "monomialize", "ideal": jsonio.ideal_to_json(I), "tree": tree_to_json(tree)}
    lines = [f"blow-ups: {tree.steps}"]
    for name, row in tree.order_table().items():
        ords = ", ".join(str(o) for o in row["generators"])
        lines.append(f"{name}: generators [{ords}], ideal {row['ideal']}")
    return POSITIVE, doc, lines


def cmd_valmember(args):
    I, tree = _tree_for(args.source, args)
    f = _poly(args.f, ("x", "y"))
    ok = valuative_member(f, I, tree)
    orders = {d.name: {"f": _order_str(ord_divisor(f, tree, d)), "ideal": tree.order_table()[d.name]["ideal"]} for d in tree.divisors}
    doc = {"command": "valmember", "f": str(f), "member": ok, "orders": orders}
    lines = [str(ok)] + [f"{k}: ord f = {v['f']}, ord I = {v['ideal']}" for k, v in orders.items()]
    return (POSITIVE if ok else NEGATIVE), doc, lines


def _order_str(o):
    return "inf" if o == float("inf") else o


def cmd_oracle(args):
    f = _poly(args.f, ("x", "y"))
    g, factors = _denominator(args.g)
    levels = tuple(range(4, 4 + args.levels))
    if args.region == "all":
        rep = equivalence_report(f, g, levels=levels, samples=args.samples, seed=args.seed)
        doc = {"command": "oracle", **report_to_json(rep)}
        lines = [f"exact member: {rep['member']}"]
        for name, r in rep["conditions"].items():
            lines.append(f"{name}: {r.hint} (growth {', '.join(f'{x:.3g}' for x in r.growth[-3:])})")
        for name, r in rep["mutual"].items():
            lines.append(f"mutual {name}: {r.hint}")
        lines.append(f"consistent: {rep['agree']}")
        return (POSITIVE if rep["agree"] else NEGATIVE), doc, lines
    I, verdict = _ideal_of(args.g, args)
    if I is None:
        raise InputError(f"g is not admissible: {verdict.outcome.value}")
    curves = tuple(dict.fromkeys(I.factors))
    rep = ratio_scan(f, I.gens(), SamplePlan(args.region, levels, args.samples, args.seed, curves))
    doc = {"command": "oracle", "region": args.region, **rep.to_json()}
    lines = [rep.hint] + [f"2^-{k}: sup {s:.6g}" for k, s in zip(rep.levels, rep.sups)]
    code = {"BoundedLooking": POSITIVE, "DivergentLooking": NEGATIVE}.get(rep.hint, UNKNOWN)
    return code, doc, lines


def cmd_certify(args):
    I = jsonio.ideal_from_json(jsonio.load(args.ideal_spec))
    cert = jsonio.integral_certificate_from_json(jsonio.load(args.equation), I.vars)
    f = _poly(args.f, I.vars)
    ok = verify_integral_equation(f, I.gens(), cert)
    doc = {"command": "certify", "f": str(f), "accepted": ok}
    return (POSITIVE if ok else NEGATIVE), doc, ["accepted" if ok else "rejected"]


COMMANDS = {
    "check": cmd_check,
    "admissible": cmd_admissible,
    "ideal": cmd_ideal,
    "member": cmd_member,
    "monomialize": cmd_monomialize,
    "valmember": cmd_valmember,
    "oracle": cmd_oracle,
    "certify": cmd_certify,
}


def _emit(args, doc, lines, out):
    if getattr(args, "json", False):
        out.write(jsonio.dumps(doc) + "\n")
    else:
        out.write("\n".join(lines) + "\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    out, err = sys.stdout, sys.stderr
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    if not args.command:
        parser.print_usage(err)
        return EXIT_INPUT
    try:
        code, doc, lines = COMMANDS[args.command](args)
    except CapStop as exc:
        _emit(args, {**exc.doc, "error": str(exc)}, [str(exc)], out)
        return EXIT_CAP
    except CapExceeded as exc:
        _emit(args, {"command": args.command, "error": str(exc)}, [f"cap exceeded: {exc}"], out)
        return EXIT_CAP
    except ParseError as exc:
        err.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except (InputError, MalformedCertificate, ValueError, OSError, KeyError) as exc:
        err.write(f"input error: {exc}\n")
        return EXIT_INPUT
    _emit(args, doc, lines, out)
    return code if args.exit_verdict else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
