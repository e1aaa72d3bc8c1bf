import json

import pytest

from merobound import jsonio
from merobound.admissibility import admissible
from merobound.arith import GaussianRational, SparsePoly
from merobound.cli import main
from merobound.errors import MalformedCertificate, ParseError
from merobound.fixtures import load_fixture
from merobound.ideal import build_ideal
from merobound.parser import MAX_EXPONENT, Add, Div, Pow, parse, parse_poly, to_poly, top_factors

CUSP = "(y+x+i*x^2)^2 - x^5"


# --- parser ---------------------------------------------------------------------


def test_expansion_of_deviated_cusp():
    expected = parse("y^2 + 2*x*y + 2*i*x^2*y + x^2 + 2*i*x^3 - x^4 - x^5")
    assert to_poly(parse_poly(CUSP)) == expected
    assert str(expected) == "-x^5 - x^4 + (2*i)*x^3 + (2*i)*x^2*y + x^2 + 2*x*y + y^2"


def test_sum_of_powers_structure():
    node = parse_poly("x^2 + y^2")
    assert isinstance(node, Add)
    assert isinstance(node.left, Pow) and isinstance(node.right, Pow)


@pytest.mark.parametrize(
    "text, offset",
    [("(y+x", 4), ("2x", 1), ("x^y", 2), ("x/y", 2), ("x/0", 2), ("", 0), ("x + $", 4), (f"x^{MAX_EXPONENT + 1}", 2)],
)
def test_syntax_errors_carry_offsets(text, offset):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.offset == offset


def test_rational_coefficients():
    node = parse_poly("x/2 + 3*y/4")
    assert isinstance(node.left, Div)
    assert parse("x/2 + 3*y/4") == SparsePoly({(1, 0): GaussianRational(1, 0) / 2, (0, 1): GaussianRational(3, 0) / 4}, ("x", "y"))


def test_variable_sets():
    assert parse("x + z").vars == ("x", "y", "z")
    with pytest.raises(ParseError):
        parse("z", ("x", "y"))


def test_top_factors_repeat_powers():
    factors = top_factors(parse_poly("-(y+x)^2*(y-x)/3"))
    assert factors == [parse("y+x"), parse("y+x"), parse("y-x")]
    assert top_factors(parse_poly("y + x")) == [parse("y + x")]


@pytest.mark.parametrize("text", [CUSP, "x/3 - (1/2+i)*y^3", "(z + x + y)*x*y", "-i", "0"])
def test_print_parse_round_trip(text):
    p = parse(text)
    assert parse(str(p), p.vars) == p


# --- JSON -----------------------------------------------------------------------


def test_verdict_json():
    doc = jsonio.verdict_to_json(admissible(parse(CUSP)))
    assert doc["outcome"] == "Holds"
    assert doc["factors"] == [
        {"q": "x", "m": 2, "psi0": "i", "r": 2, "multiplicity": 1, "deviation_order": "5/2"}
    ]


def test_ideal_spec_round_trip():
    I = build_ideal(admissible(parse(CUSP)).forms)
    doc = jsonio.ideal_to_json(I)
    assert doc == {"nvars": 2, "factors": [{"q": "x", "m": 2}, {"q": "x", "m": 2}]}
    assert jsonio.ideal_from_json(doc).factors == I.factors
    explicit = jsonio.ideal_from_json({"generators": ["y", "x^2"]})
    assert explicit.gens() == [parse("y"), parse("x^2")]


@pytest.mark.parametrize(
    "doc", [{"nvars": 4, "factors": []}, {"generators": []}, {"factors": [{"q": "x", "m": "2"}]}]
)
def test_bad_ideal_specs(doc):
    with pytest.raises(ValueError):
        jsonio.ideal_from_json(doc)


def test_exact_numbers_are_strings():
    assert jsonio.number(GaussianRational(1, 0) / 2 + GaussianRational(0, 3) / 4) == "1/2+3/4*i"
    assert jsonio.read_number("1/2+3/4*i") == GaussianRational(1, 0) / 2 + GaussianRational(0, 3) / 4
    with pytest.raises(ValueError):
        jsonio.read_number(0.5)


def test_certificate_round_trip():
    doc = load_fixture("three_variables")["certificate"]
    cert = jsonio.integral_certificate_from_json(doc, ("x", "y", "z"))
    again = jsonio.integral_certificate_to_json(cert)
    assert again["terms"] == doc["terms"]
    with pytest.raises(MalformedCertificate):
        jsonio.integral_certificate_from_json({"terms": []})


def test_dumps_adds_schema_and_sorts():
    text = jsonio.dumps({"b": 1, "a": 2})
    assert json.loads(text) == {"schema": 1, "a": 2, "b": 1}
    assert text.index('"a"') < text.index('"b"')


# --- CLI --------------------------------------------------------------------------


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_bounded(capsys):
    code, out, _ = run(capsys, "check", "(y+x)*x^2", CUSP)
    assert code == 0
    assert out.splitlines()[0] == "Bounded"
    assert "generator #2" in out
    assert "(x^2 + 2*x*y + y^2, x^3 + x^2*y, x^4)" in out


def test_check_not_bounded(capsys):
    code, out, _ = run(capsys, "--json", "check", "x^3", CUSP)
    doc = json.loads(out)
    assert code == 0
    assert doc["verdict"] == "NotBounded"
    assert doc["certificate"]["kind"] == "refutation"
    assert "witness_arc" in doc


def test_check_follows_admissibility_failure(capsys):
    code, out, _ = run(capsys, "--json", "check", "1", "y + x")
    doc = json.loads(out)
    assert doc["verdict"] == "NotBounded"
    assert doc["admissibility"]["witness"]["kind"] == "AllReal"


def test_admissible_command(capsys):
    code, out, _ = run(capsys, "admissible", "y^2 + x^2")
    assert code == 0
    assert out.startswith("Fails") and "NonRealLeading" in out


@pytest.mark.parametrize(
    "argv, verdict_code",
    [
        (["check", "(y+x)*x^2", CUSP], 0),
        (["check", "x^3", CUSP], 1),
        (["check", "x", "(y+x+i*x^2)^2 - 2*x^4"], 2),
    ],
)
def test_exit_verdict(capsys, argv, verdict_code):
    assert run(capsys, "--exit-verdict", *argv)[0] == verdict_code
    assert run(capsys, *argv, "--exit-verdict")[0] == verdict_code
    assert run(capsys, *argv)[0] == 0


@pytest.mark.parametrize("argv", [["bogus"], [], ["check", "(y+x", "y"], ["member", "x"], ["check", "x", "0"]])
def test_input_errors_exit_3(capsys, argv):
    assert run(capsys, *argv)[0] == 3


def test_caps_exit_4(capsys):
    assert run(capsys, "--max-blowups", "1", "monomialize", CUSP)[0] == 4


def test_json_output_is_byte_identical(capsys):
    argv = ["--json", "oracle", "x^3", CUSP, "--levels", "5", "--samples", "8", "--seed", "4"]
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second
    assert json.loads(first)["schema"] == 1


def test_file_based_commands(capsys, tmp_path):
    spec = tmp_path / "ideal.json"
    spec.write_text(json.dumps({"nvars": 2, "factors": [{"q": "x", "m": 2}, {"q": "x", "m": 2}]}))
    code, out, _ = run(capsys, "--json", "member", "x^3", "--ideal", str(spec))
    assert code == 0 and json.loads(out)["member"] is False
    code, out, _ = run(capsys, "--json", "valmember", "x^2*y + x^3", str(spec))
    assert json.loads(out)["member"] is True
    code, out, _ = run(capsys, "--json", "monomialize", str(spec))
    assert json.loads(out)["tree"]["order_table"]["E2"]["ideal"] == 4

    rem = load_fixture("three_variables")
    ideal3 = tmp_path / "rem.json"
    ideal3.write_text(json.dumps({"nvars": 3, "generators": rem["generators"]}))
    cert = tmp_path / "cert.json"
    cert.write_text(json.dumps(rem["certificate"]))
    code, out, _ = run(capsys, "--json", "certify", rem["f"], "--ideal", str(ideal3), "--equation", str(cert))
    assert code == 0 and json.loads(out)["accepted"] is True
    cert.write_text(json.dumps(rem["malformed"][0]))
    assert run(capsys, "certify", rem["f"], "--ideal", str(ideal3), "--equation", str(cert))[0] == 3


def test_ideal_command(capsys):
    code, out, _ = run(capsys, "ideal", "(y+x+i*x^4)^2 - x^9")
    assert out.strip().endswith("(x^2 + 2*x*y + y^2, x^5 + x^4*y, x^8)")
