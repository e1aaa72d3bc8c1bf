import pytest

from merobound.fixtures import fixture_names, load_fixture, run_fixture_suite


def test_corpus_files_present():
    assert set(fixture_names()) >= {
        "deviated_cusps",
        "failure_gallery",
        "monomialization",
        "ramified",
        "three_variables",
        "product_corpus",
    }


@pytest.mark.parametrize("name", fixture_names())
def test_fixture_passes(name):
    report = run_fixture_suite(name)
    assert report.results, name
    assert report.passed, [(r.case, r.detail) for r in report.failures]


def test_every_fixture_names_its_oracle():
    for name in fixture_names():
        assert load_fixture(name).get("oracle"), name


def test_product_corpus_shape():
    ideals = load_fixture("product_corpus")["ideals"]
    assert len(ideals) >= 20
    for entry in ideals:
        ms = [f["m"] for f in entry["factors"]]
        assert len(ms) <= 3 and max(ms) <= 4 and sum(ms) <= 12
