import pytest
from mpmath import mp

from weilheight.checks import (
    CorpusElement,
    SUnitSystem,
    TowerFiber,
    _close,
    check_element,
    check_fiber,
    check_sunit_system,
    corpus_from_description,
    load_corpus,
    run_checks,
)
from weilheight.error import ParserException
from weilheight.fields.catalog import named_field
from weilheight.fields.parse import parse_element
from weilheight.tower.tower import named_tower

ELEMENT_CHECKS = [
    "product_formula",
    "height_methods",
    "kronecker",
    "isometry",
    "x_membership",
    "galois_invariance",
]


def corpus_element(tower, level, text):
    tower = named_tower(tower)
    return CorpusElement(tower, level, parse_element(tower.field(level), text))


def test_standard_corpus_loads():
    corpus = load_corpus()
    assert corpus.label == "standard"
    assert len(corpus.elements) == 54
    assert len(corpus.fibers) == 24
    assert len(corpus.sunit_systems) == 8
    assert corpus.size == 86


@pytest.mark.parametrize(
    "tower, level, text",
    [
        ("Q", 0, "-6/35"),
        ("Q<Q(i)", 1, "2 + t"),
        ("Q<Q(i)", 1, "t"),
        ("Q<Q(sqrt5)", 1, "t^5"),
        ("Q<Q(i)<Q(zeta8)", 2, "1 + t"),
    ],
)
def test_element_checks_pass(tower, level, text):
    results = check_element(corpus_element(tower, level, text), 128)
    assert [result.check for result in results] == ELEMENT_CHECKS
    assert all(result.passed for result in results), results


def test_kronecker_detail():
    (torsion,) = [
        result
        for result in check_element(corpus_element("Q<Q(i)", 1, "t"), 128)
        if result.check == "kronecker"
    ]
    assert torsion.detail == "torsion"


def test_zero_fails_every_element_check():
    results = check_element(corpus_element("Q", 0, "0"), 128)
    assert len(results) == len(ELEMENT_CHECKS)
    assert not any(result.passed for result in results)
    assert all(result.detail.startswith("ZeroElement: ") for result in results)


@pytest.mark.parametrize(
    "tower, rational_place",
    [("Q<Q(i)<Q(zeta8)", None), ("Q<Q(i)<Q(zeta8)", 17), ("Q<Q(zeta5)", 11)],
)
def test_fiber_checks_pass(tower, rational_place):
    results = check_fiber(TowerFiber(named_tower(tower), rational_place), 128)
    assert [result.check for result in results] == [
        "measure_refinement",
        "equivariance",
    ]
    assert all(result.passed for result in results), results


def test_sunit_checks():
    field = named_field("Q(sqrt5)")
    generators = (parse_element(field, "3 + t"), parse_element(field, "4 - t"))
    (result,) = check_sunit_system(SUnitSystem(field, (11,), generators, True), 128)
    assert result.passed
    assert result.detail.startswith("rank 3 of 3")

    q = named_field("Q")
    dependent = (parse_element(q, "2"), parse_element(q, "4"))
    (result,) = check_sunit_system(SUnitSystem(q, (2, 3), dependent), 128)
    assert not result.passed


def test_sunit_system_with_a_non_unit():
    q = named_field("Q")
    system = SUnitSystem(q, (2,), (parse_element(q, "6"),))
    (result,) = check_sunit_system(system, 128)
    assert not result.passed
    assert result.detail.startswith("NotAnSUnit: ")


def test_run_checks_counts():
    corpus = corpus_from_description(
        {
            "label": "small",
            "elements": [{"tower": "Q<Q(i)", "elem": "(3 + 4*t)/5"}],
            "fibers": [{"tower": "Q<Q(i)", "places": ["inf", 5]}],
            "sunits": [{"field": "Q", "primes": [2], "generators": ["2"]}],
        }
    )
    assert corpus.label == "small"
    assert corpus.elements[0].level == 1
    results = run_checks(corpus, 128)
    assert len(results) == len(ELEMENT_CHECKS) + 2 * 2 + 1
    assert all(result.passed for result in results), results


@pytest.mark.parametrize(
    "data",
    [
        {"elements": [{"tower": "Q"}]},
        {"elements": [{"tower": "nowhere", "elem": "2"}]},
        {"elements": [{"tower": "Q", "elem": "2 +"}]},
        {"fibers": [{"tower": "Q<Q(i)", "places": [4]}]},
        {"fibers": [{"tower": "Q<Q(i)"}]},
        {"sunits": [{"field": "Q", "primes": ["two"], "generators": []}]},
    ],
)
def test_malformed_corpus(data):
    with pytest.raises(ParserException):
        corpus_from_description(data)


def test_standard_corpus_passes():
    results = run_checks(load_corpus(), 128)
    assert len(results) == 54 * len(ELEMENT_CHECKS) + 24 * 2 + 8
    failures = [result for result in results if not result.passed]
    assert not failures, failures


@pytest.mark.parametrize(
    "defect, expected",
    [
        (mp.mpf(10) ** -12, False),
        (mp.mpf(10) ** -24, False),
        (mp.mpf(10) ** -27, True),
        (0, True),
    ],
)
def test_identities_are_checked_below_1e_25(defect, expected):
    assert _close(defect, 0, 128) == expected
    with mp.workprec(128):
        base = mp.log(3)
        shifted = base + defect
    assert _close(shifted, base, 128) == expected
