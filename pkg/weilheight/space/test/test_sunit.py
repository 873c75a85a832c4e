import itertools

import pytest
from mpmath import mp

from weilheight.error import (
    BadShape,
    FieldMismatch,
    NotAnSUnit,
    NotRealQuadratic,
)
from weilheight.fields.catalog import named_field, quadratic_field
from weilheight.fields.number_field import norm
from weilheight.fields.parse import parse_element
from weilheight.places.place import arch_places, finite_places
from weilheight.space.sunit import fundamental_unit, sunit_matrix

# expected values are compared to 25 digits
mp.prec = 128
TOLERANCE = mp.mpf(10) ** -25
LOG2 = mp.log(2)
LOG3 = mp.log(3)

Q = named_field("Q")
QI = named_field("Q(i)")


def places_of(field, *primes):
    places = list(arch_places(field))
    for p in primes:
        places.extend(finite_places(field, p))
    return places


def elements(field, *texts):
    return [parse_element(field, text) for text in texts]


def test_matrix_over_q():
    m = sunit_matrix(Q, places_of(Q, 2, 3), elements(Q, "2", "3"))
    assert m.place_ids == ("arch:r0", "fin:2:0.1", "fin:3:0.1")
    expected = [[LOG2, -LOG2, 0], [LOG3, 0, -LOG3]]
    for row, expected_row in zip(m.entries, expected):
        for entry, value in zip(row, expected_row):
            assert abs(entry - value) < TOLERANCE
    assert m.rank == 2
    assert m.full_rank
    assert len(m.nullspace_basis) == 1
    assert m.nullspace_angle() < TOLERANCE
    assert m.null_spread() < TOLERANCE
    assert all(abs(total) < TOLERANCE for total in m.row_sums())
    assert m.check()


def test_matrix_of_the_unit_of_q_sqrt2():
    field = named_field("Q(sqrt2)")
    unit = fundamental_unit(field)
    m = sunit_matrix(field, places_of(field), [unit])
    (row,) = m.entries
    log_unit = mp.log(1 + mp.sqrt(2))
    assert abs(sorted(row)[0] + log_unit) < TOLERANCE
    assert abs(sorted(row)[1] - log_unit) < TOLERANCE
    assert abs(log_unit - mp.mpf("0.881373587019543")) < mp.mpf(10) ** -14
    assert m.rank == 1
    (kernel,) = m.nullspace_basis
    assert abs(abs(kernel[0]) - 1 / mp.sqrt(2)) < TOLERANCE
    assert abs(kernel[0] - kernel[1]) < TOLERANCE
    assert m.check()


@pytest.mark.parametrize(
    "name, primes, texts",
    [
        ("Q", (2,), ("2",)),
        ("Q", (2, 3, 5), ("2", "3", "5")),
        ("Q", (2, 3, 5, 7), ("6", "15/7", "5", "7")),
        ("Q(i)", (5,), ("2 + t", "2 - t")),
        ("Q(i)", (2, 5), ("1 + t", "2 + t", "2 - t")),
        ("Q(sqrt5)", (), ("t",)),
        ("Q(zeta5)", (), ("1 + t",)),
        ("Q(zeta5)", (5,), ("1 + t", "1 - t")),
    ],
)
def test_fundamental_systems_have_full_rank(name, primes, texts):
    field = named_field(name)
    m = sunit_matrix(field, places_of(field, *primes), elements(field, *texts))
    assert m.rank == len(m.places) - 1
    assert m.check()


PRIMES_TO_13 = (2, 3, 5, 7, 11, 13)
S_SETS = [
    primes
    for size in range(1, 6)
    for primes in itertools.combinations(PRIMES_TO_13, size)
]


@pytest.mark.parametrize("primes", S_SETS)
def test_rational_primes_have_full_rank(primes):
    texts = [str(p) for p in primes]
    m = sunit_matrix(Q, places_of(Q, *primes), elements(Q, *texts))
    assert m.full_rank
    assert m.nullspace_angle() < mp.mpf(10) ** -10
    assert m.check()


def test_dependent_units():
    m = sunit_matrix(Q, places_of(Q, 2, 3), elements(Q, "2", "4"))
    assert m.rank == 1
    assert not m.full_rank
    assert len(m.nullspace_basis) == 2
    assert m.nullspace_angle() < TOLERANCE
    assert m.null_spread() > TOLERANCE
    assert not m.check()


@pytest.mark.parametrize(
    "name, primes, texts, place_id",
    [
        ("Q", (2,), ("6",), "fin:3:0.1"),
        ("Q", (2, 3), ("2", "1/5"), "fin:5:0.1"),
        ("Q(i)", (2,), ("2 + t",), "fin:5:2.1"),
    ],
)
def test_not_an_s_unit(name, primes, texts, place_id):
    field = named_field(name)
    with pytest.raises(NotAnSUnit) as info:
        sunit_matrix(field, places_of(field, *primes), elements(field, *texts))
    assert info.value.place_id == place_id


def test_one_finite_place_of_a_split_prime():
    places = list(arch_places(QI)) + [finite_places(QI, 5)[1]]
    with pytest.raises(NotAnSUnit) as info:
        sunit_matrix(QI, places, elements(QI, "2 + t"))
    assert info.value.place_id == "fin:5:2.1"
    assert sunit_matrix(QI, places, elements(QI, "2 - t")).check()


@pytest.mark.parametrize(
    "places, texts",
    [
        (places_of(Q, 2), ("2", "3")),
        (places_of(Q, 2, 3), ("6",)),
        (places_of(Q), ()),
        (list(finite_places(Q, 2)) + list(finite_places(Q, 3)), ("2/3",)),
        (places_of(Q, 2) + list(finite_places(Q, 2)), ("2", "2")),
    ],
)
def test_bad_shapes(places, texts):
    with pytest.raises(BadShape):
        sunit_matrix(Q, places, elements(Q, *texts))


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        sunit_matrix(QI, places_of(QI, 5), elements(Q, "5", "5"))
    with pytest.raises(FieldMismatch):
        sunit_matrix(QI, places_of(Q, 5), elements(QI, "5"))


@pytest.mark.parametrize(
    "field, expected",
    [
        (named_field("Q(sqrt2)"), [1, 1]),
        (named_field("Q(sqrt5)"), [0, 1]),
        (quadratic_field(0, -3), [2, 1]),
        (quadratic_field(0, -7), [8, 3]),
        (quadratic_field(0, -13), [18, 5]),
        (quadratic_field(1, -1), [1, 1]),
    ],
)
def test_fundamental_unit(field, expected):
    unit = fundamental_unit(field)
    assert unit == field.element(expected)
    assert abs(norm(unit)) == 1


@pytest.mark.parametrize("name", ["Q", "Q(i)", "Q(zeta5)", "Q(cbrt2)"])
def test_fundamental_unit_needs_a_real_quadratic_field(name):
    with pytest.raises(NotRealQuadratic):
        fundamental_unit(named_field(name))
