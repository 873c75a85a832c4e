from fractions import Fraction

import pytest

from weilheight.algebra.polynomial import Polynomial
from weilheight.error import (
    BadAutomorphism,
    DivisionByZero,
    FieldMismatch,
    NotClosed,
    NotIrreducible,
    ZeroElement,
)
from weilheight.fields.catalog import named_field
from weilheight.fields.number_field import (
    NumberField,
    compose_automorphisms,
    element_arithmetic,
    is_torsion,
    minimal_polynomial,
    norm,
)
from weilheight.fields.parse import parse_element

Q = named_field("Q")
QI = named_field("Q(i)")
QSQRT5 = named_field("Q(sqrt5)")
QZETA5 = named_field("Q(zeta5)")


def P(*coefficients: int) -> Polynomial:
    return Polynomial.make(coefficients)


def test_rational_field_has_generator_zero():
    assert Q.degree == 1
    assert Q.generator == Q.zero
    assert Q.galois


def test_arithmetic_reduces_modulo_the_minimal_polynomial():
    t = QI.generator
    assert t * t == QI.from_rational(-1)
    assert (3 + 4 * t) / (2 + t) == QI.element([2, 1])
    assert (1 + t) ** -1 == QI.element([Fraction(1, 2), Fraction(-1, 2)])
    assert (2 + t) - (2 + t) == QI.zero


def test_element_arithmetic():
    a = QI.element([2, 1])
    b = QI.element([0, 1])
    assert element_arithmetic("add", a, b) == QI.element([2, 2])
    assert element_arithmetic("sub", a, b) == QI.element([2])
    assert element_arithmetic("mul", a, b) == QI.element([-1, 2])
    assert element_arithmetic("div", a, b) == QI.element([1, -2])
    assert element_arithmetic("neg", a) == QI.element([-2, -1])
    assert element_arithmetic("inv", b) == QI.element([0, -1])


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        element_arithmetic("div", QI.one, QI.zero)
    with pytest.raises(DivisionByZero):
        QI.zero.inverse()


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        QI.generator + QSQRT5.generator


@pytest.mark.parametrize(
    "field, text, expected",
    [
        (QI, "1 + t", P(2, -2, 1)),
        (QI, "3/2", Polynomial.make([Fraction(-3, 2), 1])),
        (QSQRT5, "t", P(-1, -1, 1)),
        (QSQRT5, "2*t - 1", P(-5, 0, 1)),
        (QZETA5, "t", P(1, 1, 1, 1, 1)),
        (QZETA5, "t + t^4", P(-1, 1, 1)),
    ],
)
def test_minimal_polynomial(field, text, expected):
    assert minimal_polynomial(parse_element(field, text)) == expected


@pytest.mark.parametrize(
    "field, text, expected",
    [
        (QI, "2 + t", 5),
        (QI, "3 + 4*t", 25),
        (QI, "(1 + t)/2", Fraction(1, 2)),
        (QSQRT5, "t", -1),
        (QZETA5, "1 - t", 5),
        (Q, "-7/3", Fraction(-7, 3)),
    ],
)
def test_norm(field, text, expected):
    assert norm(parse_element(field, text)) == expected


@pytest.mark.parametrize(
    "field, text, expected",
    [
        (Q, "-1", True),
        (Q, "2", False),
        (QI, "t", True),
        (QI, "1 + t", False),
        (QI, "(3 + 4*t)/5", False),
        (QSQRT5, "t", False),
        (QZETA5, "-t", True),
        (QZETA5, "t^3", True),
        (QZETA5, "1 + t", False),
    ],
)
def test_is_torsion(field, text, expected):
    assert is_torsion(parse_element(field, text)) == expected


def test_is_torsion_rejects_zero():
    with pytest.raises(ZeroElement):
        is_torsion(QI.zero)


def test_automorphisms():
    identity, conjugation = QI.automorphisms
    assert identity.is_identity
    a = parse_element(QI, "2 + t")
    assert conjugation(a) == parse_element(QI, "2 - t")
    assert compose_automorphisms(conjugation, conjugation).is_identity
    assert conjugation.inverse() == conjugation


def test_cyclotomic_automorphisms_form_a_group():
    automorphisms = QZETA5.automorphisms
    assert len(automorphisms) == 4
    assert QZETA5.galois
    images = {sigma.image for sigma in automorphisms}
    for sigma in automorphisms:
        assert compose_automorphisms(sigma, sigma.inverse()).is_identity
        for tau in automorphisms:
            assert compose_automorphisms(sigma, tau).image in images


def test_non_galois_field():
    field = named_field("Q(cbrt2)")
    assert field.degree == 3
    assert not field.galois
    assert len(field.automorphisms) == 1


def test_make_validates_automorphisms():
    with pytest.raises(BadAutomorphism):
        NumberField.make(P(1, 0, 1), [[0, 1], [1, 1]])
    with pytest.raises(NotClosed):
        NumberField.make(P(1, 0, 1), [[0, -1]])
    with pytest.raises(NotClosed):
        NumberField.make(P(1, 1, 1, 1, 1), [[0, 1], [0, 0, 1]])


def test_make_rejects_reducible_polynomials():
    with pytest.raises(NotIrreducible):
        NumberField.make(P(-1, 0, 1))
