import pytest

from weilheight.algebra.padic import hensel_lift, local_factor
from weilheight.algebra.polynomial import Polynomial
from weilheight.error import NotSquarefree


def P(*coefficients: int) -> Polynomial:
    return Polynomial.make(coefficients)


def test_hensel_lift_square_root_of_minus_one():
    big_g, big_h = hensel_lift(P(1, 0, 1), P(2, 1), P(3, 1), 5, 3)
    assert big_g == P(57, 1)
    assert big_h == P(68, 1)


@pytest.mark.parametrize(
    "f, p, residue_factor, e, digits",
    [
        (P(1, 1, 1, 1, 1), 11, P(2, 1), 1, 10),
        (P(1, 0, 0, 0, 1), 5, P(2, 0, 1), 1, 25),
        (P(1, 0, 0, 0, 1), 13, P(5, 0, 1), 1, 8),
        (P(-2, 0, 1), 7, P(3, 1), 1, 40),
    ],
)
def test_local_factor_divides_modulo_the_precision(f, p, residue_factor, e, digits):
    factor = local_factor(f, p, residue_factor, e, digits)
    assert factor.is_monic
    assert factor.degree == residue_factor.degree * e
    remainder = f % factor
    assert all(c.denominator == 1 for c in remainder.coefficients)
    assert all(c.numerator % p ** digits == 0 for c in remainder.coefficients)


def test_hensel_lift_needs_coprime_factors():
    with pytest.raises(NotSquarefree):
        hensel_lift(P(1, 0, 1), P(1, 1), P(1, 1), 2, 5)
