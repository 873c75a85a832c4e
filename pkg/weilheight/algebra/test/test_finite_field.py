import pytest

from weilheight.algebra.finite_field import (
    add,
    dedekind_maximal_at_p,
    factor_mod_p,
    gcdext,
    is_irreducible_mod_p,
    mul,
    reduce_mod_p,
)
from weilheight.algebra.polynomial import Polynomial
from weilheight.error import NotPrime


def P(*coefficients: int) -> Polynomial:
    return Polynomial.make(coefficients)


@pytest.mark.parametrize(
    "f, p, expected",
    [
        (P(1, 0, 1), 5, ((P(2, 1), 1), (P(3, 1), 1))),
        (P(1, 0, 1), 2, ((P(1, 1), 2),)),
        (P(1, 0, 1), 3, ((P(1, 0, 1), 1),)),
        (P(1, 0, 0, 0, 1), 3, ((P(2, 1, 1), 1), (P(2, 2, 1), 1))),
        (P(1, 0, 0, 0, 1), 2, ((P(1, 1), 4),)),
        (P(1, 1, 1, 1, 1), 5, ((P(4, 1), 4),)),
        (
            P(1, 1, 1, 1, 1),
            11,
            ((P(2, 1), 1), (P(6, 1), 1), (P(7, 1), 1), (P(8, 1), 1)),
        ),
        (P(1, 1, 1, 1, 1, 1, 1), 2, ((P(1, 0, 1, 1), 1), (P(1, 1, 0, 1), 1))),
        (P(-1, 0, 0, 1), 2, ((P(1, 1), 1), (P(1, 1, 1), 1))),
        (P(1, 0, 1) * P(1, 0, 1), 3, ((P(1, 0, 1), 2),)),
    ],
)
def test_factor_mod_p(f, p, expected):
    assert factor_mod_p(f, p) == expected


def test_factor_mod_p_reproduces_the_polynomial():
    f = P(3, 1, 4, 1, 5, 9, 2, 6, 1)
    for p in (2, 3, 7, 13, 31):
        product = P(1)
        for g, multiplicity in factor_mod_p(f, p):
            product = product * g ** multiplicity
        assert reduce_mod_p(product, p) == reduce_mod_p(f, p)


def test_factor_mod_p_rejects_composites():
    with pytest.raises(NotPrime):
        factor_mod_p(P(1, 0, 1), 4)


def test_gcdext():
    a = reduce_mod_p(P(2, 1), 5)
    b = reduce_mod_p(P(3, 1), 5)
    common, s, t = gcdext(a, b, 5)
    assert common == (1,)
    assert add(mul(s, a, 5), mul(t, b, 5), 5) == (1,)


def test_is_irreducible_mod_p():
    assert is_irreducible_mod_p(P(1, 0, 1), 3)
    assert not is_irreducible_mod_p(P(1, 0, 1), 5)
    assert not is_irreducible_mod_p(P(1, 0, 1), 2)


@pytest.mark.parametrize(
    "f, p, expected",
    [
        (P(-5, 0, 1), 2, False),
        (P(-1, -1, 1), 2, True),
        (P(1, 0, 1), 2, True),
        (P(3, 0, 1), 2, False),
        (P(1, 1, 1, 1, 1), 5, True),
        (P(1, 0, 0, 0, 1), 2, True),
        (P(-2, 0, 0, 1), 3, True),
        (P(1, 0, 1), 7, True),
    ],
)
def test_dedekind_maximal_at_p(f, p, expected):
    assert dedekind_maximal_at_p(f, p) == expected
