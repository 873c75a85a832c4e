from fractions import Fraction

import pytest
from mpmath import mp

from weilheight.config import DEFAULT_SETTINGS, Settings
from weilheight.error import NotPrime
from weilheight.util import (
    as_mpf,
    decimal_string,
    euler_phi,
    factor_integer,
    identity_tolerance,
    is_prime,
    mpf_to_fraction,
    primes_up_to,
    require_prime,
    tolerance,
    valuation,
)


@pytest.mark.parametrize(
    "n, expected",
    [
        (0, False),
        (1, False),
        (2, True),
        (41, True),
        (91, False),
        (561, False),
        (7919, True),
        (2 ** 61 - 1, True),
        (3215031751, False),
        (1000000007 * 998244353, False),
    ],
)
def test_is_prime(n, expected):
    assert is_prime(n) == expected


def test_require_prime():
    require_prime(13)
    with pytest.raises(NotPrime):
        require_prime(15)


def test_primes_up_to():
    assert primes_up_to(30) == (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)
    assert primes_up_to(1) == ()


@pytest.mark.parametrize(
    "n, expected",
    [
        (1, {}),
        (-12, {2: 2, 3: 1}),
        (1024, {2: 10}),
        (1000003 * 1000033, {1000003: 1, 1000033: 1}),
        (2 ** 3 * 1000000007 ** 2, {2: 3, 1000000007: 2}),
    ],
)
def test_factor_integer(n, expected):
    assert factor_integer(n) == expected


@pytest.mark.parametrize(
    "q, p, expected",
    [(12, 2, 2), (Fraction(3, 8), 2, -3), (Fraction(-50, 7), 5, 2), (7, 3, 0)],
)
def test_valuation(q, p, expected):
    assert valuation(q, p) == expected


@pytest.mark.parametrize("n, expected", [(1, 1), (5, 4), (8, 4), (12, 4), (36, 12)])
def test_euler_phi(n, expected):
    assert euler_phi(n) == expected


def test_mpf_conversions():
    assert as_mpf(Fraction(1, 4)) == mp.mpf("0.25")
    assert as_mpf("-1.5") == mp.mpf(-1.5)
    assert mpf_to_fraction(mp.mpf("0.375")) == Fraction(3, 8)
    assert mpf_to_fraction(mp.mpf(12)) == 12
    assert mpf_to_fraction(0) == 0


def test_tolerance_and_decimal_strings():
    assert tolerance(128) == mp.ldexp(1, -32)
    assert identity_tolerance(128) == mp.ldexp(1, -85)
    assert identity_tolerance(128) < mp.mpf(10) ** -25
    assert identity_tolerance(256) < identity_tolerance(128) < tolerance(128)
    assert decimal_string(mp.mpf(1) / 4, 64) == "0.25"
    assert decimal_string(mp.log(2), 53).startswith("0.693147180559")


def test_settings_make():
    settings = Settings.make(256, 100)
    assert settings.precision_bits == 256
    assert settings.denominator_bound == 100
    assert settings.rank_tolerance == DEFAULT_SETTINGS.rank_tolerance
