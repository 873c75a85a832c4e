from __future__ import annotations

import math
from typing import Callable, Dict, Optional, Tuple

from weilheight.algebra.polynomial import Polynomial, cyclotomic_polynomial
from weilheight.error import ParserException
from weilheight.fields.number_field import NumberField
from weilheight.mypy_util import cache


def rational_field() -> NumberField:
    """
    Q, presented by the polynomial x so that its generator is 0
    """
    return NumberField.make(Polynomial.x(), label="Q")


def quadratic_field(a1: int, a0: int, label: Optional[str] = None) -> NumberField:
    """
    Q[x]/(x^2 + a1 x + a0), with the conjugation t -> -t - a1
    """
    min_poly = Polynomial.make([a0, a1, 1])
    return NumberField.make(min_poly, [[0, 1], [-a1, -1]], label)


def cyclotomic_field(n: int, label: Optional[str] = None) -> NumberField:
    """
    Q(zeta_n) = Q[x]/(Phi_n), with the automorphisms t -> t^k for k prime to n
    """
    min_poly = cyclotomic_polynomial(n)
    powers = [Polynomial.monomial(k) for k in range(1, n + 1) if math.gcd(k, n) == 1]
    images = [(power % min_poly).coefficients for power in powers]
    return NumberField.make(min_poly, images, label or f"Q(zeta{n})")


def pure_cubic_field(a: int) -> NumberField:
    """
    Q(cbrt a), which is not Galois over Q
    """
    return NumberField.make(Polynomial.make([-a, 0, 0, 1]), label=f"Q(cbrt{a})")


_NAMED_FIELDS: Dict[str, Callable[[], NumberField]] = {
    "Q": rational_field,
    "Q(i)": lambda: cyclotomic_field(4, "Q(i)"),
    "Q(sqrt2)": lambda: quadratic_field(0, -2, "Q(sqrt2)"),
    "Q(sqrt5)": lambda: quadratic_field(-1, -1, "Q(sqrt5)"),
    "Q(zeta5)": lambda: cyclotomic_field(5),
    "Q(zeta8)": lambda: cyclotomic_field(8),
    "Q(cbrt2)": lambda: pure_cubic_field(2),
}


def field_names() -> Tuple[str, ...]:
    return tuple(_NAMED_FIELDS)


@cache
def named_field(name: str) -> NumberField:
    """
    A field from the built-in catalog. Q(sqrt5) is presented by x^2 - x - 1, whose
    order is maximal at every prime.
    """
    try:
        make = _NAMED_FIELDS[name]
    except KeyError:
        raise ParserException(f"unknown field {name!r}") from None
    return make()
