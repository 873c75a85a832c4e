from __future__ import annotations

from dataclasses import dataclass
from typing import Any, List, Literal, Tuple

from mpmath import mp

from weilheight.algebra.roots import complex_roots
from weilheight.config import DEFAULT_SETTINGS
from weilheight.error import ZeroElement
from weilheight.fields.number_field import FieldElement, minimal_polynomial, norm
from weilheight.mypy_util import add_slots
from weilheight.places.place import (
    LocalValue,
    Place,
    arch_places,
    finite_places,
    log_abs,
)
from weilheight.util import factor_integer

HeightMethod = Literal["place_sum", "mahler", "abs_sum"]


@add_slots
@dataclass(frozen=True)
class HeightResult:
    """
    An absolute logarithmic Weil height.

    Args:
        value: The height
        method: place_sum sums log+ over the places, mahler uses the Mahler measure
            of the minimal polynomial and abs_sum takes half the sum of |log|
        precision_bits: Working precision of the computation
        defect: The weighted sum of log ||a||_v over the places, which vanishes by
            the product formula; only computed by place_sum
    """

    value: Any
    method: HeightMethod
    precision_bits: int
    defect: Any = None


def _check_nonzero(a: FieldElement) -> None:
    if a.is_zero:
        raise ZeroElement("0 has no height")


def support_primes(a: FieldElement) -> Tuple[int, ...]:
    """
    The primes p with ||a||_v != 1 for some place v above p are among these: the
    primes dividing the norm of a and the denominators of its coordinates
    """
    _check_nonzero(a)
    n = norm(a)
    candidates = set(factor_integer(n.numerator))
    candidates |= set(factor_integer(n.denominator))
    candidates |= set(factor_integer(a.denominator))
    return tuple(sorted(candidates))


def support_places(
    a: FieldElement, precision_bits: int = DEFAULT_SETTINGS.precision_bits
) -> Tuple[Place, ...]:
    places: List[Place] = list(arch_places(a.field, precision_bits))
    for p in support_primes(a):
        places.extend(finite_places(a.field, p))
    return tuple(places)


def local_values(
    a: FieldElement, precision_bits: int = DEFAULT_SETTINGS.precision_bits
) -> Tuple[LocalValue, ...]:
    """
    log ||a||_v for every place where it may be nonzero
    """
    return tuple(
        log_abs(place, a, precision_bits) for place in support_places(a, precision_bits)
    )


def height(
    a: FieldElement, precision_bits: int = DEFAULT_SETTINGS.precision_bits
) -> HeightResult:
    """
    h(a) = sum over places v of (d_v / d) log+ ||a||_v
    """
    _check_nonzero(a)
    values = local_values(a, precision_bits)
    with mp.workprec(precision_bits):
        total = mp.fsum(max(v.log_normalized, 0) for v in values)
        defect = mp.fsum(v.log_normalized for v in values)
    return HeightResult(total, "place_sum", precision_bits, defect)


def product_defect(
    a: FieldElement, precision_bits: int = DEFAULT_SETTINGS.precision_bits
) -> Any:
    return height(a, precision_bits).defect


def height_mahler(
    a: FieldElement, precision_bits: int = DEFAULT_SETTINGS.precision_bits
) -> HeightResult:
    """
    h(a) = log M(P) / deg P for the primitive integer minimal polynomial P of a
    """
    _check_nonzero(a)
    primitive = minimal_polynomial(a).primitive()
    roots = complex_roots(primitive, precision_bits)
    with mp.workprec(precision_bits):
        log_measure = mp.log(abs(primitive.leading.numerator))
        log_measure += mp.fsum(max(mp.log(abs(root.value)), 0) for root in roots)
        value = log_measure / primitive.degree
    return HeightResult(value, "mahler", precision_bits)


def height_abs_sum(
    a: FieldElement, precision_bits: int = DEFAULT_SETTINGS.precision_bits
) -> HeightResult:
    """
    h(a) = (1/2) sum over places v of (d_v / d) |log ||a||_v|, a consequence of the
    product formula
    """
    _check_nonzero(a)
    values = local_values(a, precision_bits)
    with mp.workprec(precision_bits):
        value = mp.fsum(abs(v.log_normalized) for v in values) / 2
    return HeightResult(value, "abs_sum", precision_bits)


def height_distance(
    a: FieldElement,
    b: FieldElement,
    precision_bits: int = DEFAULT_SETTINGS.precision_bits,
) -> HeightResult:
    """
    h(a / b), which is a metric on the nonzero elements modulo torsion
    """
    _check_nonzero(a)
    _check_nonzero(b)
    return height(a / b, precision_bits)
