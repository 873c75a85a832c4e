from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List, Optional, Tuple, Union

from mpmath import mp

from weilheight.algebra.finite_field import dedekind_maximal_at_p, factor_mod_p
from weilheight.algebra.padic import local_factor
from weilheight.algebra.polynomial import Polynomial, resultant
from weilheight.algebra.roots import complex_roots
from weilheight.config import DEFAULT_SETTINGS, Settings
from weilheight.error import (
    FieldMismatch,
    NonMaximalOrder,
    ParserException,
    PrecisionExhausted,
    ZeroElement,
)
from weilheight.fields.number_field import FieldElement, NumberField, norm
from weilheight.mypy_util import add_slots, assert_never, cache
from weilheight.util import int_valuation, is_prime, require_prime, valuation

logger = logging.getLogger(__name__)

# a prime p, or None for the archimedean place of Q
RationalPlace = Optional[int]


def rational_place_label(rational_place: RationalPlace) -> str:
    return "inf" if rational_place is None else str(rational_place)


def parse_rational_place(text: str) -> RationalPlace:
    if text.strip().lower() in ("inf", "infinity", "∞"):
        return None
    try:
        p = int(text)
    except ValueError:
        raise ParserException(f"{text!r} is neither a prime nor inf") from None
    if not is_prime(p):
        raise ParserException(f"{p} is not prime")
    return p


def rational_place_key(rational_place: RationalPlace) -> Tuple[int, int]:
    """
    Sorts inf before the primes
    """
    return (0, 0) if rational_place is None else (1, rational_place)


@add_slots
@dataclass(frozen=True)
class RealPlace:
    root_index: int


@add_slots
@dataclass(frozen=True)
class ComplexPlace:
    """
    The pair of complex embeddings sending t to a root and to its conjugate; the
    root with positive imaginary part represents the place
    """

    root_index: int
    conjugate_index: int


@add_slots
@dataclass(frozen=True)
class FinitePlace:
    """
    The prime ideal (p, g(t)) for the factor g^e of min_poly mod p.

    Args:
        p: The rational prime below
        residue_factor: Coefficients of g, lowest degree first, in [0, p)
        e: Ramification index
        f: Residue degree
        maximal: Whether Z[t] is maximal at p; if it is not, p has a single place
            and e, f only describe the factorization mod p
    """

    p: int
    residue_factor: Tuple[int, ...]
    e: int
    f: int
    maximal: bool = True


PlaceKind = Union[RealPlace, ComplexPlace, FinitePlace]


@add_slots
@dataclass(frozen=True)
class Place:
    field: NumberField
    kind: PlaceKind
    place_id: str

    @property
    def local_degree(self) -> int:
        if isinstance(self.kind, RealPlace):
            return 1
        elif isinstance(self.kind, ComplexPlace):
            return 2
        elif isinstance(self.kind, FinitePlace):
            return self.kind.e * self.kind.f
        else:
            assert_never(self.kind)

    @property
    def rational_place(self) -> RationalPlace:
        if isinstance(self.kind, FinitePlace):
            return self.kind.p
        return None

    @property
    def is_archimedean(self) -> bool:
        return not isinstance(self.kind, FinitePlace)

    @property
    def weight(self) -> Fraction:
        return Fraction(self.local_degree, self.field.degree)

    def __str__(self) -> str:
        return self.place_id


@add_slots
@dataclass(frozen=True)
class LocalValue:
    """
    log ||a||_v for one place, unnormalized and multiplied by the weight d_v / d.
    For finite places valuation is ord_P(a), or None when Z[t] is not maximal at p.
    """

    place: Place
    log_abs: Any
    log_normalized: Any
    valuation: Optional[int]
    precision_bits: int


@cache
def arch_places(
    field: NumberField, precision_bits: int = DEFAULT_SETTINGS.precision_bits
) -> Tuple[Place, ...]:
    """
    One place per real root and per conjugate pair of roots of min_poly, in root
    order; the place ids are arch:r<i> and arch:c<i> for the root index i
    """
    places: List[Place] = []
    for i, root in enumerate(complex_roots(field.min_poly, precision_bits)):
        if root.conjugate is None:
            places.append(Place(field, RealPlace(i), f"arch:r{i}"))
        elif root.imag > 0:
            kind = ComplexPlace(i, root.conjugate)
            places.append(Place(field, kind, f"arch:c{i}"))
    return tuple(places)


def _finite_place_id(p: int, residue_factor: Tuple[int, ...]) -> str:
    return f"fin:{p}:" + ".".join(str(c) for c in residue_factor)


@cache
def finite_places(field: NumberField, p: int) -> Tuple[Place, ...]:
    """
    The places above p, from the factorization of min_poly mod p.

    Raises:
        NotPrime: p is not prime
        NonMaximalOrder: Z[t] is not maximal at p and p has several places
    """
    require_prime(p)
    factors = factor_mod_p(field.min_poly, p)
    maximal = dedekind_maximal_at_p(field.min_poly, p)
    if len(factors) > 1 and not maximal:
        raise NonMaximalOrder(p)
    places: List[Place] = []
    for g, e in factors:
        residue_factor = g.integer_coefficients()
        kind = FinitePlace(p, residue_factor, e, g.degree, maximal)
        places.append(Place(field, kind, _finite_place_id(p, residue_factor)))
    return tuple(places)


def fiber(
    field: NumberField,
    rational_place: RationalPlace,
    precision_bits: int = DEFAULT_SETTINGS.precision_bits,
) -> Tuple[Place, ...]:
    """
    The places of field above a place of Q
    """
    if rational_place is None:
        return arch_places(field, precision_bits)
    return finite_places(field, rational_place)


def _arch_log_abs(
    place: Place, kind: Union[RealPlace, ComplexPlace], a: FieldElement, bits: int
) -> Any:
    working = bits
    while working <= DEFAULT_SETTINGS.max_precision_bits:
        root = complex_roots(place.field.min_poly, working)[kind.root_index]
        with mp.workprec(working):
            value = a.polynomial.evaluate_mp(root.value)
            if abs(value) > root.evaluation_error(a.polynomial):
                return mp.log(abs(value))
        logger.debug("|%s| at %s is not resolved at %d bits", a, place, working)
        working *= 2
    raise PrecisionExhausted(f"|{a}| at {place} is too close to 0")


def _local_valuation(
    place: Place, kind: FinitePlace, a: FieldElement, settings: Settings
) -> int:
    """
    ord_P(a) from the p-adic valuation of the resultant of the local factor of
    min_poly at P with the integer polynomial of a, which equals f * ord_P
    """
    field = place.field
    denominator = a.denominator
    numerator = a.polynomial * denominator
    residue_factor = Polynomial.make(kind.residue_factor)
    digits = settings.hensel_start_digits
    while digits <= settings.hensel_max_digits:
        factor = local_factor(field.min_poly, kind.p, residue_factor, kind.e, digits)
        r = resultant(factor, numerator).numerator
        # r is only known mod p^digits
        if r != 0 and int_valuation(r, kind.p) < digits // 2:
            break
        logger.debug("valuation at %s not stable at %d digits", place, digits)
        digits *= 2
    else:
        raise PrecisionExhausted(f"the valuation of {a} at {place} is too large")
    v = int_valuation(r, kind.p)
    if v % kind.f:
        raise NonMaximalOrder(kind.p)
    return v // kind.f - kind.e * int_valuation(denominator, kind.p)


def log_abs(
    place: Place,
    a: FieldElement,
    precision_bits: int = DEFAULT_SETTINGS.precision_bits,
    settings: Settings = DEFAULT_SETTINGS,
) -> LocalValue:
    """
    log ||a||_v. At a finite place above p this is -(ord_P(a) / e) log p, at an
    archimedean place it is log |a(root)|.

    Raises:
        FieldMismatch: a does not belong to the field of the place
        ZeroElement: a is 0
    """
    if a.field != place.field:
        raise FieldMismatch(f"{a} is not in {place.field}")
    if a.is_zero:
        raise ZeroElement("log ||0|| is -infinity")
    kind = place.kind
    ord_p: Optional[int] = None
    if isinstance(kind, (RealPlace, ComplexPlace)):
        value = _arch_log_abs(place, kind, a, precision_bits)
    elif isinstance(kind, FinitePlace):
        field = place.field
        with mp.workprec(precision_bits):
            log_p = mp.log(kind.p)
            if place.local_degree == field.degree:
                # the only place above p: ||a||^d = |N(a)|_p
                v_norm = valuation(norm(a), kind.p)
                value = -log_p * v_norm / field.degree
                if kind.maximal:
                    ord_p = v_norm // kind.f
            else:
                ord_p = _local_valuation(place, kind, a, settings)
                value = -log_p * ord_p / kind.e
    else:
        assert_never(kind)
    with mp.workprec(precision_bits):
        normalized = value * place.local_degree / place.field.degree
    return LocalValue(place, value, normalized, ord_p, precision_bits)
