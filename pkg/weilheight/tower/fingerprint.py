"""
Places are told apart by the values log ||a||_v of a few sample elements a. Two
values of |z + c| fix a complex number z up to conjugation, so the shifted
generators separate the archimedean places; the residue factors g(t) of the places
above p have positive valuation at exactly one of them, so they separate the finite
places of a p-maximal order.
"""
from __future__ import annotations

import logging
from typing import Any, Callable, List, Sequence, Tuple, Type

from mpmath import mp

from weilheight.algebra.polynomial import Polynomial
from weilheight.config import DEFAULT_SETTINGS, Settings
from weilheight.error import TowerException
from weilheight.fields.number_field import FieldElement, NumberField
from weilheight.places.place import (
    FinitePlace,
    Place,
    RationalPlace,
    finite_places,
    log_abs,
)
from weilheight.util import tolerance

logger = logging.getLogger(__name__)

Fingerprint = Tuple[Any, ...]


def sample_elements(
    field: NumberField,
    rational_place: RationalPlace,
    settings: Settings = DEFAULT_SETTINGS,
) -> Tuple[FieldElement, ...]:
    t = field.generator
    samples = [t] + [t + c for c in settings.sample_shifts]
    if rational_place is not None and field.degree > 1:
        for place in finite_places(field, rational_place):
            if isinstance(place.kind, FinitePlace):
                residue_factor = Polynomial.make(place.kind.residue_factor)
                samples.append(field.from_polynomial(residue_factor))
    return tuple(a for a in dict.fromkeys(samples) if not a.is_zero)


def fingerprint(
    place: Place, elements: Sequence[FieldElement], precision_bits: int
) -> Fingerprint:
    return tuple(log_abs(place, a, precision_bits).log_abs for a in elements)


def matching_places(
    target: Fingerprint,
    candidates: Sequence[Place],
    samples: Sequence[FieldElement],
    precision_bits: int,
) -> List[Place]:
    """
    The candidates whose fingerprint on samples agrees with target to the tolerance
    of precision_bits
    """
    eps = tolerance(precision_bits)
    matches = []
    for candidate in candidates:
        values = fingerprint(candidate, samples, precision_bits)
        with mp.workprec(precision_bits):
            if all(abs(x - y) < eps for x, y in zip(target, values)):
                matches.append(candidate)
    return matches


def unique_match(
    find: Callable[[int], List[Place]],
    precision_bits: int,
    error: Type[TowerException],
    description: str,
    settings: Settings = DEFAULT_SETTINGS,
) -> Place:
    """
    Run find at doubling precision until it returns exactly one place.

    Raises:
        error: find never returned a single place below the precision cap
    """
    working = precision_bits
    while working <= settings.max_precision_bits:
        matches = find(working)
        if len(matches) == 1:
            return matches[0]
        logger.debug("%s: %d candidates at %d bits", description, len(matches), working)
        working *= 2
    raise error(f"{description} is not determined by the sample elements")
