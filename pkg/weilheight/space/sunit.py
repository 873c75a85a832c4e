"""
The matrix M = (d_v log ||xi_r||_v) of a system of S-units xi_1, ..., xi_{s-1}, with
rows indexed by the units and columns by the s places of S. By the product formula
the all-ones vector u is in the kernel of M; for a fundamental system M has rank
s - 1, so its kernel is exactly the line through u.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, List, Sequence, Tuple

from mpmath import mp

from weilheight.config import DEFAULT_SETTINGS, Settings
from weilheight.error import (
    BadShape,
    FieldMismatch,
    NotAnSUnit,
    NotRealQuadratic,
    PrecisionExhausted,
)
from weilheight.fields.number_field import FieldElement, NumberField, norm
from weilheight.mypy_util import add_slots, cache
from weilheight.places.height import support_primes
from weilheight.places.place import Place, arch_places, finite_places, log_abs
from weilheight.util import tolerance

logger = logging.getLogger(__name__)

Vector = Tuple[Any, ...]


@add_slots
@dataclass(frozen=True)
class SUnitMatrix:
    """
    Args:
        field: The field of the units
        places: The set S, one column each
        generators: The units, one row each
        entries: entries[r][i] = d_v log ||generators[r]||_v for v = places[i]
        rank: Number of singular values above the rank tolerance
        singular_values: The singular values of M, decreasing
        nullspace_basis: Orthonormal basis of the numeric kernel of M
        precision_bits: Working precision
    """

    field: NumberField
    places: Tuple[Place, ...]
    generators: Tuple[FieldElement, ...]
    entries: Tuple[Vector, ...]
    rank: int
    singular_values: Vector
    nullspace_basis: Tuple[Vector, ...]
    precision_bits: int

    @property
    def place_ids(self) -> Tuple[str, ...]:
        return tuple(place.place_id for place in self.places)

    @property
    def full_rank(self) -> bool:
        return self.rank == len(self.places) - 1

    def row_sums(self) -> Vector:
        with mp.workprec(self.precision_bits):
            return tuple(mp.fsum(row) for row in self.entries)

    def nullspace_angle(self) -> Any:
        """
        The angle between u and the numeric kernel of M, pi / 2 if the kernel is 0
        """
        s = len(self.places)
        with mp.workprec(self.precision_bits):
            unit = [1 / mp.sqrt(s)] * s
            if not self.nullspace_basis:
                return mp.pi / 2
            projection = [mp.zero] * s
            for vector in self.nullspace_basis:
                dot = mp.fdot(vector, unit)
                projection = [x + dot * y for x, y in zip(projection, vector)]
            along = mp.norm(mp.matrix(projection))
            across = mp.norm(mp.matrix([x - y for x, y in zip(unit, projection)]))
            return mp.atan2(across, along)

    def null_spread(self) -> Any:
        """
        The largest max_v t_v - min_v t_v over the unit kernel basis vectors t; a
        kernel spanned by u has spread 0
        """
        with mp.workprec(self.precision_bits):
            return max(
                (max(t) - min(t) for t in self.nullspace_basis), default=mp.zero
            )

    def check(self) -> bool:
        """
        Whether M has rank s - 1 and its kernel is the line through u
        """
        eps = tolerance(self.precision_bits)
        with mp.workprec(self.precision_bits):
            return (
                self.full_rank
                and len(self.nullspace_basis) == 1
                and self.nullspace_angle() < eps
                and self.null_spread() < eps
            )


def _check_places(field: NumberField, places: Sequence[Place], bits: int) -> None:
    if len(places) < 2:
        raise BadShape(f"S needs at least 2 places, got {len(places)}")
    ids = [place.place_id for place in places]
    if len(set(ids)) != len(ids):
        raise BadShape(f"S lists a place twice: {', '.join(ids)}")
    for place in places:
        if place.field != field:
            raise FieldMismatch(f"{place} is not a place of {field}")
    arch_ids = [place.place_id for place in arch_places(field, bits)]
    missing = [place_id for place_id in arch_ids if place_id not in ids]
    if missing:
        raise BadShape(f"S must contain the archimedean places {', '.join(missing)}")


def _check_sunit(
    xi: FieldElement, places: Sequence[Place], bits: int, settings: Settings
) -> None:
    in_s = {place.place_id for place in places}
    eps = tolerance(bits)
    for p in support_primes(xi):
        for place in finite_places(xi.field, p):
            if place.place_id in in_s:
                continue
            value = log_abs(place, xi, bits, settings)
            if value.valuation is not None:
                off = value.valuation != 0
            else:
                off = abs(value.log_abs) >= eps
            if off:
                raise NotAnSUnit(
                    f"{xi} is not a unit at {place}, which is not in S", place.place_id
                )


def sunit_matrix(
    field: NumberField,
    places: Sequence[Place],
    generators: Sequence[FieldElement],
    precision_bits: int = DEFAULT_SETTINGS.precision_bits,
    settings: Settings = DEFAULT_SETTINGS,
) -> SUnitMatrix:
    """
    Build M and compute its rank and kernel by a singular value decomposition at the
    working precision.

    Raises:
        BadShape: S misses an archimedean place, has fewer than 2 places or does not
            have one more place than there are generators
        NotAnSUnit: a generator has a nonzero valuation at a place outside S
        FieldMismatch: a place or a generator belongs to another field
    """
    _check_places(field, places, precision_bits)
    if len(generators) != len(places) - 1:
        raise BadShape(
            f"{len(places)} places need {len(places) - 1} units, got {len(generators)}"
        )
    for xi in generators:
        if xi.field != field:
            raise FieldMismatch(f"{xi} is not in {field}")
        _check_sunit(xi, places, precision_bits, settings)

    rows: List[Vector] = []
    with mp.workprec(precision_bits):
        for xi in generators:
            rows.append(
                tuple(
                    place.local_degree * log_abs(place, xi, precision_bits).log_abs
                    for place in places
                )
            )
        _, singular, v = mp.svd_r(mp.matrix(rows), full_matrices=True)
        singular_values = tuple(singular[i] for i in range(len(singular)))
        threshold = settings.rank_tolerance * max(1, *singular_values)
        rank = sum(1 for sigma in singular_values if sigma > threshold)
        s = len(places)
        kernel = tuple(tuple(v[i, j] for j in range(s)) for i in range(rank, s))

    logger.debug(
        "S-unit matrix of %s on %s has rank %d",
        field,
        ", ".join(place.place_id for place in places),
        rank,
    )
    return SUnitMatrix(
        field,
        tuple(places),
        tuple(generators),
        tuple(rows),
        rank,
        singular_values,
        kernel,
        precision_bits,
    )


def _floor_quadratic(p: int, q: int, d: int) -> int:
    """
    floor((p + sqrt(d)) / q) for a nonsquare d > 0 and q != 0
    """
    k = math.isqrt(d)
    return (p + k) // q if q > 0 else (p + k + 1) // q


@cache
def fundamental_unit(
    field: NumberField, settings: Settings = DEFAULT_SETTINGS
) -> FieldElement:
    """
    The fundamental unit of Z[t] for a real quadratic field, the one greater than 1
    at the larger root. If p/q is a convergent of the larger root alpha with
    N(p - q t) = +-1 then p - q t is a unit that is small at alpha, and the first
    such convergent gives the fundamental one; its inverse is returned up to sign.

    Raises:
        NotRealQuadratic: field is not a real quadratic field
        PrecisionExhausted: no unit within settings.continued_fraction_terms terms
    """
    if field.degree != 2:
        raise NotRealQuadratic(f"{field} is not quadratic")
    a0, a1, _ = field.min_poly.integer_coefficients()
    d = a1 * a1 - 4 * a0
    if d <= 0:
        raise NotRealQuadratic(f"{field} is imaginary quadratic")

    # alpha = (-a1 + sqrt(d)) / 2 = (p + sqrt(d)) / q with q | d - p^2
    p, q = -a1, 2
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    for _ in range(settings.continued_fraction_terms):
        a = _floor_quadratic(p, q, d)
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        candidate = field.element([h, -k])
        if abs(norm(candidate)) == 1:
            unit = field.element([h + k * a1, k])
            logger.debug("fundamental unit of %s: %s", field, unit)
            return unit
        p = a * q - p
        q = (d - p * p) // q
    raise PrecisionExhausted(
        f"no unit of {field} among {settings.continued_fraction_terms} convergents"
    )
