from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, FrozenSet, List, Mapping, Tuple

from frozendict import frozendict
from mpmath import mp

from weilheight.config import DEFAULT_SETTINGS, Settings
from weilheight.error import (
    AmbiguousAction,
    FieldMismatch,
    NotStabilized,
    ParserException,
)
from weilheight.fields.number_field import (
    Automorphism,
    NumberField,
    compose_automorphisms,
)
from weilheight.mypy_util import add_slots, cache
from weilheight.places.place import Place, RationalPlace, fiber
from weilheight.tower.fingerprint import (
    fingerprint,
    matching_places,
    sample_elements,
    unique_match,
)
from weilheight.tower.tower import Tower, refinement_map
from weilheight.util import as_mpf, identity_tolerance, to_mpf

logger = logging.getLogger(__name__)


def act_on_place(
    sigma: Automorphism,
    place: Place,
    precision_bits: int = DEFAULT_SETTINGS.precision_bits,
    settings: Settings = DEFAULT_SETTINGS,
) -> Place:
    """
    The place sigma(v) of the fiber of v, defined by ||a||_sigma(v) = ||sigma^-1(a)||_v

    Raises:
        FieldMismatch: sigma and the place belong to different fields
        AmbiguousAction: the sample elements do not single out the image place
    """
    if sigma.field != place.field:
        raise FieldMismatch(f"{sigma} does not act on the places of {place.field}")
    field = place.field
    rational_place = place.rational_place
    candidates = fiber(field, rational_place, precision_bits)
    if sigma.is_identity or len(candidates) == 1:
        return place

    samples = sample_elements(field, rational_place, settings)
    inverse = sigma.inverse()
    pulled_back = [inverse(a) for a in samples]

    def find(bits: int) -> List[Place]:
        target = fingerprint(place, pulled_back, bits)
        candidates = fiber(field, rational_place, bits)
        return matching_places(target, candidates, samples, bits)

    description = f"the image of {place} under {sigma}"
    return unique_match(find, precision_bits, AmbiguousAction, description, settings)


@add_slots
@dataclass(frozen=True)
class PlacePermutation:
    """
    The permutation of the places above one place of Q induced by an automorphism
    """

    field: NumberField
    rational_place: RationalPlace
    automorphism: Automorphism
    mapping: frozendict[str, str]

    def __call__(self, place_id: str) -> str:
        return self.mapping[place_id]

    @property
    def is_identity(self) -> bool:
        return all(source == target for source, target in self.mapping.items())

    def compose(self, other: PlacePermutation) -> PlacePermutation:
        """
        The permutation of the composed automorphism self o other, which first
        applies other
        """
        automorphism = compose_automorphisms(self.automorphism, other.automorphism)
        mapping = frozendict((w, self(other(w))) for w in other.mapping)
        return PlacePermutation(self.field, self.rational_place, automorphism, mapping)

    def inverse(self) -> PlacePermutation:
        items = self.mapping.items()
        mapping = frozendict((target, source) for source, target in items)
        automorphism = self.automorphism.inverse()
        return PlacePermutation(self.field, self.rational_place, automorphism, mapping)

    def pairs(self) -> Tuple[Tuple[str, str], ...]:
        return tuple(sorted(self.mapping.items()))


@cache
def place_permutation(
    sigma: Automorphism,
    rational_place: RationalPlace,
    precision_bits: int = DEFAULT_SETTINGS.precision_bits,
    settings: Settings = DEFAULT_SETTINGS,
) -> PlacePermutation:
    places = fiber(sigma.field, rational_place, precision_bits)
    mapping = frozendict(
        (place.place_id, act_on_place(sigma, place, precision_bits, settings).place_id)
        for place in places
    )
    return PlacePermutation(sigma.field, rational_place, sigma, mapping)


class Orbits:
    """
    A partition of place ids that only ever gets coarser
    """

    def __init__(self, orbits: FrozenSet[FrozenSet[str]]):
        self.orbits = orbits

    @staticmethod
    def singletons(place_ids: Tuple[str, ...]) -> Orbits:
        return Orbits(frozenset(frozenset([place_id]) for place_id in place_ids))

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, Orbits) and self.orbits == other.orbits

    def __hash__(self) -> int:
        return hash(self.orbits)

    def connect(self, a: str, b: str) -> Orbits:
        ids = frozenset([a, b])
        orbits = []
        orbits_to_merge = []
        for orbit in self.orbits:
            if not ids.isdisjoint(orbit):
                orbits_to_merge.append(orbit)
            else:
                orbits.append(orbit)
        orbits.append(ids.union(*orbits_to_merge))
        return Orbits(frozenset(orbits))

    def orbit_of(self, place_id: str) -> FrozenSet[str]:
        for orbit in self.orbits:
            if place_id in orbit:
                return orbit
        return frozenset([place_id])

    def as_tuples(self) -> Tuple[Tuple[str, ...], ...]:
        return tuple(sorted(tuple(sorted(orbit)) for orbit in self.orbits))


def orbit(
    field: NumberField,
    rational_place: RationalPlace,
    precision_bits: int = DEFAULT_SETTINGS.precision_bits,
) -> Tuple[Tuple[str, ...], ...]:
    """
    The orbits of the automorphisms of field on the places above a place of Q, each
    sorted by place id. A Galois field has a single orbit.
    """
    places = fiber(field, rational_place, precision_bits)
    place_ids = tuple(place.place_id for place in places)
    orbits = Orbits.singletons(place_ids)
    for sigma in field.automorphisms:
        permutation = place_permutation(sigma, rational_place, precision_bits)
        for source, target in permutation.mapping.items():
            orbits = orbits.connect(source, target)
    return orbits.as_tuples()


@add_slots
@dataclass(frozen=True)
class InvarianceCheck:
    """
    The sums of weight(w) F(sigma(w)) and weight(w) F(w) over a fiber
    """

    automorphism: Automorphism
    moved: Any
    fixed: Any
    passed: bool


def _value_table(
    places: Tuple[Place, ...], values: Mapping[str, Any]
) -> Dict[str, Any]:
    known = {place.place_id for place in places}
    for place_id in values:
        if place_id not in known:
            raise ParserException(f"{place_id} is not a place of this fiber")
    return {place_id: as_mpf(value) for place_id, value in values.items()}


def check_invariance(
    field: NumberField,
    rational_place: RationalPlace,
    values: Mapping[str, Any],
    precision_bits: int = DEFAULT_SETTINGS.precision_bits,
) -> Tuple[InvarianceCheck, ...]:
    """
    Check that the measure on the fiber is invariant under every automorphism, for
    the step function given by values (place id to value, absent ids are 0)
    """
    places = fiber(field, rational_place, precision_bits)
    table = _value_table(places, values)
    eps = identity_tolerance(precision_bits)
    checks: List[InvarianceCheck] = []
    for sigma in field.automorphisms:
        permutation = place_permutation(sigma, rational_place, precision_bits)
        with mp.workprec(precision_bits):
            moved = mp.fsum(
                to_mpf(place.weight) * table.get(permutation(place.place_id), 0)
                for place in places
            )
            fixed = mp.fsum(
                to_mpf(place.weight) * table.get(place.place_id, 0) for place in places
            )
            passed = bool(abs(moved - fixed) < eps)
        checks.append(InvarianceCheck(sigma, moved, fixed, passed))
    return tuple(checks)


def restrict_automorphism(
    tower: Tower, sigma: Automorphism, level: int
) -> Automorphism:
    """
    The automorphism of level that sigma, an automorphism of level + 1, induces on
    the embedded copy of level.

    Raises:
        NotStabilized: sigma does not map level into itself
    """
    above = tower.field(level + 1)
    below = tower.field(level)
    if sigma.field != above:
        raise FieldMismatch(f"{sigma} is not an automorphism of {above}")
    image = sigma(tower.embed(below.generator, level, level + 1))
    for tau in below.automorphisms:
        if tower.embed(tau.image, level, level + 1) == image:
            return tau
    raise NotStabilized(f"{sigma} does not map {below} into itself")


@add_slots
@dataclass(frozen=True)
class EquivarianceCheck:
    """
    Whether psi(sigma(w)) = restrict(sigma)(psi(w)) for every place w of level + 1
    """

    automorphism: Automorphism
    restriction: Automorphism
    failures: Tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def check_equivariance(
    tower: Tower,
    level: int,
    rational_place: RationalPlace,
    precision_bits: int = DEFAULT_SETTINGS.precision_bits,
) -> Tuple[EquivarianceCheck, ...]:
    psi = refinement_map(tower, level, rational_place, precision_bits)
    checks: List[EquivarianceCheck] = []
    for sigma in tower.field(level + 1).automorphisms:
        tau = restrict_automorphism(tower, sigma, level)
        fine = place_permutation(sigma, rational_place, precision_bits)
        coarse = place_permutation(tau, rational_place, precision_bits)
        failures = tuple(
            w for w in sorted(psi.assignment) if psi(fine(w)) != coarse(psi(w))
        )
        if failures:
            logger.debug("%s is not equivariant at %s", sigma, ", ".join(failures))
        checks.append(EquivarianceCheck(sigma, tau, failures))
    return tuple(checks)
