from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from frozendict import frozendict

from weilheight.config import DEFAULT_SETTINGS, Settings
from weilheight.error import (
    AmbiguousRestriction,
    BadEmbedding,
    FieldMismatch,
    NoSuchLevel,
    NotGalois,
    ParserException,
    RefinementMismatch,
)
from weilheight.fields.catalog import named_field
from weilheight.fields.description import (
    field_from_description,
    field_to_description,
    read_json,
)
from weilheight.fields.number_field import FieldElement, NumberField
from weilheight.mypy_util import add_slots, cache
from weilheight.places.place import Place, RationalPlace, fiber, rational_place_label
from weilheight.tower.fingerprint import (
    fingerprint,
    matching_places,
    sample_elements,
    unique_match,
)
from weilheight.util import Rational

logger = logging.getLogger(__name__)


@add_slots
@dataclass(frozen=True)
class Tower:
    """
    A chain Q = L_0 < L_1 < ... of Galois number fields.

    Args:
        levels: The fields, level 0 being Q
        embeddings: embeddings[j - 1] is the image in levels[j] of the generator of
            levels[j - 1]
        label: Name used in reports
    """

    levels: Tuple[NumberField, ...]
    embeddings: Tuple[FieldElement, ...]
    label: str

    @classmethod
    def make(
        cls,
        levels: Sequence[NumberField],
        embeddings: Sequence[Sequence[Rational]],
        label: Optional[str] = None,
    ) -> Tower:
        """
        Validate a tower description exactly.

        Raises:
            NotGalois: a level has fewer automorphisms than its degree
            BadEmbedding: an embedding image is not a root of the minimal polynomial
                of the level below
        """
        if not levels or levels[0].degree != 1:
            raise BadEmbedding("level 0 of a tower must be Q")
        if len(embeddings) != len(levels) - 1:
            raise BadEmbedding(
                f"{len(levels)} levels need {len(levels) - 1} embeddings, "
                f"got {len(embeddings)}"
            )
        for field in levels:
            if not field.galois:
                raise NotGalois(f"{field} is not known to be Galois over Q")

        images: List[FieldElement] = []
        for j, coords in enumerate(embeddings, start=1):
            below, above = levels[j - 1], levels[j]
            if above.degree % below.degree:
                raise BadEmbedding(f"{below} does not embed into {above}")
            image = above.element(coords)
            residual = below.min_poly.evaluate(image, above.one)
            if not residual.is_zero:
                raise BadEmbedding(
                    f"{below.min_poly} does not vanish at {image} in {above}",
                    [str(c) for c in residual.coords],
                )
            images.append(image)
        label = label or "<".join(field.label for field in levels)
        return cls(tuple(levels), tuple(images), label)

    @property
    def top_level(self) -> int:
        return len(self.levels) - 1

    def field(self, level: int) -> NumberField:
        self.check_level(level)
        return self.levels[level]

    def check_level(self, level: int) -> None:
        if not 0 <= level < len(self.levels):
            raise NoSuchLevel(f"{self.label} has no level {level}")

    def embed(self, a: FieldElement, from_level: int, to_level: int) -> FieldElement:
        """
        The image of an element of level from_level in level to_level
        """
        self.check_level(from_level)
        self.check_level(to_level)
        if a.field != self.levels[from_level]:
            raise FieldMismatch(f"{a} is not in {self.levels[from_level]}")
        if to_level < from_level:
            raise ValueError("elements only embed into higher levels")
        for j in range(from_level + 1, to_level + 1):
            a = a.polynomial.evaluate(self.embeddings[j - 1], self.levels[j].one)
        return a

    def __str__(self) -> str:
        return self.label


@add_slots
@dataclass(frozen=True)
class Cell:
    place: Place
    weight: Fraction


@add_slots
@dataclass(frozen=True)
class MeasuredPartition:
    """
    The places of one level above a place of Q, each weighted by d_w / [L : Q]
    """

    level: int
    rational_place: RationalPlace
    cells: Tuple[Cell, ...]

    @property
    def place_ids(self) -> Tuple[str, ...]:
        return tuple(cell.place.place_id for cell in self.cells)

    @property
    def weights(self) -> frozendict[str, Fraction]:
        return frozendict((cell.place.place_id, cell.weight) for cell in self.cells)

    @property
    def total(self) -> Fraction:
        return sum((cell.weight for cell in self.cells), Fraction(0))


@cache
def partition(
    tower: Tower,
    level: int,
    rational_place: RationalPlace,
    precision_bits: int = DEFAULT_SETTINGS.precision_bits,
) -> MeasuredPartition:
    field = tower.field(level)
    places = fiber(field, rational_place, precision_bits)
    cells = tuple(Cell(place, place.weight) for place in places)
    return MeasuredPartition(level, rational_place, cells)


@add_slots
@dataclass(frozen=True)
class RefinementMap:
    """
    The map sending each place of level + 1 above a place of Q to the place of
    level below it
    """

    level: int
    rational_place: RationalPlace
    assignment: frozendict[str, str]

    def __call__(self, place_id: str) -> str:
        return self.assignment[place_id]

    def preimage(self, place_id: str) -> Tuple[str, ...]:
        items = self.assignment.items()
        return tuple(fine for fine, coarse in items if coarse == place_id)


@cache
def refinement_map(
    tower: Tower,
    level: int,
    rational_place: RationalPlace,
    precision_bits: int = DEFAULT_SETTINGS.precision_bits,
    settings: Settings = DEFAULT_SETTINGS,
) -> RefinementMap:
    """
    Find the place of level below each place of level + 1. A fine place lies over
    the coarse place where the sample elements of level have the same absolute
    values as their images have at the fine place.

    Raises:
        AmbiguousRestriction: the samples do not single out a coarse place
        RefinementMismatch: some coarse place has no place above it
    """
    tower.check_level(level + 1)
    coarse = partition(tower, level, rational_place, precision_bits).cells
    fine = partition(tower, level + 1, rational_place, precision_bits).cells
    coarse_places = [cell.place for cell in coarse]

    assignment: Dict[str, str] = {}
    if len(coarse_places) == 1:
        (only,) = coarse_places
        assignment = {cell.place.place_id: only.place_id for cell in fine}
    else:
        coarse_field = tower.field(level)
        samples = sample_elements(coarse_field, rational_place, settings)
        lifted = [tower.embed(a, level, level + 1) for a in samples]
        for cell in fine:
            match = unique_match(
                _restriction_finder(cell.place, lifted, samples, rational_place),
                precision_bits,
                AmbiguousRestriction,
                f"the place below {cell.place} in {coarse_field}",
                settings,
            )
            assignment[cell.place.place_id] = match.place_id

    hit = set(assignment.values())
    for place in coarse_places:
        if place.place_id not in hit:
            raise RefinementMismatch(
                f"no place of level {level + 1} lies over {place}", place.place_id
            )
    return RefinementMap(level, rational_place, frozendict(assignment))


def _restriction_finder(
    place: Place,
    lifted: Sequence[FieldElement],
    samples: Sequence[FieldElement],
    rational_place: RationalPlace,
) -> Callable[[int], List[Place]]:
    coarse_field = samples[0].field

    def find(precision_bits: int) -> List[Place]:
        target = fingerprint(place, lifted, precision_bits)
        candidates = fiber(coarse_field, rational_place, precision_bits)
        return matching_places(target, candidates, samples, precision_bits)

    return find


@add_slots
@dataclass(frozen=True)
class RefinementCheck:
    """
    The identity: weight of a coarse cell = sum of the weights of the cells above it
    """

    level: int
    place_id: str
    weight: Fraction
    fine_weights: Tuple[Tuple[str, Fraction], ...]

    @property
    def total(self) -> Fraction:
        return sum((weight for _, weight in self.fine_weights), Fraction(0))

    @property
    def passed(self) -> bool:
        return self.weight == self.total


def check_measure_refinement(
    tower: Tower,
    rational_place: RationalPlace,
    precision_bits: int = DEFAULT_SETTINGS.precision_bits,
) -> Tuple[RefinementCheck, ...]:
    """
    Check measure additivity along every refinement map of the tower at one place
    of Q.

    Raises:
        RefinementMismatch: a coarse weight differs from the sum of the weights above
    """
    checks: List[RefinementCheck] = []
    for level in range(tower.top_level):
        coarse = partition(tower, level, rational_place, precision_bits)
        fine = partition(tower, level + 1, rational_place, precision_bits).weights
        psi = refinement_map(tower, level, rational_place, precision_bits)
        for cell in coarse.cells:
            place_id = cell.place.place_id
            above = tuple((w, fine[w]) for w in psi.preimage(place_id))
            check = RefinementCheck(level, place_id, cell.weight, above)
            if not check.passed:
                raise RefinementMismatch(
                    f"{place_id} has weight {check.weight} but the places above it "
                    f"weigh {check.total}",
                    place_id,
                )
            checks.append(check)
    logger.debug(
        "%d refinement identities hold on %s at %s",
        len(checks),
        tower,
        rational_place_label(rational_place),
    )
    return tuple(checks)


_NAMED_TOWERS: Dict[str, Tuple[Tuple[str, ...], Tuple[Tuple[int, ...], ...]]] = {
    "Q": (("Q",), ()),
    "Q<Q(i)": (("Q", "Q(i)"), ((0,),)),
    "Q<Q(sqrt2)": (("Q", "Q(sqrt2)"), ((0,),)),
    "Q<Q(sqrt5)": (("Q", "Q(sqrt5)"), ((0,),)),
    "Q<Q(zeta5)": (("Q", "Q(zeta5)"), ((0,),)),
    # i = zeta8^2
    "Q<Q(i)<Q(zeta8)": (("Q", "Q(i)", "Q(zeta8)"), ((0,), (0, 0, 1, 0))),
    # sqrt2 = zeta8 - zeta8^3
    "Q<Q(sqrt2)<Q(zeta8)": (("Q", "Q(sqrt2)", "Q(zeta8)"), ((0,), (0, 1, 0, -1))),
}


def tower_names() -> Tuple[str, ...]:
    return tuple(_NAMED_TOWERS)


@cache
def named_tower(name: str) -> Tower:
    try:
        names, embeddings = _NAMED_TOWERS[name]
    except KeyError:
        raise ParserException(f"unknown tower {name!r}") from None
    return Tower.make([named_field(level) for level in names], embeddings, name)


def _level_from_description(data: Any) -> NumberField:
    if isinstance(data, str):
        return named_field(data)
    if isinstance(data, dict):
        return field_from_description(data)
    raise ParserException("a tower level is a field name or a field description")


def tower_from_description(data: Mapping[str, Any]) -> Tower:
    """
    {"label": ..., "levels": [field descriptions or names], "embeddings": [[...]]}
    """
    levels = data.get("levels")
    embeddings = data.get("embeddings", [])
    if not isinstance(levels, list) or not isinstance(embeddings, list):
        raise ParserException("a tower description needs lists levels and embeddings")
    fields = [_level_from_description(level) for level in levels]
    try:
        coords = [[Fraction(c) for c in image] for image in embeddings]
    except (TypeError, ValueError, ZeroDivisionError):
        raise ParserException("embeddings must be lists of rationals") from None
    return Tower.make(fields, coords, data.get("label"))


def tower_to_description(tower: Tower) -> Dict[str, Any]:
    return {
        "label": tower.label,
        "levels": [field_to_description(field) for field in tower.levels],
        "embeddings": [[str(c) for c in image.coords] for image in tower.embeddings],
    }


def load_tower(reference: str) -> Tower:
    """
    A tower given either by a catalog name or by the path of a JSON description
    """
    if os.path.exists(reference):
        return tower_from_description(read_json(reference))
    return named_tower(reference)
