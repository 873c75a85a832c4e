"""
Locally constant functions on the places of Q-bar with compact support, seen at a
finite level of a tower: a function is a value for every place of the level above
finitely many places of Q, and is 0 above all the others.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

from frozendict import frozendict
from mpmath import mp

from weilheight.config import DEFAULT_SETTINGS
from weilheight.error import (
    BadExponent,
    FieldMismatch,
    LevelMismatch,
    ParserException,
    ZeroElement,
)
from weilheight.fields.number_field import FieldElement
from weilheight.mypy_util import add_slots
from weilheight.places.height import support_primes
from weilheight.places.place import (
    RationalPlace,
    log_abs,
    parse_rational_place,
    rational_place_key,
    rational_place_label,
)
from weilheight.tower.tower import Tower, load_tower, partition, refinement_map
from weilheight.util import Rational, as_mpf, decimal_string, to_mpf, tolerance

FiberValues = Mapping[RationalPlace, Mapping[str, Any]]


@add_slots
@dataclass(frozen=True)
class StepFunction:
    """
    Args:
        tower: The tower the function lives on
        level: The level whose places carry the values
        support: The places of Q above which the function may be nonzero
        values: A value for every place of the level above the support
        precision_bits: Working precision of the values
    """

    tower: Tower
    level: int
    support: Tuple[RationalPlace, ...]
    values: frozendict[str, Any]
    precision_bits: int

    @classmethod
    def make(
        cls,
        tower: Tower,
        level: int,
        fiber_values: FiberValues,
        precision_bits: int = DEFAULT_SETTINGS.precision_bits,
    ) -> StepFunction:
        """
        Fill every supported fiber, absent places being 0, and drop the fibers where
        the function vanishes to the tolerance of precision_bits.

        Raises:
            ParserException: a place id is not a place of its fiber
        """
        eps = tolerance(precision_bits)
        support = []
        values: Dict[str, Any] = {}
        for rational_place in sorted(fiber_values, key=rational_place_key):
            given = fiber_values[rational_place]
            cells = partition(tower, level, rational_place, precision_bits)
            unknown = set(given) - set(cells.place_ids)
            if unknown:
                raise ParserException(
                    f"{', '.join(sorted(unknown))} not above "
                    f"{rational_place_label(rational_place)} at level {level}"
                )
            with mp.workprec(precision_bits):
                fiber = {w: as_mpf(given.get(w, 0)) for w in cells.place_ids}
                if all(abs(value) < eps for value in fiber.values()):
                    continue
            support.append(rational_place)
            values.update(fiber)
        return cls(tower, level, tuple(support), frozendict(values), precision_bits)

    @classmethod
    def zero(
        cls,
        tower: Tower,
        level: int,
        precision_bits: int = DEFAULT_SETTINGS.precision_bits,
    ) -> StepFunction:
        tower.check_level(level)
        return cls(tower, level, (), frozendict(), precision_bits)

    @property
    def is_zero(self) -> bool:
        return not self.support

    def __call__(self, place_id: str) -> Any:
        return self.values.get(place_id, mp.zero)

    def fiber_values(self, rational_place: RationalPlace) -> Dict[str, Any]:
        cells = partition(self.tower, self.level, rational_place, self.precision_bits)
        return {w: self(w) for w in cells.place_ids}

    def fibers(self) -> Dict[RationalPlace, Dict[str, Any]]:
        return {v: self.fiber_values(v) for v in self.support}

    def weighted(self) -> Iterable[Tuple[Fraction, Any]]:
        """
        (weight, value) for every place of the supported fibers
        """
        for rational_place in self.support:
            cells = partition(
                self.tower, self.level, rational_place, self.precision_bits
            )
            for cell in cells.cells:
                yield cell.weight, self(cell.place.place_id)

    def __add__(self, other: StepFunction) -> StepFunction:
        return linear_combine(self.tower, self.level, [(1, self), (1, other)])

    def __sub__(self, other: StepFunction) -> StepFunction:
        return linear_combine(self.tower, self.level, [(1, self), (-1, other)])

    def __neg__(self) -> StepFunction:
        return linear_combine(self.tower, self.level, [(-1, self)])

    def __mul__(self, scalar: Rational) -> StepFunction:
        return linear_combine(self.tower, self.level, [(scalar, self)])

    def __rmul__(self, scalar: Rational) -> StepFunction:
        return self * scalar


def embed_fa(
    tower: Tower,
    level: int,
    a: FieldElement,
    precision_bits: int = DEFAULT_SETTINGS.precision_bits,
) -> StepFunction:
    """
    The function f_a(w) = log ||a||_w on the places of level.

    Raises:
        ZeroElement: a is 0
        FieldMismatch: a is not an element of the field of level
    """
    field = tower.field(level)
    if a.field != field:
        raise FieldMismatch(f"{a} is not in {field}, level {level} of {tower}")
    if a.is_zero:
        raise ZeroElement("log ||0|| is -infinity")
    fiber_values: Dict[RationalPlace, Dict[str, Any]] = {}
    rational_places: Sequence[RationalPlace] = [None, *support_primes(a)]
    for rational_place in rational_places:
        cells = partition(tower, level, rational_place, precision_bits).cells
        fiber_values[rational_place] = {
            cell.place.place_id: log_abs(cell.place, a, precision_bits).log_abs
            for cell in cells
        }
    return StepFunction.make(tower, level, fiber_values, precision_bits)


def integral(f: StepFunction) -> Any:
    """
    The sum of weight * value over the places of the supported fibers
    """
    with mp.workprec(f.precision_bits):
        return mp.fsum(to_mpf(weight) * value for weight, value in f.weighted())


Exponent = Union[int, Fraction, float]


def lp_norm(f: StepFunction, p: Exponent) -> Any:
    """
    The L^p norm for 1 <= p < infinity, and the sup norm for p = math.inf

    Raises:
        BadExponent: p < 1
    """
    if p < 1:
        raise BadExponent(f"L^{p} is not a norm")
    with mp.workprec(f.precision_bits):
        if p == math.inf:
            return max((abs(value) for _, value in f.weighted()), default=mp.zero)
        exponent = as_mpf(p)
        total = mp.fsum(
            to_mpf(weight) * abs(value) ** exponent for weight, value in f.weighted()
        )
        return total ** (1 / exponent)


def linear_combine(
    tower: Tower,
    level: int,
    terms: Sequence[Tuple[Rational, StepFunction]],
    precision_bits: Optional[int] = None,
) -> StepFunction:
    """
    The sum of c * F over the terms (c, F), on the given level of tower

    Raises:
        LevelMismatch: a term lives on another tower or level
    """
    for _, f in terms:
        if f.tower != tower or f.level != level:
            raise LevelMismatch(
                f"a function on level {f.level} of {f.tower} does not live on "
                f"level {level} of {tower}"
            )
    if precision_bits is None:
        precisions = [f.precision_bits for _, f in terms]
        precision_bits = min(precisions, default=DEFAULT_SETTINGS.precision_bits)

    fiber_values: Dict[RationalPlace, Dict[str, Any]] = {}
    with mp.workprec(precision_bits):
        for c, f in terms:
            scalar = to_mpf(c)
            for rational_place, fiber in f.fibers().items():
                total = fiber_values.setdefault(rational_place, {})
                for w, value in fiber.items():
                    total[w] = total.get(w, mp.zero) + scalar * value
    return StepFunction.make(tower, level, fiber_values, precision_bits)


def refine(f: StepFunction) -> StepFunction:
    """
    The same function seen one level up: constant on the places above each place
    """
    level = f.level + 1
    f.tower.check_level(level)
    fiber_values: Dict[RationalPlace, Dict[str, Any]] = {}
    for rational_place in f.support:
        psi = refinement_map(f.tower, f.level, rational_place, f.precision_bits)
        fiber_values[rational_place] = {w: f(psi(w)) for w in psi.assignment}
    return StepFunction.make(f.tower, level, fiber_values, f.precision_bits)


def refine_to(f: StepFunction, level: int) -> StepFunction:
    f.tower.check_level(level)
    if level < f.level:
        raise LevelMismatch(f"cannot refine from level {f.level} down to {level}")
    while f.level < level:
        f = refine(f)
    return f


def indicator(
    tower: Tower,
    level: int,
    rational_place: RationalPlace,
    place_id: str,
    precision_bits: int = DEFAULT_SETTINGS.precision_bits,
) -> StepFunction:
    """
    The characteristic function of the places of Q-bar above place_id
    """
    fiber_values = {rational_place: {place_id: 1}}
    return StepFunction.make(tower, level, fiber_values, precision_bits)


def rational_place_of(place_id: str) -> RationalPlace:
    """
    The place of Q below a place id such as arch:c1 or fin:5:2.1
    """
    kind, _, rest = place_id.partition(":")
    if kind == "arch":
        return None
    if kind == "fin":
        return parse_rational_place(rest.partition(":")[0])
    raise ParserException(f"{place_id!r} is not a place id")


def from_table(
    tower: Tower,
    level: int,
    table: Mapping[str, Any],
    precision_bits: int = DEFAULT_SETTINGS.precision_bits,
) -> StepFunction:
    """
    A function given by its values on some places; the fibers of those places are
    filled with 0
    """
    fiber_values: Dict[RationalPlace, Dict[str, Any]] = {}
    for place_id, value in table.items():
        fiber_values.setdefault(rational_place_of(place_id), {})[place_id] = value
    return StepFunction.make(tower, level, fiber_values, precision_bits)


def function_to_description(f: StepFunction) -> Dict[str, Any]:
    return {
        "tower": f.tower.label,
        "level": f.level,
        "support": [rational_place_label(v) for v in f.support],
        "values": [
            [w, decimal_string(f(w), f.precision_bits)]
            for fiber in f.fibers().values()
            for w in fiber
        ],
        "precision_bits": f.precision_bits,
    }


def function_from_description(
    data: Mapping[str, Any], tower: Optional[Tower] = None
) -> StepFunction:
    """
    {"tower": label, "level": j, "support": [...], "values": [[place_id, "1.5"]],
    "precision_bits": 128}; the tower is looked up by its label unless given
    """
    try:
        level = int(data.get("level", 0))
        bits = data.get("precision_bits", DEFAULT_SETTINGS.precision_bits)
        precision_bits = int(bits)
        rows = [(str(w), str(value)) for w, value in data.get("values", [])]
    except (TypeError, ValueError):
        raise ParserException("malformed function table") from None
    if tower is None:
        tower = load_tower(str(data.get("tower", "Q")))
    with mp.workprec(precision_bits):
        try:
            table = {w: mp.mpf(value) for w, value in rows}
        except ValueError:
            raise ParserException("function values must be decimal strings") from None
    fiber_values: Dict[RationalPlace, Dict[str, Any]] = {}
    for label in data.get("support", []):
        fiber_values[parse_rational_place(str(label))] = {}
    for w, value in table.items():
        fiber_values.setdefault(rational_place_of(w), {})[w] = value
    return StepFunction.make(tower, level, fiber_values, precision_bits)
