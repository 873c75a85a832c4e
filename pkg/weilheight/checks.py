"""
The invariant suite behind the check command. A corpus lists elements of tower
levels, tower fibers and S-unit systems; every entry is run through the identities
that hold for it and each identity is reported as passed or failed.
"""
from __future__ import annotations

import functools
import logging
import os
from dataclasses import dataclass
from typing import Any, Callable, Iterator, List, Mapping, Tuple

from mpmath import mp
from tqdm import tqdm

from weilheight.config import DEFAULT_SETTINGS
from weilheight.error import ParserException, WeilHeightException
from weilheight.fields.description import load_field, read_json
from weilheight.fields.number_field import FieldElement, NumberField, is_torsion
from weilheight.fields.parse import parse_element
from weilheight.mypy_util import add_slots
from weilheight.places.height import height, height_abs_sum, height_mahler
from weilheight.places.place import (
    RationalPlace,
    arch_places,
    finite_places,
    parse_rational_place,
    rational_place_label,
)
from weilheight.space.step_function import embed_fa, integral, lp_norm
from weilheight.space.sunit import fundamental_unit, sunit_matrix
from weilheight.tower.galois import check_equivariance, check_invariance
from weilheight.tower.tower import Tower, check_measure_refinement, load_tower
from weilheight.util import decimal_string, identity_tolerance

logger = logging.getLogger(__name__)

DEFAULT_CORPUS = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
    "corpus",
    "standard.json",
)


@add_slots
@dataclass(frozen=True)
class CheckResult:
    check: str
    subject: str
    passed: bool
    detail: str = ""


@add_slots
@dataclass(frozen=True)
class CorpusElement:
    tower: Tower
    level: int
    element: FieldElement

    def __str__(self) -> str:
        return f"{self.element} at level {self.level} of {self.tower}"


@add_slots
@dataclass(frozen=True)
class TowerFiber:
    tower: Tower
    rational_place: RationalPlace

    def __str__(self) -> str:
        return f"{self.tower} at {rational_place_label(self.rational_place)}"


@add_slots
@dataclass(frozen=True)
class SUnitSystem:
    """
    Args:
        field: The field of the units
        primes: The finite part of S is every place above these primes
        generators: The units
        with_fundamental_unit: Whether the fundamental unit of the real quadratic
            field comes first among the units
    """

    field: NumberField
    primes: Tuple[int, ...]
    generators: Tuple[FieldElement, ...]
    with_fundamental_unit: bool = False

    def units(self) -> Tuple[FieldElement, ...]:
        if self.with_fundamental_unit:
            return (fundamental_unit(self.field), *self.generators)
        return self.generators

    def __str__(self) -> str:
        units = ", ".join(str(xi) for xi in self.units())
        primes = ", ".join(["inf", *(str(p) for p in self.primes)])
        return f"({units}) in {self.field} over {{{primes}}}"


@add_slots
@dataclass(frozen=True)
class Corpus:
    label: str
    elements: Tuple[CorpusElement, ...]
    fibers: Tuple[TowerFiber, ...]
    sunit_systems: Tuple[SUnitSystem, ...]

    @property
    def size(self) -> int:
        return len(self.elements) + len(self.fibers) + len(self.sunit_systems)


def _element_entry(data: Mapping[str, Any]) -> CorpusElement:
    tower = load_tower(str(data["tower"]))
    level = int(data.get("level", tower.top_level))
    element = parse_element(tower.field(level), str(data["elem"]))
    return CorpusElement(tower, level, element)


def _fiber_entries(data: Mapping[str, Any]) -> List[TowerFiber]:
    tower = load_tower(str(data["tower"]))
    places = [parse_rational_place(str(v)) for v in data["places"]]
    return [TowerFiber(tower, v) for v in places]


def _sunit_entry(data: Mapping[str, Any]) -> SUnitSystem:
    field = load_field(str(data["field"]))
    primes = tuple(int(p) for p in data.get("primes", []))
    generators = tuple(parse_element(field, str(xi)) for xi in data["generators"])
    with_unit = bool(data.get("fundamental_unit", False))
    return SUnitSystem(field, primes, generators, with_unit)


def corpus_from_description(data: Mapping[str, Any], label: str = "") -> Corpus:
    """
    {"label": ..., "elements": [{"tower", "level", "elem"}], "fibers": [{"tower",
    "places"}], "sunits": [{"field", "primes", "generators", "fundamental_unit"}]}
    """
    try:
        elements = tuple(_element_entry(entry) for entry in data.get("elements", []))
        fibers = tuple(
            fiber for entry in data.get("fibers", []) for fiber in _fiber_entries(entry)
        )
        systems = tuple(_sunit_entry(entry) for entry in data.get("sunits", []))
    except (KeyError, TypeError, ValueError) as e:
        raise ParserException(f"malformed corpus entry: {e}") from None
    return Corpus(str(data.get("label", label)), elements, fibers, systems)


def load_corpus(path: str = DEFAULT_CORPUS) -> Corpus:
    data = read_json(path)
    if not isinstance(data, dict):
        raise ParserException(f"{path} does not hold a corpus")
    return corpus_from_description(data, os.path.basename(path))


def _close(a: Any, b: Any, precision_bits: int) -> bool:
    with mp.workprec(precision_bits):
        return bool(abs(a - b) < identity_tolerance(precision_bits))


def _guarded(
    check: str, subject: str, run: Callable[[], Tuple[bool, str]]
) -> CheckResult:
    try:
        passed, detail = run()
    except WeilHeightException as e:
        logger.debug("%s failed on %s: %s", check, subject, e)
        return CheckResult(check, subject, False, f"{e.code}: {e}")
    return CheckResult(check, subject, passed, detail)


def check_element(item: CorpusElement, precision_bits: int) -> List[CheckResult]:
    a = item.element
    subject = str(item)
    bits = precision_bits

    def product_formula() -> Tuple[bool, str]:
        defect = height(a, bits).defect
        return _close(defect, 0, bits), f"defect {decimal_string(defect, 64)}"

    def height_methods() -> Tuple[bool, str]:
        values = [height(a, bits).value, height_mahler(a, bits).value]
        values.append(height_abs_sum(a, bits).value)
        agree = all(_close(values[0], value, bits) for value in values[1:])
        return agree, " ".join(decimal_string(value, 64) for value in values)

    def kronecker() -> Tuple[bool, str]:
        torsion = is_torsion(a, bits)
        small = _close(height(a, bits).value, 0, bits)
        return small == torsion, "torsion" if torsion else "not torsion"

    def isometry() -> Tuple[bool, str]:
        f = embed_fa(item.tower, item.level, a, bits)
        norm = lp_norm(f, 1)
        twice = 2 * height(a, bits).value
        return _close(norm, twice, bits), f"L1 norm {decimal_string(norm, 64)}"

    def x_membership() -> Tuple[bool, str]:
        total = integral(embed_fa(item.tower, item.level, a, bits))
        return _close(total, 0, bits), f"integral {decimal_string(total, 64)}"

    def galois_invariance() -> Tuple[bool, str]:
        f = embed_fa(item.tower, item.level, a, bits)
        field = item.tower.field(item.level)
        checks = [
            check
            for v in f.support
            for check in check_invariance(field, v, f.fiber_values(v), bits)
        ]
        return all(check.passed for check in checks), f"{len(checks)} fiber checks"

    runs = [
        ("product_formula", product_formula),
        ("height_methods", height_methods),
        ("kronecker", kronecker),
        ("isometry", isometry),
        ("x_membership", x_membership),
        ("galois_invariance", galois_invariance),
    ]
    return [_guarded(check, subject, run) for check, run in runs]


def check_fiber(item: TowerFiber, precision_bits: int) -> List[CheckResult]:
    subject = str(item)
    bits = precision_bits

    def measure_refinement() -> Tuple[bool, str]:
        checks = check_measure_refinement(item.tower, item.rational_place, bits)
        passed = all(check.passed for check in checks)
        return passed, f"{len(checks)} coarse places"

    def equivariance() -> Tuple[bool, str]:
        checks = [
            check
            for level in range(item.tower.top_level)
            for check in check_equivariance(
                item.tower, level, item.rational_place, bits
            )
        ]
        failures = [w for check in checks for w in check.failures]
        return not failures, ", ".join(failures)

    return [
        _guarded("measure_refinement", subject, measure_refinement),
        _guarded("equivariance", subject, equivariance),
    ]


def check_sunit_system(item: SUnitSystem, precision_bits: int) -> List[CheckResult]:
    def sunit_rank() -> Tuple[bool, str]:
        places = list(arch_places(item.field, precision_bits))
        for p in item.primes:
            places.extend(finite_places(item.field, p))
        m = sunit_matrix(item.field, places, item.units(), precision_bits)
        angle = decimal_string(m.nullspace_angle(), 16)
        return m.check(), f"rank {m.rank} of {len(places) - 1}, kernel angle {angle}"

    return [_guarded("sunit_rank", str(item), sunit_rank)]


def _jobs(
    corpus: Corpus, precision_bits: int
) -> Iterator[Callable[[], List[CheckResult]]]:
    for element in corpus.elements:
        yield functools.partial(check_element, element, precision_bits)
    for fiber in corpus.fibers:
        yield functools.partial(check_fiber, fiber, precision_bits)
    for system in corpus.sunit_systems:
        yield functools.partial(check_sunit_system, system, precision_bits)


def run_checks(
    corpus: Corpus,
    precision_bits: int = DEFAULT_SETTINGS.precision_bits,
    show_progress: bool = False,
) -> List[CheckResult]:
    results: List[CheckResult] = []
    with tqdm(total=corpus.size, disable=not show_progress) as pbar:
        for job in _jobs(corpus, precision_bits):
            results.extend(job())
            pbar.update()
    failed = sum(1 for result in results if not result.passed)
    logger.info("%d of %d checks passed", len(results) - failed, len(results))
    return results
