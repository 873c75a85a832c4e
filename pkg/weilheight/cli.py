"""
Command line front end. Every command prints one JSON document on stdout; domain
errors exit with status 1 and print {"error": code, "message": text}, usage errors
exit with status 2. Arithmetic failures inside the library are reported the same way
as domain errors under the code InternalError.
"""
from __future__ import annotations

import dataclasses
import json
import logging
from typing import Any, Dict, List, Optional, Sequence

import click

from weilheight.checks import DEFAULT_CORPUS, load_corpus, run_checks
from weilheight.config import DEFAULT_SETTINGS, Settings
from weilheight.error import ParserException, WeilHeightException
from weilheight.fields.description import load_field, read_json
from weilheight.fields.number_field import is_torsion
from weilheight.fields.parse import parse_element
from weilheight.places.height import height, height_abs_sum, height_mahler
from weilheight.places.place import (
    FinitePlace,
    RationalPlace,
    fiber,
    log_abs,
    parse_rational_place,
    rational_place_label,
)
from weilheight.space.approximation import approximate
from weilheight.space.step_function import (
    embed_fa,
    from_table,
    function_from_description,
    function_to_description,
    integral,
    lp_norm,
)
from weilheight.tower.galois import orbit, place_permutation
from weilheight.tower.tower import Tower, load_tower, partition, refinement_map
from weilheight.util import decimal_string, identity_tolerance

logger = logging.getLogger(__name__)


class _Main(click.Group):
    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except WeilHeightException as e:
            logger.debug("%s", e, exc_info=True)
            _emit({"error": e.code, "message": str(e)})
            ctx.exit(1)
        except (ArithmeticError, ValueError) as e:
            logger.debug("%s", e, exc_info=True)
            _emit({"error": "InternalError", "message": f"{type(e).__name__}: {e}"})
            ctx.exit(1)


def _emit(report: Dict[str, Any]) -> None:
    obj = click.get_current_context().find_object(dict)
    output = obj["output"] if obj is not None else "-"
    with click.open_file(output, "w") as f:
        click.echo(json.dumps(report, indent=2), file=f)


def _rational_place(
    ctx: click.Context, param: click.Parameter, value: str
) -> RationalPlace:
    try:
        return parse_rational_place(value)
    except ParserException as e:
        raise click.BadParameter(str(e))


def _level(tower: Tower, level: Optional[int]) -> int:
    if level is None:
        return tower.top_level
    tower.check_level(level)
    return level


def _number(x: Any, settings: Settings) -> str:
    return decimal_string(x, settings.precision_bits)


field_option = click.option(
    "--field", "field_ref", required=True, help="Catalog name or description file"
)
tower_option = click.option(
    "--tower", "tower_ref", help="Catalog name or description file"
)
level_option = click.option(
    "--level", type=int, help="Tower level, the top level by default"
)
place_option = click.option(
    "--place",
    "rational_place",
    default="inf",
    show_default=True,
    callback=_rational_place,
    help="A prime, or inf for the archimedean place of Q",
)


@click.group(cls=_Main)
@click.option(
    "--precision",
    type=click.IntRange(min=53),
    default=DEFAULT_SETTINGS.precision_bits,
    show_default=True,
    help="Working precision in bits",
)
@click.option(
    "--den",
    type=click.IntRange(min=1),
    default=DEFAULT_SETTINGS.denominator_bound,
    show_default=True,
    help="Denominator bound for rational coefficients",
)
@click.option("--verbose", is_flag=True, help="Log the numeric escalations")
@click.option("--quiet", is_flag=True, help="No progress bars")
@click.option(
    "--output",
    default="-",
    type=click.Path(dir_okay=False, writable=True, allow_dash=True),
    help="Write the report to this file instead of stdout",
)
@click.pass_context
def main(
    ctx: click.Context,
    precision: int,
    den: int,
    verbose: bool,
    quiet: bool,
    output: str,
) -> None:
    """
    Heights, places and the height function space of number fields
    """
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    settings = Settings.make(precision, den)
    ctx.obj = {"settings": settings, "quiet": quiet, "output": output}


@main.command("height")
@field_option
@click.option("--elem", required=True, help="An expression in the generator t")
@click.pass_obj
def height_command(obj: Dict[str, Any], field_ref: str, elem: str) -> None:
    settings: Settings = obj["settings"]
    bits = settings.precision_bits
    field = load_field(field_ref)
    a = parse_element(field, elem)
    result = height(a, bits)
    mahler = height_mahler(a, bits).value
    abs_sum = height_abs_sum(a, bits).value
    eps = identity_tolerance(bits)
    agreement = abs(result.value - mahler) < eps and abs(result.value - abs_sum) < eps
    _emit(
        {
            "field": field.label,
            "element": str(a),
            "value": _number(result.value, settings),
            "mahler": _number(mahler, settings),
            "abs_sum": _number(abs_sum, settings),
            "defect": _number(result.defect, settings),
            "method_agreement": bool(agreement),
            "torsion": is_torsion(a, bits),
            "precision_bits": bits,
        }
    )


@main.command("places")
@field_option
@place_option
@click.option("--elem", help="Also report log ||elem||_v at every place")
@click.pass_obj
def places_command(
    obj: Dict[str, Any],
    field_ref: str,
    rational_place: RationalPlace,
    elem: Optional[str],
) -> None:
    settings: Settings = obj["settings"]
    bits = settings.precision_bits
    field = load_field(field_ref)
    a = parse_element(field, elem) if elem is not None else None
    rows: List[Dict[str, Any]] = []
    for place in fiber(field, rational_place, bits):
        row: Dict[str, Any] = {
            "id": place.place_id,
            "local_degree": place.local_degree,
            "weight": str(place.weight),
        }
        if isinstance(place.kind, FinitePlace):
            row["e"] = place.kind.e
            row["f"] = place.kind.f
        if a is not None:
            value = log_abs(place, a, bits, settings)
            row["log_abs"] = _number(value.log_abs, settings)
            row["valuation"] = value.valuation
        rows.append(row)
    _emit(
        {
            "field": field.label,
            "place": rational_place_label(rational_place),
            "places": rows,
        }
    )


@main.command("fa")
@click.option("--tower", "tower_ref", required=True, help="Catalog name or file")
@level_option
@click.option("--elem", required=True, help="An expression in the generator t")
@click.pass_obj
def fa_command(
    obj: Dict[str, Any], tower_ref: str, level: Optional[int], elem: str
) -> None:
    settings: Settings = obj["settings"]
    bits = settings.precision_bits
    tower = load_tower(tower_ref)
    level = _level(tower, level)
    a = parse_element(tower.field(level), elem)
    f = embed_fa(tower, level, a, bits)
    report = function_to_description(f)
    report["integral"] = _number(integral(f), settings)
    report["l1_norm"] = _number(lp_norm(f, 1), settings)
    report["l2_norm"] = _number(lp_norm(f, 2), settings)
    report["twice_height"] = _number(2 * height(a, bits).value, settings)
    _emit(report)


@main.command("partition")
@click.option("--tower", "tower_ref", required=True, help="Catalog name or file")
@level_option
@place_option
@click.pass_obj
def partition_command(
    obj: Dict[str, Any],
    tower_ref: str,
    level: Optional[int],
    rational_place: RationalPlace,
) -> None:
    settings: Settings = obj["settings"]
    bits = settings.precision_bits
    tower = load_tower(tower_ref)
    level = _level(tower, level)
    cells = partition(tower, level, rational_place, bits)
    report: Dict[str, Any] = {
        "tower": tower.label,
        "level": level,
        "place": rational_place_label(rational_place),
        "cells": [
            {"id": cell.place.place_id, "weight": str(cell.weight)}
            for cell in cells.cells
        ],
        "total": str(cells.total),
    }
    if level > 0:
        psi = refinement_map(tower, level - 1, rational_place, bits, settings)
        report["lies_over"] = dict(sorted(psi.assignment.items()))
    _emit(report)


@main.command("galois")
@field_option
@place_option
@click.pass_obj
def galois_command(
    obj: Dict[str, Any], field_ref: str, rational_place: RationalPlace
) -> None:
    settings: Settings = obj["settings"]
    bits = settings.precision_bits
    field = load_field(field_ref)
    permutations = [
        place_permutation(sigma, rational_place, bits, settings)
        for sigma in field.automorphisms
    ]
    _emit(
        {
            "field": field.label,
            "place": rational_place_label(rational_place),
            "orbits": [list(o) for o in orbit(field, rational_place, bits)],
            "automorphisms": [
                {"image": str(p.automorphism.image), "mapping": dict(p.pairs())}
                for p in permutations
            ],
        }
    )


@main.command("check")
@click.option(
    "--corpus",
    "corpus_path",
    default=DEFAULT_CORPUS,
    show_default=True,
    type=click.Path(exists=True, dir_okay=False),
    help="Corpus description file",
)
@click.pass_context
def check_command(ctx: click.Context, corpus_path: str) -> None:
    settings: Settings = ctx.obj["settings"]
    corpus = load_corpus(corpus_path)
    results = run_checks(corpus, settings.precision_bits, not ctx.obj["quiet"])
    failed = [result for result in results if not result.passed]
    _emit(
        {
            "corpus": corpus.label,
            "results": [dataclasses.asdict(result) for result in results],
            "passed": len(results) - len(failed),
            "failed": len(failed),
        }
    )
    if failed:
        ctx.exit(1)


def _parse_values(values: Sequence[str]) -> Dict[str, str]:
    table: Dict[str, str] = {}
    for item in values:
        place_id, sep, value = item.partition("=")
        if not sep:
            raise click.BadParameter(f"{item!r} is not place_id=value")
        table[place_id.strip()] = value.strip()
    return table


@main.command("approx")
@tower_option
@level_option
@click.option(
    "--function",
    "--target",
    "function_path",
    type=click.Path(exists=True, dir_okay=False),
    help="Function table file of the target",
)
@click.option(
    "--value", "values", multiple=True, help="A target value, as place_id=value"
)
@click.option(
    "--basis", multiple=True, required=True, help="A basis element, repeatable"
)
@click.pass_obj
def approx_command(
    obj: Dict[str, Any],
    tower_ref: Optional[str],
    level: Optional[int],
    function_path: Optional[str],
    values: Sequence[str],
    basis: Sequence[str],
) -> None:
    settings: Settings = obj["settings"]
    bits = settings.precision_bits
    if function_path is not None:
        given = load_tower(tower_ref) if tower_ref is not None else None
        target = function_from_description(read_json(function_path), given)
    elif tower_ref is not None:
        tower = load_tower(tower_ref)
        level = _level(tower, level)
        target = from_table(tower, level, _parse_values(values), bits)
    else:
        raise click.UsageError("give the target by --function or by --tower")

    field = target.tower.field(target.level)
    elements = [parse_element(field, text) for text in basis]
    solution = approximate(target, elements, settings.denominator_bound, bits)
    _emit(
        {
            "tower": target.tower.label,
            "level": target.level,
            "basis": [str(a) for a in elements],
            "coefficients": [str(c) for c in solution.coefficients],
            "real_coefficients": list(solution.real_coefficients),
            "residual_l1": _number(solution.residual_l1, settings),
            "residual_l2": _number(solution.residual_l2, settings),
            "residual_l2_real": solution.residual_l2_real,
            "denominator_bound": solution.denominator_bound,
        }
    )


if __name__ == "__main__":
    main()
