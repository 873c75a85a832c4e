"""
JSON descriptions of number fields:

    {"label": "Q(i)", "min_poly": [1, 0, 1], "automorphisms": [[0, 1], [0, -1]]}

Coefficients are lowest degree first and may be integers or strings such as "1/2".
"""
from __future__ import annotations

import json
import os
from fractions import Fraction
from typing import Any, Dict, List, Mapping

from weilheight.algebra.polynomial import Polynomial
from weilheight.error import NotMonic, ParserException
from weilheight.fields.catalog import named_field
from weilheight.fields.number_field import NumberField


def _rational(value: Any) -> Fraction:
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ParserException(f"{value!r} is not a rational number") from None


def _rational_list(values: Any, name: str) -> List[Fraction]:
    if not isinstance(values, list):
        raise ParserException(f"{name} must be a list of coefficients")
    return [_rational(value) for value in values]


def field_from_description(data: Mapping[str, Any]) -> NumberField:
    if "min_poly" not in data:
        raise ParserException("a field description needs min_poly")
    min_poly = Polynomial.make(_rational_list(data["min_poly"], "min_poly"))
    if not min_poly.is_monic or not min_poly.is_integral:
        raise NotMonic(f"{min_poly} is not a monic integer polynomial")
    images = data.get("automorphisms")
    if images is not None and not isinstance(images, list):
        raise ParserException("automorphisms must be a list of coefficient lists")
    automorphisms = [_rational_list(image, "automorphism") for image in images or []]
    return NumberField.make(min_poly, automorphisms, data.get("label"))


def field_to_description(field: NumberField) -> Dict[str, Any]:
    images = field.automorphism_images
    return {
        "label": field.label,
        "min_poly": [str(c) for c in field.min_poly.coefficients],
        "automorphisms": [[str(c) for c in image] for image in images],
    }


def read_json(path: str) -> Any:
    try:
        with open(path) as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ParserException(f"{path} is not valid JSON: {e}") from None


def load_field(reference: str) -> NumberField:
    """
    A field given either by a catalog name or by the path of a JSON description
    """
    if os.path.exists(reference):
        return field_from_description(read_json(reference))
    return named_field(reference)
