from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple, Union

import numpy as np

from weilheight.config import DEFAULT_SETTINGS, Settings
from weilheight.error import EmptyBasis, NotInX
from weilheight.fields.number_field import FieldElement
from weilheight.mypy_util import add_slots
from weilheight.places.place import rational_place_key
from weilheight.space.step_function import (
    StepFunction,
    embed_fa,
    integral,
    linear_combine,
    lp_norm,
)
from weilheight.tower.tower import partition
from weilheight.util import Rational, decimal_string, mpf_to_fraction, tolerance

logger = logging.getLogger(__name__)


def nearest_rational(x: Union[Rational, float, Any], bound: int) -> Fraction:
    """
    The rational closest to x with denominator at most bound, ties going to the
    smaller denominator. Descends the Stern-Brocot tree keeping lower < x < upper,
    taking as many steps toward x at once as stay on the same side.
    """
    if bound < 1:
        raise ValueError(f"denominator bound {bound} is not positive")
    if isinstance(x, (int, float, Fraction)):
        target = Fraction(x)
    else:
        target = mpf_to_fraction(x)
    if target.denominator <= bound:
        return target

    n = math.floor(target)
    lower, upper = Fraction(n), Fraction(n + 1)
    while lower.denominator + upper.denominator <= bound:
        below = target * lower.denominator - lower.numerator
        above = upper.numerator - target * upper.denominator
        mediant = Fraction(
            lower.numerator + upper.numerator, lower.denominator + upper.denominator
        )
        if mediant < target:
            steps = min(
                math.ceil(below / above) - 1,
                (bound - lower.denominator) // upper.denominator,
            )
            lower = Fraction(
                lower.numerator + steps * upper.numerator,
                lower.denominator + steps * upper.denominator,
            )
        else:
            steps = min(
                math.ceil(above / below) - 1,
                (bound - upper.denominator) // lower.denominator,
            )
            upper = Fraction(
                upper.numerator + steps * lower.numerator,
                upper.denominator + steps * lower.denominator,
            )

    lower_gap, upper_gap = target - lower, upper - target
    if lower_gap == upper_gap:
        return min(lower, upper, key=lambda q: q.denominator)
    return lower if lower_gap < upper_gap else upper


@add_slots
@dataclass(frozen=True)
class ApproxSolution:
    """
    A rational combination sum c_i f_{a_i} close to a target function.

    Args:
        coefficients: c_i for the i-th basis element, denominators within the bound
        real_coefficients: The weighted least squares solution before rounding
        residual_l1: L^1 norm of target - sum c_i f_{a_i}
        residual_l2: L^2 norm of target - sum c_i f_{a_i}
        residual_l2_real: L^2 norm of the residual of the real solution
        denominator_bound: The bound used for rounding
    """

    coefficients: Tuple[Fraction, ...]
    real_coefficients: Tuple[float, ...]
    residual_l1: Any
    residual_l2: Any
    residual_l2_real: float
    denominator_bound: int


def approximate(
    target: StepFunction,
    basis: Sequence[FieldElement],
    denominator_bound: Optional[int] = None,
    precision_bits: Optional[int] = None,
    settings: Settings = DEFAULT_SETTINGS,
) -> ApproxSolution:
    """
    Fit target by the functions f_a of the basis elements in L^2, then round the
    coefficients to rationals.

    Raises:
        EmptyBasis: basis is empty
        NotInX: the integral of target is not 0
        FieldMismatch: a basis element is not in the field of the target's level
    """
    if not basis:
        raise EmptyBasis("nothing to approximate with")
    bits = precision_bits or target.precision_bits
    bound = denominator_bound or settings.denominator_bound
    total = integral(target)
    if abs(total) >= tolerance(bits):
        raise NotInX(
            f"the target integrates to {decimal_string(total, 64)} and not to 0"
        )

    tower, level = target.tower, target.level
    functions = [embed_fa(tower, level, a, bits) for a in basis]
    supports = {*target.support, *(v for f in functions for v in f.support)}
    cells = [
        cell
        for rational_place in sorted(supports, key=rational_place_key)
        for cell in partition(tower, level, rational_place, bits).cells
    ]
    place_ids = [cell.place.place_id for cell in cells]
    scale = np.array([math.sqrt(cell.weight) for cell in cells])
    matrix = np.array([[float(f(w)) for f in functions] for w in place_ids])
    matrix = matrix * scale[:, np.newaxis]
    values = np.array([float(target(w)) for w in place_ids]) * scale

    real, *_ = np.linalg.lstsq(matrix, values, rcond=None)
    residual_l2_real = float(np.linalg.norm(matrix @ real - values))
    logger.debug("least squares coefficients %s, residual %g", real, residual_l2_real)

    coefficients = tuple(nearest_rational(float(c), bound) for c in real)
    terms: List[Tuple[Rational, StepFunction]] = [(1, target)]
    terms.extend((-c, f) for c, f in zip(coefficients, functions))
    residual = linear_combine(tower, level, terms, bits)
    return ApproxSolution(
        coefficients,
        tuple(float(c) for c in real),
        lp_norm(residual, 1),
        lp_norm(residual, 2),
        residual_l2_real,
        bound,
    )
