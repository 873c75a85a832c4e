from __future__ import annotations

import logging
from fractions import Fraction
from typing import Tuple

from weilheight.algebra import finite_field as gfp
from weilheight.algebra.polynomial import Polynomial
from weilheight.error import NotMonic, NotSquarefree
from weilheight.mypy_util import cache
from weilheight.util import require_prime

logger = logging.getLogger(__name__)


def _reduce_mod(f: Polynomial, modulus: int) -> Polynomial:
    return Polynomial.make(c.numerator % modulus for c in f.coefficients)


@cache
def hensel_lift(
    f: Polynomial, g: Polynomial, h: Polynomial, p: int, digits: int
) -> Tuple[Polynomial, Polynomial]:
    """
    Lift a coprime factorization f = g*h mod p to f = G*H mod p^digits.

    f is a monic integer polynomial and g is monic; the lifts have coefficients in
    [0, p^digits) and reduce to g and h mod p, with G monic of the degree of g.
    """
    require_prime(p)
    if not f.is_monic or not f.is_integral:
        raise NotMonic(f"{f} is not a monic integer polynomial")
    g_bar = gfp.reduce_mod_p(g, p)
    h_bar = gfp.reduce_mod_p(h, p)
    if gfp.sub(gfp.reduce_mod_p(f, p), gfp.mul(g_bar, h_bar, p), p):
        raise ValueError(f"{g} * {h} is not a factorization of {f} mod {p}")
    common, s, t = gfp.gcdext(g_bar, h_bar, p)
    if common != (1,):
        raise NotSquarefree(f"{g} and {h} share a factor mod {p}")
    big_g, big_h = gfp.lift(g_bar), gfp.lift(h_bar)
    modulus = p
    for _ in range(digits - 1):
        # f - G*H is divisible by the current modulus
        error = (f - big_g * big_h) * Fraction(1, modulus)
        e = gfp.reduce_mod_p(error, p)
        q, r = gfp.divmod_mod_p(gfp.mul(t, e, p), g_bar, p)
        dh = gfp.add(gfp.mul(s, e, p), gfp.mul(q, h_bar, p), p)
        big_g = big_g + gfp.lift(r) * modulus
        big_h = big_h + gfp.lift(dh) * modulus
        modulus *= p
    logger.debug("lifted a factor of %s to %d digits at %d", f, digits, p)
    return _reduce_mod(big_g, modulus), _reduce_mod(big_h, modulus)


def local_factor(
    f: Polynomial, p: int, residue_factor: Polynomial, e: int, digits: int
) -> Polynomial:
    """
    The factor of f over Z_p, known mod p^digits, that reduces to residue_factor^e
    """
    g = residue_factor ** e
    g_bar = gfp.reduce_mod_p(g, p)
    h_bar, remainder = gfp.divmod_mod_p(gfp.reduce_mod_p(f, p), g_bar, p)
    if remainder:
        raise ValueError(f"{residue_factor}^{e} does not divide {f} mod {p}")
    return hensel_lift(f, gfp.lift(g_bar), gfp.lift(h_bar), p, digits)[0]
