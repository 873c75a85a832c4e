from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional, Tuple

import mpmath
from mpmath import mp

from weilheight.algebra.polynomial import Polynomial
from weilheight.config import DEFAULT_SETTINGS
from weilheight.error import NotSquarefree, PrecisionExhausted, ZeroPolynomial
from weilheight.mypy_util import add_slots, cache
from weilheight.util import to_mpf

logger = logging.getLogger(__name__)

# bits carried beyond the requested precision while computing
_GUARD_BITS = 32


@add_slots
@dataclass(frozen=True)
class ComplexApprox:
    """
    A root of an integer polynomial known to lie in the closed disk of the given
    radius around real + imag*i. Real roots have imag exactly 0 and non-real roots
    record the index of their conjugate in the same root list.
    """

    real: Any
    imag: Any
    radius: Any
    precision_bits: int
    conjugate: Optional[int] = None

    @property
    def value(self) -> Any:
        return mp.mpc(self.real, self.imag)

    @property
    def is_real(self) -> bool:
        return self.conjugate is None

    def evaluation_error(self, poly: Polynomial) -> Any:
        """
        A bound on |poly(root) - poly(center)| for any point of the disk
        """
        bound_radius = abs(self.value) + self.radius
        total = mp.mpf(0)
        for k, c in enumerate(poly.coefficients):
            if k:
                total += k * abs(to_mpf(c)) * bound_radius ** (k - 1)
        return self.radius * total


def complex_roots(f: Polynomial, precision_bits: int) -> Tuple[ComplexApprox, ...]:
    """
    All complex roots of the squarefree polynomial f, with certified radii below
    2^-(precision_bits / 2), ordered by real part and then by imaginary part.

    Raises:
        NotSquarefree: f has a repeated root
        PrecisionExhausted: the roots could not be separated below the precision cap
    """
    if precision_bits < 53:
        raise ValueError("root approximations need at least 53 bits")
    if f.is_zero:
        raise ZeroPolynomial("the zero polynomial has no roots to isolate")
    if not f.is_squarefree:
        raise NotSquarefree(f"{f} has a repeated root")
    return _certified_roots(f, precision_bits, DEFAULT_SETTINGS.max_precision_bits)


@cache
def _certified_roots(
    f: Polynomial, precision_bits: int, max_precision_bits: int
) -> Tuple[ComplexApprox, ...]:
    if f.degree == 0:
        return ()
    working = precision_bits
    while working <= max_precision_bits:
        roots = _try_certify(f, precision_bits, working)
        if roots is not None:
            return roots
        logger.debug(
            "could not separate the roots of %s at %d bits, doubling", f, working
        )
        working *= 2
    message = f"the roots of {f} are not separated at {max_precision_bits} bits"
    raise PrecisionExhausted(message)


def _try_certify(
    f: Polynomial, precision_bits: int, working: int
) -> Optional[Tuple[ComplexApprox, ...]]:
    n = f.degree
    with mp.workprec(working + _GUARD_BITS):
        coefficients = [to_mpf(c) for c in reversed(f.coefficients)]
        if n == 1:
            centers = [-coefficients[1] / coefficients[0]]
        else:
            try:
                centers = mpmath.polyroots(
                    coefficients, maxsteps=50 + 20 * n, extraprec=working
                )
            except (mpmath.NoConvergence, ZeroDivisionError):
                return None
        centers = [mp.mpc(z) for z in centers]
        radii = _weierstrass_radii(f, coefficients[0], centers, working)
        if radii is None:
            return None
        limit = mp.ldexp(1, -(precision_bits // 2))
        if any(r >= limit for r in radii):
            return None
        for i in range(n):
            for j in range(i + 1, n):
                if abs(centers[i] - centers[j]) <= radii[i] + radii[j]:
                    return None
        return _classify(centers, radii, precision_bits)


def _weierstrass_radii(
    f: Polynomial, lead: Any, centers: List[Any], working: int
) -> Optional[List[Any]]:
    """
    Disks of radius n*|W_i| around the centers, W_i the Weierstrass correction, hold
    all roots; pairwise disjoint disks hold exactly one root each
    """
    n = len(centers)
    radii: List[Any] = []
    for i, z in enumerate(centers):
        denominator = lead
        for j, w in enumerate(centers):
            if j != i:
                denominator *= z - w
        if denominator == 0:
            return None
        correction = f.evaluate_mp(z) / denominator
        slack = mp.ldexp(abs(z) + 1, -working)
        radii.append(n * abs(correction) + slack)
    return radii


def _classify(
    centers: List[Any], radii: List[Any], precision_bits: int
) -> Optional[Tuple[ComplexApprox, ...]]:
    n = len(centers)
    roots: List[ComplexApprox] = []
    for i, (z, r) in enumerate(zip(centers, radii)):
        mirror = mp.conj(z)
        if abs(z.imag) <= r:
            # the root is real when the mirrored disk meets no other disk
            for j in range(n):
                if j != i and abs(mirror - centers[j]) <= r + radii[j]:
                    return None
            roots.append(ComplexApprox(z.real, mp.mpf(0), r, precision_bits))
            continue
        partners = [j for j in range(n) if abs(mirror - centers[j]) <= r + radii[j]]
        if len(partners) != 1 or partners[0] == i:
            return None
        roots.append(ComplexApprox(z.real, z.imag, r, precision_bits, partners[0]))

    for i, root in enumerate(roots):
        j = root.conjugate
        if j is not None and i < j:
            # conjugate pairs share one real part and opposite imaginary parts
            partner = roots[j]
            if partner.conjugate != i:
                return None
            real = (root.real + partner.real) / 2
            imag = (abs(root.imag) + abs(partner.imag)) / 2
            radius = max(root.radius, partner.radius)
            for k in (i, j):
                sign = mp.sign(roots[k].imag)
                roots[k] = replace(roots[k], real=real, imag=sign * imag, radius=radius)

    scale = mp.ldexp(1, precision_bits // 2)
    order = sorted(
        range(n), key=lambda k: (int(mp.nint(roots[k].real * scale)), roots[k].imag)
    )
    position = {old: new for new, old in enumerate(order)}
    return tuple(_reindexed(roots[old], position) for old in order)


def _reindexed(root: ComplexApprox, position: Dict[int, int]) -> ComplexApprox:
    if root.conjugate is None:
        return root
    return replace(root, conjugate=position[root.conjugate])
