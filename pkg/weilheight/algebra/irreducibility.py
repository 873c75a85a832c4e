from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import FrozenSet, Iterator, List, Literal, Optional

from weilheight.algebra.finite_field import factor_mod_p
from weilheight.algebra.polynomial import (
    Polynomial,
    cyclotomic_polynomial,
    discriminant,
)
from weilheight.config import DEFAULT_SETTINGS
from weilheight.error import NotIrreducible, NotMonic, Unverifiable
from weilheight.mypy_util import add_slots
from weilheight.util import euler_phi, factor_integer, primes_up_to

CertificateMethod = Literal[
    "linear", "rational-roots", "eisenstein", "cyclotomic", "mod-p", "degree-pattern"
]

_EISENSTEIN_SHIFTS = (0, 1, -1, 2, -2, 3, -3)


@add_slots
@dataclass(frozen=True)
class IrreducibilityCertificate:
    """
    Why a polynomial is irreducible over Q.

    Args:
        method: The argument used
        witness: The prime for eisenstein and mod-p, the index n for cyclotomic, and
            the largest prime consulted for degree-pattern
        shift: The c with f(x + c) Eisenstein
    """

    method: CertificateMethod
    witness: int = 0
    shift: int = 0


def _divisors(n: int) -> Iterator[int]:
    factors = list(factor_integer(n).items())
    for exponents in itertools.product(*(range(e + 1) for _, e in factors)):
        yield math.prod(p ** k for (p, _), k in zip(factors, exponents))


def _has_rational_root(f: Polynomial) -> bool:
    constant = f[0].numerator
    if constant == 0:
        return True
    for d in _divisors(constant):
        if f(d) == 0 or f(-d) == 0:
            return True
    return False


def _eisenstein(f: Polynomial) -> Optional[IrreducibilityCertificate]:
    for shift in _EISENSTEIN_SHIFTS:
        shifted = f.shift(shift).integer_coefficients()
        lower = shifted[:-1]
        if lower[0] == 0:
            continue
        common = 0
        for c in lower:
            common = math.gcd(common, c)
        if common < 2:
            continue
        for p in factor_integer(common):
            if lower[0] % (p * p) != 0:
                return IrreducibilityCertificate("eisenstein", p, shift)
    return None


def _cyclotomic(f: Polynomial) -> Optional[IrreducibilityCertificate]:
    n = f.degree
    # phi(m) >= sqrt(m / 2), so phi(m) = n forces m <= 2 n^2
    for m in range(1, 2 * n * n + 1):
        if euler_phi(m) == n and cyclotomic_polynomial(m) == f:
            return IrreducibilityCertificate("cyclotomic", m)
    return None


def _subset_sums(degrees: List[int]) -> FrozenSet[int]:
    sums = {0}
    for d in degrees:
        sums |= {s + d for s in sums}
    return frozenset(sums)


def certify_irreducible(
    f: Polynomial, prime_bound: int = DEFAULT_SETTINGS.irreducibility_prime_bound
) -> IrreducibilityCertificate:
    """
    Prove that the monic integer polynomial f is irreducible over Q.

    Raises:
        NotIrreducible: f has a proper factor
        Unverifiable: no certificate was found among the tried methods
    """
    if not f.is_monic or not f.is_integral:
        raise NotMonic(f"{f} is not a monic integer polynomial")
    n = f.degree
    if n == 0:
        raise NotIrreducible("constants are not irreducible")
    if n == 1:
        return IrreducibilityCertificate("linear")
    if not f.is_squarefree:
        raise NotIrreducible(f"{f} has a repeated factor")
    if _has_rational_root(f):
        raise NotIrreducible(f"{f} has a rational root")
    if n <= 3:
        return IrreducibilityCertificate("rational-roots")

    certificate = _eisenstein(f) or _cyclotomic(f)
    if certificate is not None:
        return certificate

    disc = discriminant(f).numerator
    possible = frozenset(range(n + 1))
    for p in primes_up_to(prime_bound):
        if disc % p == 0:
            continue
        degrees = [g.degree for g, _ in factor_mod_p(f, p)]
        if degrees == [n]:
            return IrreducibilityCertificate("mod-p", p)
        # a factor over Q of degree k reduces to a product of some factors mod p
        possible &= _subset_sums(degrees)
        if possible == {0, n}:
            return IrreducibilityCertificate("degree-pattern", p)
    message = f"could not prove {f} irreducible with primes below {prime_bound}"
    raise Unverifiable(message)
