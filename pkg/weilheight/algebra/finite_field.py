"""
Polynomial arithmetic over GF(p). Polynomials mod p are tuples of residues in
[0, p), lowest degree first, without trailing zeros.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Tuple

from weilheight.algebra.polynomial import Polynomial, discriminant
from weilheight.error import NotMonic, ZeroPolynomial
from weilheight.mypy_util import cache
from weilheight.util import require_prime

ModPoly = Tuple[int, ...]


def _trim(a: List[int]) -> ModPoly:
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def _deg(a: ModPoly) -> int:
    return len(a) - 1


def reduce_mod_p(f: Polynomial, p: int) -> ModPoly:
    residues: List[int] = []
    for c in f.coefficients:
        if c.denominator % p == 0:
            raise ValueError(f"{c} is not integral at {p}")
        residues.append(c.numerator * pow(c.denominator, -1, p) % p)
    return _trim(residues)


def lift(a: ModPoly) -> Polynomial:
    return Polynomial.make(a)


def add(a: ModPoly, b: ModPoly, p: int) -> ModPoly:
    n = max(len(a), len(b))
    padded_a = list(a) + [0] * (n - len(a))
    padded_b = list(b) + [0] * (n - len(b))
    return _trim([(x + y) % p for x, y in zip(padded_a, padded_b)])


def sub(a: ModPoly, b: ModPoly, p: int) -> ModPoly:
    return add(a, scale(b, p - 1, p), p)


def scale(a: ModPoly, c: int, p: int) -> ModPoly:
    return _trim([x * c % p for x in a])


def mul(a: ModPoly, b: ModPoly, p: int) -> ModPoly:
    if not a or not b:
        return ()
    product = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                product[i + j] += x * y
    return _trim([c % p for c in product])


def divmod_mod_p(a: ModPoly, b: ModPoly, p: int) -> Tuple[ModPoly, ModPoly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero mod p")
    remainder = list(a)
    shift = _deg(b)
    inverse = pow(b[-1], -1, p)
    quotient = [0] * max(len(remainder) - shift, 0)
    for k in range(len(quotient) - 1, -1, -1):
        c = remainder[k + shift] * inverse % p
        quotient[k] = c
        if c:
            for j, y in enumerate(b):
                remainder[k + j] = (remainder[k + j] - c * y) % p
    return _trim(quotient), _trim(remainder)


def monic(a: ModPoly, p: int) -> ModPoly:
    return scale(a, pow(a[-1], -1, p), p)


def gcd(a: ModPoly, b: ModPoly, p: int) -> ModPoly:
    while b:
        a, b = b, divmod_mod_p(a, b, p)[1]
    return monic(a, p) if a else a


def gcdext(a: ModPoly, b: ModPoly, p: int) -> Tuple[ModPoly, ModPoly, ModPoly]:
    """
    Return (g, s, t) with g the monic gcd of a and b and s*a + t*b = g mod p
    """
    r0, r1 = a, b
    s0: ModPoly = (1,)
    s1: ModPoly = ()
    t0: ModPoly = ()
    t1: ModPoly = (1,)
    while r1:
        q, r = divmod_mod_p(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(q, s1, p), p)
        t0, t1 = t1, sub(t0, mul(q, t1, p), p)
    if not r0:
        raise ZeroPolynomial("gcd of two zero polynomials")
    inverse = pow(r0[-1], -1, p)
    return scale(r0, inverse, p), scale(s0, inverse, p), scale(t0, inverse, p)


def powmod(a: ModPoly, n: int, modulus: ModPoly, p: int) -> ModPoly:
    result: ModPoly = (1,)
    base = divmod_mod_p(a, modulus, p)[1]
    while n:
        if n & 1:
            result = divmod_mod_p(mul(result, base, p), modulus, p)[1]
        base = divmod_mod_p(mul(base, base, p), modulus, p)[1]
        n >>= 1
    return divmod_mod_p(result, modulus, p)[1]


def _derivative(a: ModPoly, p: int) -> ModPoly:
    return _trim([i * c % p for i, c in enumerate(a)][1:])


def _pth_root(a: ModPoly, p: int) -> ModPoly:
    # a has zero derivative, so only exponents divisible by p occur; over GF(p)
    # the coefficients are their own p-th roots
    return _trim([a[i] for i in range(0, len(a), p)])


def _squarefree_decomposition(f: ModPoly, p: int) -> List[Tuple[ModPoly, int]]:
    result: List[Tuple[ModPoly, int]] = []
    derivative = _derivative(f, p)
    if not derivative:
        for g, m in _squarefree_decomposition(_pth_root(f, p), p):
            result.append((g, m * p))
        return result
    c = gcd(f, derivative, p)
    w = divmod_mod_p(f, c, p)[0]
    i = 1
    while _deg(w) > 0:
        y = gcd(w, c, p)
        z = divmod_mod_p(w, y, p)[0]
        if _deg(z) > 0:
            result.append((monic(z, p), i))
        i += 1
        w = y
        c = divmod_mod_p(c, y, p)[0]
    if _deg(c) > 0:
        for g, m in _squarefree_decomposition(_pth_root(c, p), p):
            result.append((g, m * p))
    return result


def _distinct_degree(f: ModPoly, p: int) -> List[Tuple[ModPoly, int]]:
    """
    Split a monic squarefree f into products of irreducibles sharing a degree
    """
    result: List[Tuple[ModPoly, int]] = []
    x: ModPoly = (0, 1)
    h = divmod_mod_p(x, f, p)[1]
    rest = f
    d = 0
    while _deg(rest) >= 2 * (d + 1):
        d += 1
        h = powmod(h, p, rest, p)
        g = gcd(rest, sub(h, x, p), p)
        if _deg(g) > 0:
            result.append((g, d))
            rest = divmod_mod_p(rest, g, p)[0]
            h = divmod_mod_p(h, rest, p)[1]
    if _deg(rest) > 0:
        result.append((rest, _deg(rest)))
    return result


def _equal_degree(f: ModPoly, d: int, p: int, rng: random.Random) -> List[ModPoly]:
    n = _deg(f)
    if n == d:
        return [f]
    while True:
        a = _trim([rng.randrange(p) for _ in range(n)])
        if _deg(a) < 1:
            continue
        if p == 2:
            # absolute trace from GF(2^d), which is 0 or 1 in each component
            b = a
            term = a
            for _ in range(d - 1):
                term = divmod_mod_p(mul(term, term, p), f, p)[1]
                b = add(b, term, p)
        else:
            b = sub(powmod(a, (p ** d - 1) // 2, f, p), (1,), p)
        g = gcd(f, b, p)
        if 0 < _deg(g) < n:
            cofactor = divmod_mod_p(f, g, p)[0]
            return _equal_degree(g, d, p, rng) + _equal_degree(cofactor, d, p, rng)


@cache
def factor_mod_p(f: Polynomial, p: int) -> Tuple[Tuple[Polynomial, int], ...]:
    """
    Factor f modulo the prime p into monic irreducibles with multiplicities, sorted
    by degree and then by coefficients (lowest degree first). The random splits are
    seeded from f and p, so the result is reproducible.
    """
    require_prime(p)
    reduced = reduce_mod_p(f, p)
    if not reduced:
        raise ZeroPolynomial(f"{f} vanishes modulo {p}")
    if _deg(reduced) == 0:
        return ()
    rng = random.Random(f"{p}:{reduced}")
    factors: List[Tuple[ModPoly, int]] = []
    for part, multiplicity in _squarefree_decomposition(monic(reduced, p), p):
        for product, d in _distinct_degree(part, p):
            for g in _equal_degree(product, d, p, rng):
                factors.append((monic(g, p), multiplicity))
    factors.sort(key=lambda item: (len(item[0]), item[0]))
    return tuple((lift(g), m) for g, m in factors)


def is_irreducible_mod_p(f: Polynomial, p: int) -> bool:
    factors = factor_mod_p(f, p)
    return len(factors) == 1 and factors[0][1] == 1 and factors[0][0].degree == f.degree


@cache
def dedekind_maximal_at_p(f: Polynomial, p: int) -> bool:
    """
    Dedekind's criterion: for monic integer f with f = prod g_i^e_i mod p, put
    g = prod g_i, h = prod g_i^(e_i - 1) and F = (g*h - f)/p. Then Z[x]/(f) is
    maximal at p exactly when F, g and h have no common factor mod p.
    """
    if not f.is_monic or not f.is_integral:
        raise NotMonic(f"{f} is not a monic integer polynomial")
    require_prime(p)
    if f.degree == 0 or Fraction(discriminant(f)).numerator % p != 0:
        return True
    g = Polynomial.constant(1)
    h = Polynomial.constant(1)
    for factor, multiplicity in factor_mod_p(f, p):
        g = g * factor
        h = h * factor ** (multiplicity - 1)
    big_f = (g * h - f) * Fraction(1, p)
    common = gcd(reduce_mod_p(big_f, p), reduce_mod_p(g, p), p)
    common = gcd(common, reduce_mod_p(h, p), p)
    return _deg(common) == 0
