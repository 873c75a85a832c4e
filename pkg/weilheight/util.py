from __future__ import annotations

import math
import random
from collections import Counter
from fractions import Fraction
from typing import Any, Dict, Tuple, Union

import mpmath
from mpmath import mp

from weilheight.error import NotPrime
from weilheight.mypy_util import cache

Rational = Union[int, Fraction]

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """
    Miller-Rabin with the first thirteen prime bases, which is deterministic below
    3.3 * 10^24 and overwhelmingly reliable above
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def require_prime(p: int) -> None:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")


@cache
def primes_up_to(bound: int) -> Tuple[int, ...]:
    sieve = bytearray([1]) * (bound + 1)
    for i in range(min(2, bound + 1)):
        sieve[i] = 0
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, bound + 1, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def _pollard_brent(n: int) -> int:
    # seeded from n so that factorizations are reproducible
    rng = random.Random(n)
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factor_integer(n: int) -> Dict[int, int]:
    """
    Factor a nonzero integer into primes, ignoring the sign
    """
    n = abs(n)
    if n == 0:
        raise ValueError("cannot factor 0")
    factors: Counter[int] = Counter()
    for p in primes_up_to(1000):
        while n % p == 0:
            factors[p] += 1
            n //= p
    pending = [n] if n > 1 else []
    while pending:
        m = pending.pop()
        if is_prime(m):
            factors[m] += 1
        else:
            divisor = _pollard_brent(m)
            pending.extend([divisor, m // divisor])
    return dict(factors)


def int_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("the valuation of 0 is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(q: Rational, p: int) -> int:
    q = Fraction(q)
    return int_valuation(q.numerator, p) - int_valuation(q.denominator, p)


def euler_phi(n: int) -> int:
    result = n
    for p in factor_integer(n):
        result = result // p * (p - 1)
    return result


def to_mpf(q: Rational) -> Any:
    q = Fraction(q)
    return mp.mpf(q.numerator) / q.denominator


def as_mpf(x: Any) -> Any:
    """
    An mpf from an exact rational, a float, an mpf or a decimal string
    """
    if isinstance(x, (int, Fraction)):
        return to_mpf(x)
    return mp.mpf(x)


def mpf_to_fraction(x: Any) -> Fraction:
    man, exp = mp.mpf(x).man_exp
    if exp >= 0:
        return Fraction(man * 2 ** exp)
    return Fraction(man, 2 ** -exp)


def tolerance(precision_bits: int) -> Any:
    """
    Numeric matches such as root fingerprints and lattice kernels use
    2^-(precision_bits / 4)
    """
    return mp.ldexp(1, -(precision_bits // 4))


def identity_tolerance(precision_bits: int) -> Any:
    """
    Identities between computed heights and norms hold to 2^-(2 precision_bits / 3),
    below 1e-25 at 128 bits
    """
    return mp.ldexp(1, -((2 * precision_bits) // 3))


def decimal_string(x: Any, precision_bits: int) -> str:
    digits = max(int(precision_bits * math.log10(2)), 1)
    return str(mpmath.nstr(mp.mpf(x), digits))
