from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, List, Sequence, Tuple, Union

from weilheight.error import BothZero, ZeroPolynomial
from weilheight.mypy_util import add_slots, cache
from weilheight.util import Rational, to_mpf


@add_slots
@dataclass(frozen=True)
class Polynomial:
    """
    A polynomial with rational coefficients, lowest degree first and without trailing
    zeros. Integer polynomials are the ones whose coefficients all have denominator 1;
    the zero polynomial has no coefficients and degree 0.
    """

    coefficients: Tuple[Fraction, ...]

    @classmethod
    def make(cls, coefficients: Iterable[Rational]) -> Polynomial:
        coeffs = [Fraction(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        return cls(tuple(coeffs))

    @classmethod
    def constant(cls, c: Rational) -> Polynomial:
        return cls.make([c])

    @classmethod
    def monomial(cls, degree: int, c: Rational = 1) -> Polynomial:
        return cls.make([0] * degree + [c])

    @classmethod
    def x(cls) -> Polynomial:
        return cls.monomial(1)

    @property
    def degree(self) -> int:
        return max(len(self.coefficients) - 1, 0)

    @property
    def is_zero(self) -> bool:
        return len(self.coefficients) == 0

    @property
    def is_constant(self) -> bool:
        return len(self.coefficients) <= 1

    @property
    def leading(self) -> Fraction:
        return self.coefficients[-1] if self.coefficients else Fraction(0)

    @property
    def is_monic(self) -> bool:
        return self.leading == 1

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coefficients)

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self.coefficients):
            return self.coefficients[i]
        return Fraction(0)

    def integer_coefficients(self) -> Tuple[int, ...]:
        if not self.is_integral:
            raise ValueError(f"{self} does not have integer coefficients")
        return tuple(c.numerator for c in self.coefficients)

    def __add__(self, other: Union[Polynomial, Rational]) -> Polynomial:
        other = _coerce(other)
        n = max(len(self.coefficients), len(other.coefficients))
        return Polynomial.make(self[i] + other[i] for i in range(n))

    def __radd__(self, other: Rational) -> Polynomial:
        return self + other

    def __neg__(self) -> Polynomial:
        return Polynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other: Union[Polynomial, Rational]) -> Polynomial:
        return self + (-_coerce(other))

    def __rsub__(self, other: Rational) -> Polynomial:
        return _coerce(other) - self

    def __mul__(self, other: Union[Polynomial, Rational]) -> Polynomial:
        other = _coerce(other)
        if self.is_zero or other.is_zero:
            return Polynomial(())
        size = len(self.coefficients) + len(other.coefficients) - 1
        product = [Fraction(0)] * size
        for i, a in enumerate(self.coefficients):
            if a == 0:
                continue
            for j, b in enumerate(other.coefficients):
                product[i + j] += a * b
        return Polynomial.make(product)

    def __rmul__(self, other: Rational) -> Polynomial:
        return self * other

    def __pow__(self, n: int) -> Polynomial:
        if n < 0:
            raise ValueError("negative powers of polynomials are not polynomials")
        result = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other: Polynomial) -> Tuple[Polynomial, Polynomial]:
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        remainder = list(self.coefficients)
        shift = other.degree
        quotient = [Fraction(0)] * max(len(remainder) - shift, 0)
        for k in range(len(quotient) - 1, -1, -1):
            c = remainder[k + shift] / other.leading
            quotient[k] = c
            if c != 0:
                for j, b in enumerate(other.coefficients):
                    remainder[k + j] -= c * b
        return Polynomial.make(quotient), Polynomial.make(remainder)

    def __floordiv__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[0]

    def __mod__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[1]

    def __call__(self, x: Rational) -> Fraction:
        result = Fraction(0)
        for c in reversed(self.coefficients):
            result = result * x + c
        return result

    def evaluate(self, x: Any, one: Any) -> Any:
        """
        Horner evaluation at any x supporting + and *, such as a field element or a
        polynomial, where one is the multiplicative identity of x's ring
        """
        result = one * 0
        for c in reversed(self.coefficients):
            result = result * x + one * c
        return result

    def evaluate_mp(self, z: Any) -> Any:
        """
        Horner evaluation at an mpmath number, in the caller's precision context
        """
        result = to_mpf(0)
        for c in reversed(self.coefficients):
            result = result * z + to_mpf(c)
        return result

    def derivative(self) -> Polynomial:
        return Polynomial.make(i * c for i, c in enumerate(self.coefficients) if i)

    def shift(self, c: Rational) -> Polynomial:
        """
        The polynomial x -> self(x + c)
        """
        return self.evaluate(Polynomial.make([c, 1]), Polynomial.constant(1))

    def monic(self) -> Polynomial:
        if self.is_zero:
            raise ZeroPolynomial("the zero polynomial has no monic form")
        return self * (1 / self.leading)

    def primitive(self) -> Polynomial:
        """
        The integer polynomial with coprime coefficients and positive leading
        coefficient that is a rational multiple of self
        """
        if self.is_zero:
            raise ZeroPolynomial("the zero polynomial has no primitive form")
        denominator = 1
        for c in self.coefficients:
            denominator = math.lcm(denominator, c.denominator)
        scaled = [c * denominator for c in self.coefficients]
        content = 0
        for c in scaled:
            content = math.gcd(content, c.numerator)
        if self.leading < 0:
            content = -content
        return Polynomial.make(c / content for c in scaled)

    def gcd(self, other: Polynomial) -> Polynomial:
        """
        The monic greatest common divisor over Q (zero if both are zero)
        """
        a, b = self, other
        while not b.is_zero:
            a, b = b, a % b
        return a if a.is_zero else a.monic()

    def gcdext(self, other: Polynomial) -> Tuple[Polynomial, Polynomial, Polynomial]:
        """
        Return (g, s, t) with g monic, g = gcd(self, other) and s*self + t*other = g
        """
        r0, r1 = self, other
        s0, s1 = Polynomial.constant(1), Polynomial(())
        t0, t1 = Polynomial(()), Polynomial.constant(1)
        while not r1.is_zero:
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0.is_zero:
            raise BothZero("gcd of two zero polynomials")
        lead = r0.leading
        return r0.monic(), s0 * (1 / lead), t0 * (1 / lead)

    @property
    def is_squarefree(self) -> bool:
        if self.is_zero:
            return False
        return self.gcd(self.derivative()).degree == 0

    def squarefree_part(self) -> Polynomial:
        return (self // self.gcd(self.derivative())).monic()

    def __str__(self) -> str:
        return self.format("x")

    def format(self, variable: str) -> str:
        if self.is_zero:
            return "0"
        terms: List[str] = []
        for i in range(len(self.coefficients) - 1, -1, -1):
            c = self.coefficients[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            magnitude = abs(c)
            if i == 0:
                body = str(magnitude)
            else:
                power = variable if i == 1 else f"{variable}^{i}"
                body = power if magnitude == 1 else f"{magnitude}*{power}"
            if terms:
                terms.append(f"{sign} {body}")
            else:
                terms.append(body if sign == "+" else f"-{body}")
        return " ".join(terms)


def _coerce(value: Union[Polynomial, Rational]) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    return Polynomial.constant(value)


def determinant(rows: Sequence[Sequence[Rational]]) -> Fraction:
    matrix = [[Fraction(x) for x in row] for row in rows]
    n = len(matrix)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if matrix[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            matrix[col], matrix[pivot] = matrix[pivot], matrix[col]
            det = -det
        det *= matrix[col][col]
        for r in range(col + 1, n):
            factor = matrix[r][col] / matrix[col][col]
            if factor != 0:
                for c in range(col, n):
                    matrix[r][c] -= factor * matrix[col][c]
    return det


def resultant(f: Polynomial, g: Polynomial) -> Fraction:
    """
    The determinant of the Sylvester matrix of f and g. A zero argument gives 0,
    unless the other argument is a nonzero constant, which gives 1.
    """
    if f.is_zero and g.is_zero:
        raise BothZero("the resultant of two zero polynomials is undefined")
    if f.is_zero or g.is_zero:
        other = g if f.is_zero else f
        return Fraction(1) if other.is_constant else Fraction(0)
    m, n = f.degree, g.degree
    if m == 0:
        return f.leading ** n
    if n == 0:
        return g.leading ** m
    size = m + n
    f_high = list(reversed(f.coefficients))
    g_high = list(reversed(g.coefficients))
    rows: List[List[Fraction]] = []
    for i in range(n):
        rows.append([Fraction(0)] * i + f_high + [Fraction(0)] * (size - m - 1 - i))
    for i in range(m):
        rows.append([Fraction(0)] * i + g_high + [Fraction(0)] * (size - n - 1 - i))
    return determinant(rows)


def discriminant(f: Polynomial) -> Fraction:
    n = f.degree
    if n == 0:
        raise ZeroPolynomial("constants have no discriminant")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, f.derivative()) / f.leading


def characteristic_polynomial(matrix: Sequence[Sequence[Rational]]) -> Polynomial:
    """
    det(x*I - matrix) by the Faddeev-LeVerrier recurrence, exactly
    """
    n = len(matrix)
    a = [[Fraction(x) for x in row] for row in matrix]
    coefficients = [Fraction(0)] * (n + 1)
    coefficients[n] = Fraction(1)
    m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        for i in range(n):
            m[i][i] += coefficients[n - k + 1]
        am = [
            [sum((a[i][r] * m[r][j] for r in range(n)), Fraction(0)) for j in range(n)]
            for i in range(n)
        ]
        trace = sum((am[i][i] for i in range(n)), Fraction(0))
        coefficients[n - k] = -trace / k
        m = am
    return Polynomial.make(coefficients)


@cache
def cyclotomic_polynomial(n: int) -> Polynomial:
    """
    The n-th cyclotomic polynomial, by exact division of x^n - 1 by the cyclotomic
    polynomials of the proper divisors of n
    """
    if n < 1:
        raise ValueError("cyclotomic polynomials are indexed by positive integers")
    result = Polynomial.monomial(n) - 1
    for d in range(1, n):
        if n % d == 0:
            result = result // cyclotomic_polynomial(d)
    return result
