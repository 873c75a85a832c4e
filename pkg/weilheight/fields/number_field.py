from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import (
    Callable,
    Dict,
    Iterable,
    List,
    Literal,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from mpmath import mp

from weilheight.algebra.irreducibility import (
    IrreducibilityCertificate,
    certify_irreducible,
)
from weilheight.algebra.polynomial import (
    Polynomial,
    characteristic_polynomial,
    resultant,
)
from weilheight.algebra.roots import complex_roots
from weilheight.config import DEFAULT_SETTINGS
from weilheight.error import (
    BadAutomorphism,
    DivisionByZero,
    FieldMismatch,
    NotClosed,
    ZeroElement,
)
from weilheight.mypy_util import add_slots, cache
from weilheight.util import Rational, euler_phi

# elements print and parse as polynomials in the generator t
GENERATOR_NAME = "t"


@add_slots
@dataclass(frozen=True)
class NumberField:
    """
    The field Q(t) = Q[x]/(min_poly) with its known automorphisms.

    Args:
        min_poly: Monic integer polynomial, certified irreducible
        label: Name used in reports
        certificate: Proof of the irreducibility of min_poly
        automorphism_images: Coordinates of the image of t under each automorphism,
            the identity first
    """

    min_poly: Polynomial
    label: str
    certificate: IrreducibilityCertificate
    automorphism_images: Tuple[Tuple[Fraction, ...], ...]

    @classmethod
    def make(
        cls,
        min_poly: Polynomial,
        automorphism_images: Optional[Sequence[Sequence[Rational]]] = None,
        label: Optional[str] = None,
    ) -> NumberField:
        """
        Validate a number field description.

        Raises:
            NotIrreducible: min_poly has a proper factor
            Unverifiable: irreducibility could not be certified
            BadAutomorphism: an image is not a root of min_poly
            NotClosed: the automorphisms are not closed under composition
        """
        certificate = certify_irreducible(min_poly)
        label = label or str(min_poly)
        identity = cls(min_poly, label, certificate, ()).generator.coords
        field = cls(min_poly, label, certificate, (identity,))
        if not automorphism_images:
            return field

        images: List[Tuple[Fraction, ...]] = []
        for coords in automorphism_images:
            image = field.element(coords)
            residual = min_poly.evaluate(image, field.one)
            if not residual.is_zero:
                raise BadAutomorphism(f"{image} is not a root of {min_poly}")
            if image.coords not in images:
                images.append(image.coords)
        if identity not in images:
            raise NotClosed("the automorphisms must include the identity")
        images.remove(identity)
        field = cls(min_poly, label, certificate, (identity, *images))

        known = set(field.automorphism_images)
        for sigma in field.automorphisms:
            for tau in field.automorphisms:
                if compose_automorphisms(sigma, tau).image.coords not in known:
                    raise NotClosed(f"{sigma} composed with {tau} is missing")
        return field

    @property
    def degree(self) -> int:
        return self.min_poly.degree

    @property
    def galois(self) -> bool:
        return len(self.automorphism_images) == self.degree

    def element(self, coords: Iterable[Rational]) -> FieldElement:
        """
        The element sum c_i t^i; polynomials of any length are reduced mod min_poly
        """
        return self.from_polynomial(Polynomial.make(coords))

    def from_polynomial(self, poly: Polynomial) -> FieldElement:
        remainder = poly % self.min_poly
        return FieldElement(self, _pad(remainder.coefficients, self.degree))

    def from_rational(self, q: Rational) -> FieldElement:
        return self.element([q])

    @property
    def zero(self) -> FieldElement:
        return self.element([])

    @property
    def one(self) -> FieldElement:
        return self.element([1])

    @property
    def generator(self) -> FieldElement:
        return self.element([0, 1])

    @property
    def automorphisms(self) -> Tuple[Automorphism, ...]:
        return tuple(
            Automorphism(self, FieldElement(self, image))
            for image in self.automorphism_images
        )

    @property
    def identity(self) -> Automorphism:
        return self.automorphisms[0]

    def __str__(self) -> str:
        return self.label


def _pad(coefficients: Iterable[Fraction], degree: int) -> Tuple[Fraction, ...]:
    coords = list(coefficients)
    return tuple(coords + [Fraction(0)] * (degree - len(coords)))


@add_slots
@dataclass(frozen=True)
class FieldElement:
    """
    An element of a number field, as coordinates in the power basis 1, t, ...
    """

    field: NumberField
    coords: Tuple[Fraction, ...]

    @property
    def polynomial(self) -> Polynomial:
        return Polynomial.make(self.coords)

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    @property
    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    @property
    def denominator(self) -> int:
        return math.lcm(*(c.denominator for c in self.coords))

    def _coerce(self, other: Union[FieldElement, Rational]) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{other.field} is not {self.field}")
            return other
        return self.field.from_rational(other)

    def __add__(self, other: Union[FieldElement, Rational]) -> FieldElement:
        other = self._coerce(other)
        coords = tuple(a + b for a, b in zip(self.coords, other.coords))
        return FieldElement(self.field, coords)

    def __radd__(self, other: Rational) -> FieldElement:
        return self + other

    def __neg__(self) -> FieldElement:
        return FieldElement(self.field, tuple(-c for c in self.coords))

    def __sub__(self, other: Union[FieldElement, Rational]) -> FieldElement:
        return self + (-self._coerce(other))

    def __rsub__(self, other: Rational) -> FieldElement:
        return self._coerce(other) - self

    def __mul__(self, other: Union[FieldElement, Rational]) -> FieldElement:
        if not isinstance(other, FieldElement):
            q = Fraction(other)
            return FieldElement(self.field, tuple(c * q for c in self.coords))
        other = self._coerce(other)
        return self.field.from_polynomial(self.polynomial * other.polynomial)

    def __rmul__(self, other: Rational) -> FieldElement:
        return self * other

    def inverse(self) -> FieldElement:
        if self.is_zero:
            raise DivisionByZero("0 has no inverse")
        # min_poly is irreducible, so the gcd with a nonzero element is 1
        _, s, _ = self.polynomial.gcdext(self.field.min_poly)
        return self.field.from_polynomial(s)

    def __truediv__(self, other: Union[FieldElement, Rational]) -> FieldElement:
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other: Rational) -> FieldElement:
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> FieldElement:
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = self.field.one
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __str__(self) -> str:
        return self.polynomial.format(GENERATOR_NAME)


ArithmeticOp = Literal["add", "sub", "mul", "div", "neg", "inv"]

_BINARY: Dict[str, Callable[[FieldElement, FieldElement], FieldElement]] = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
}


def element_arithmetic(
    op: ArithmeticOp, a: FieldElement, b: Optional[FieldElement] = None
) -> FieldElement:
    """
    Apply op to a (and b for the binary operations), reducing mod min_poly.

    Raises:
        FieldMismatch: a and b belong to different fields
        DivisionByZero: division by or inversion of 0
    """
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    if b is None:
        raise ValueError(f"{op} needs two operands")
    return _BINARY[op](a, b)


@cache
def minimal_polynomial(a: FieldElement) -> Polynomial:
    """
    The monic minimal polynomial of a over Q, from the characteristic polynomial of
    multiplication by a
    """
    field = a.field
    columns = []
    power = field.one
    for _ in range(field.degree):
        columns.append((a * power).coords)
        power = power * field.generator
    matrix = [[column[i] for column in columns] for i in range(field.degree)]
    return characteristic_polynomial(matrix).squarefree_part()


def norm(a: FieldElement) -> Fraction:
    """
    The field norm of a, as the resultant of min_poly and the polynomial of a
    """
    return resultant(a.field.min_poly, a.polynomial)


@cache
def is_torsion(
    a: FieldElement, precision_bits: int = DEFAULT_SETTINGS.precision_bits
) -> bool:
    """
    Whether a is a root of unity. Every conjugate of a root of unity lies on the
    unit circle and its order n has phi(n) equal to the degree of a.
    """
    if a.is_zero:
        raise ZeroElement("0 is not a unit")
    m = minimal_polynomial(a)
    if not m.is_integral:
        return False
    with mp.workprec(precision_bits):
        for root in complex_roots(m, precision_bits):
            if abs(root.value) - root.radius > 1:
                return False
    k = m.degree
    for n in range(1, 2 * k * k + 1):
        if euler_phi(n) == k and a ** n == a.field.one:
            return True
    return False


@add_slots
@dataclass(frozen=True)
class Automorphism:
    """
    A field automorphism, determined by the image of the generator
    """

    field: NumberField
    image: FieldElement

    def __call__(self, a: FieldElement) -> FieldElement:
        if a.field != self.field:
            raise FieldMismatch(f"{a.field} is not {self.field}")
        return a.polynomial.evaluate(self.image, self.field.one)

    @property
    def is_identity(self) -> bool:
        return self.image == self.field.generator

    def inverse(self) -> Automorphism:
        for candidate in self.field.automorphisms:
            if compose_automorphisms(self, candidate).is_identity:
                return candidate
        raise BadAutomorphism(f"{self} has no inverse among the automorphisms")

    def __str__(self) -> str:
        return f"{GENERATOR_NAME} -> {self.image}"


def compose_automorphisms(sigma: Automorphism, tau: Automorphism) -> Automorphism:
    """
    The automorphism a -> sigma(tau(a))
    """
    if sigma.field != tau.field:
        raise FieldMismatch(f"{sigma.field} is not {tau.field}")
    return Automorphism(sigma.field, sigma(tau.image))
