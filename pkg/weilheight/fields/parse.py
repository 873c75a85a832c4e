"""
Parsing of field elements written as rational expressions in the generator, such as
"3 + 4*t", "(1 + t)/2", "2t^3 - 1/3" or "t**-1".
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import List, Literal

from weilheight.error import ParserException
from weilheight.fields.number_field import FieldElement, NumberField
from weilheight.mypy_util import add_slots

TokenKind = Literal["number", "generator", "operator", "end"]

# powers whose coefficients would need more bits than this are rejected
MAX_POWER_BITS = 1 << 16

_TOKEN = re.compile(r"\s*(?:(\d+)|(t|theta|θ)\b|(\*\*|[-+*/^()]))")


@add_slots
@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    position = 0
    while position < len(text):
        if text[position:].strip() == "":
            break
        match = _TOKEN.match(text, position)
        if match is None:
            raise ParserException(f"unexpected character at {position} in {text!r}")
        number, generator, operator = match.groups()
        start = match.start(match.lastindex or 0)
        if number is not None:
            tokens.append(Token("number", number, start))
        elif generator is not None:
            tokens.append(Token("generator", generator, start))
        else:
            tokens.append(Token("operator", operator, start))
        position = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    """
    Recursive descent over

        expression := term (("+" | "-") term)*
        term       := unary (("*" | "/")? unary)*
        unary      := ("+" | "-") unary | power
        power      := primary (("^" | "**") "-"? number)?
        primary    := number | generator | "(" expression ")"

    where juxtaposition multiplies.
    """

    def __init__(self, field: NumberField, text: str):
        self.field = field
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def _fail(self, expected: str) -> ParserException:
        token = self.current
        found = token.text or "end of input"
        return ParserException(
            f"expected {expected} at {token.position} in {self.text!r}, found {found}"
        )

    def _accept(self, *operators: str) -> bool:
        return self.current.kind == "operator" and self.current.text in operators

    def parse(self) -> FieldElement:
        result = self._expression()
        if self.current.kind != "end":
            raise self._fail("an operator")
        return result

    def _expression(self) -> FieldElement:
        result = self._term()
        while self._accept("+", "-"):
            if self._advance().text == "+":
                result = result + self._term()
            else:
                result = result - self._term()
        return result

    def _starts_primary(self) -> bool:
        return self.current.kind in ("number", "generator") or self._accept("(")

    def _term(self) -> FieldElement:
        result = self._unary()
        while self._accept("*", "/") or self._starts_primary():
            if self._accept("/"):
                self._advance()
                result = result / self._unary()
            else:
                if self._accept("*"):
                    self._advance()
                result = result * self._unary()
        return result

    def _unary(self) -> FieldElement:
        if self._accept("-"):
            self._advance()
            return -self._unary()
        if self._accept("+"):
            self._advance()
            return self._unary()
        return self._power()

    def _power(self) -> FieldElement:
        base = self._primary()
        if not self._accept("^", "**"):
            return base
        self._advance()
        sign = 1
        if self._accept("-"):
            self._advance()
            sign = -1
        if self.current.kind != "number":
            raise self._fail("an integer exponent")
        token = self._advance()
        n = int(token.text)
        if n * _size_bits(base) > MAX_POWER_BITS:
            raise ParserException(
                f"the power at {token.position} in {self.text!r} is too large"
            )
        return base ** (sign * n)

    def _primary(self) -> FieldElement:
        token = self.current
        if token.kind == "number":
            self._advance()
            return self.field.from_rational(int(token.text))
        if token.kind == "generator":
            self._advance()
            return self.field.generator
        if self._accept("("):
            self._advance()
            result = self._expression()
            if not self._accept(")"):
                raise self._fail('")"')
            self._advance()
            return result
        raise self._fail("a number, t or (")


def _size_bits(a: FieldElement) -> int:
    sizes = (c.numerator.bit_length() + c.denominator.bit_length() for c in a.coords)
    return 1 + max(sizes, default=0)


def parse_element(field: NumberField, text: str) -> FieldElement:
    """
    Parse a rational expression in the generator t of field.

    Raises:
        ParserException: the text is not a well-formed expression, or raises an element
            to a power whose coefficients would exceed MAX_POWER_BITS
        DivisionByZero: the expression divides by 0
    """
    return _Parser(field, text).parse()
