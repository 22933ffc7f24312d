"""
Recursive-descent parser for command-line polynomials

Grammar::

    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INTEGER)?
    atom   := INTEGER | "u" INTEGER? | "I" | "(" expr ")"

``u1 .. um`` are the variables (plain ``u`` is allowed when m = 1), ``I``
is the imaginary unit, and division is only by constants.
"""

from typing import Optional

from symprod.polyalg.polynomial import Polynomial
from symprod.polyalg.scalar import EXACT, GaussianRational, ScalarContext
from symprod.utils.errors import ParseError


class PolynomialParser:
    """Parses one polynomial string in a fixed number of variables"""

    def __init__(self, text: str, num_vars: int, context: ScalarContext = EXACT):
        self.text = text
        self.num_vars = num_vars
        self.context = context
        self.pos = 0

    def parse(self) -> Polynomial:
        self._skip_ws()
        if self.pos >= len(self.text):
            raise ParseError("Empty polynomial", self.text, self.pos)
        result = self._expr()
        self._skip_ws()
        if self.pos < len(self.text):
            raise ParseError(
                f"Unexpected character {self.text[self.pos]!r}", self.text, self.pos
            )
        return result

    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> Optional[str]:
        self._skip_ws()
        if self.pos < len(self.text):
            return self.text[self.pos]
        return None

    def _expr(self) -> Polynomial:
        result = self._term()
        while True:
            op = self._peek()
            if op == "+":
                self.pos += 1
                result = result + self._term()
            elif op == "-":
                self.pos += 1
                result = result - self._term()
            else:
                return result

    def _term(self) -> Polynomial:
        result = self._unary()
        while True:
            op = self._peek()
            if op == "*":
                self.pos += 1
                result = result * self._unary()
            elif op == "/":
                start = self.pos
                self.pos += 1
                divisor = self._unary()
                if not divisor.is_constant() or divisor.is_zero():
                    raise ParseError(
                        "Division is only allowed by a nonzero constant",
                        self.text,
                        start,
                    )
                inverse = self.context.one / divisor.coefficient((0,) * self.num_vars)
                result = result * inverse
            else:
                return result

    def _unary(self) -> Polynomial:
        op = self._peek()
        if op == "-":
            self.pos += 1
            return -self._unary()
        if op == "+":
            self.pos += 1
            return self._unary()
        return self._power()

    def _power(self) -> Polynomial:
        base = self._atom()
        if self._peek() == "^":
            self.pos += 1
            self._skip_ws()
            start = self.pos
            exponent = self._integer()
            if exponent is None:
                raise ParseError("Expected integer exponent", self.text, start)
            return base**exponent
        return base

    def _integer(self) -> Optional[int]:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            return None
        return int(self.text[start : self.pos])

    def _atom(self) -> Polynomial:
        ch = self._peek()
        start = self.pos
        if ch is None:
            raise ParseError("Unexpected end of input", self.text, self.pos)
        if ch.isdigit():
            value = self._integer()
            return Polynomial.constant(self.num_vars, value, self.context)
        if ch == "u":
            self.pos += 1
            index = self._integer()
            if index is None:
                if self.num_vars != 1:
                    raise ParseError(
                        "Bare 'u' is only allowed with one variable", self.text, start
                    )
                index = 1
            if not 1 <= index <= self.num_vars:
                raise ParseError(
                    f"Variable u{index} out of range 1..{self.num_vars}",
                    self.text,
                    start,
                )
            return Polynomial.variable(self.num_vars, index - 1, self.context)
        if ch == "I":
            self.pos += 1
            return Polynomial.constant(
                self.num_vars, self.context.coerce(GaussianRational(0, 1)), self.context
            )
        if ch == "(":
            self.pos += 1
            inner = self._expr()
            if self._peek() != ")":
                raise ParseError("Expected ')'", self.text, self.pos)
            self.pos += 1
            return inner
        raise ParseError(f"Unexpected character {ch!r}", self.text, start)


def parse_polynomial(text: str, num_vars: int, context: ScalarContext = EXACT) -> Polynomial:
    """Parse ``text`` as a polynomial in u1..u{num_vars}"""
    return PolynomialParser(text, num_vars, context).parse()
