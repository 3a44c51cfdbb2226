"""Canonical text form of ring elements.

Every exported value is rendered with :func:`render` and read back with :func:`parse`. The grammar is::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/')? unary)*      implicit multiplication before '(' or a variable
    unary  := '-' unary | power
    power  := atom ('^' '-'? integer)?
    atom   := integer | 'q' | 's' | 'x' | '(' expr ')'

Laurent polynomials in ``q`` render compactly without spaces and in increasing powers, for example
``1+q+q^2`` or ``-q^-2+1/2*q^3``. Polynomials in ``s`` or ``x`` put spaces around the outer signs and
parenthesize coefficients with more than one term, ``1 + (1+q)*s``. Rational functions render as
``numerator/denominator`` with parentheses around sums, ``q/(1+q)``.
"""
import re
from fractions import Fraction

from qgenocchi.algebra import QLaurent, QRatFn, SLaurent
from qgenocchi.exceptions import NegativeOffset, NonUnitDivision, ParseError

_TOKEN = re.compile(r'\s*(?:(\d+)|([A-Za-z])|(\S))')
VARIABLES = ('q', 's', 'x')


def render(value) -> str:
    """Renders a rational or a ring element in canonical form."""
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else str(value)
    return str(value)


def _tokenize(text: str) -> list:
    tokens, position = [], 0
    text = text.rstrip()
    while position < len(text):
        match = _TOKEN.match(text, position)
        if match is None:
            break
        number, name, symbol = match.groups()
        if number is not None:
            tokens.append(('int', int(number)))
        elif name is not None:
            if name not in VARIABLES:
                raise ParseError(f'unknown name {name!r} at position {match.start(2)}')
            tokens.append(('name', name))
        elif symbol in '+-*/^()':
            tokens.append(('op', symbol))
        else:
            raise ParseError(f'unexpected character {symbol!r} at position {match.start(3)}')
        position = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.position = 0
        self.variable = None

    def peek(self):
        return self.tokens[self.position] if self.position < len(self.tokens) else (None, None)

    def take(self):
        token = self.peek()
        self.position += 1
        return token

    def expect(self, symbol: str):
        kind, value = self.take()
        if (kind, value) != ('op', symbol):
            raise ParseError(f'expected {symbol!r}, found {value!r}')

    def parse(self):
        if not self.tokens:
            raise ParseError('empty expression')
        value = self.expr()
        if self.position != len(self.tokens):
            raise ParseError(f'unexpected token {self.peek()[1]!r}')
        return value

    def expr(self):
        value = self.term()
        while self.peek() in (('op', '+'), ('op', '-')):
            _, symbol = self.take()
            other = self.term()
            value = value + other if symbol == '+' else value - other
        return value

    def term(self):
        value = self.unary()
        while True:
            kind, symbol = self.peek()
            if (kind, symbol) == ('op', '*'):
                self.take()
                value = value * self.unary()
            elif (kind, symbol) == ('op', '/'):
                self.take()
                value = _divide(value, self.unary())
            elif kind == 'name' or (kind, symbol) == ('op', '('):
                value = value * self.unary()
            else:
                return value

    def unary(self):
        if self.peek() == ('op', '-'):
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() != ('op', '^'):
            return base
        self.take()
        negative = False
        if self.peek() == ('op', '-'):
            self.take()
            negative = True
        kind, exponent = self.take()
        if kind != 'int':
            raise ParseError('exponents must be integers')
        exponent = -exponent if negative else exponent
        try:
            return base ** exponent
        except (NegativeOffset, NonUnitDivision, ZeroDivisionError) as error:
            raise ParseError(str(error)) from error

    def atom(self):
        kind, value = self.take()
        if kind == 'int':
            return Fraction(value)
        if kind == 'name':
            if value == 'q':
                return QLaurent.q()
            if self.variable is not None and self.variable != value:
                raise ParseError(f'mixed polynomial variables {self.variable!r} and {value!r}')
            self.variable = value
            return SLaurent.monomial(1, 1, value)
        if (kind, value) == ('op', '('):
            inner = self.expr()
            self.expect(')')
            return inner
        raise ParseError(f'unexpected token {value!r}')


def _divide(a, b):
    if isinstance(b, SLaurent):
        if not b.is_constant():
            raise ParseError('division by a polynomial in s')
        b = b.coefficient(0)
    if b == 0:
        raise ParseError('division by zero')
    if isinstance(a, SLaurent):
        if isinstance(b, QRatFn) and b.is_laurent():
            b = b.to_laurent()
        if isinstance(b, QLaurent) and not b.is_unit():
            raise ParseError(f'coefficients of s must stay Laurent polynomials, cannot divide by {b}')
        if isinstance(b, QRatFn):
            raise ParseError(f'coefficients of s must stay Laurent polynomials, cannot divide by {b}')
    return a / b


def _normalize(value):
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, QRatFn) and value.denominator == 1:
        return value.numerator
    return value


def parse(text: str):
    """Parses the canonical text form back into a ring element.

    Returns a rational, a :class:`~qgenocchi.algebra.QLaurent`, a :class:`~qgenocchi.algebra.QRatFn`
    or a :class:`~qgenocchi.algebra.SLaurent` depending on the variables and divisions present.

    Raises
    ------
    ParseError
        If the text does not follow the grammar.
    """
    return _normalize(_Parser(text).parse())


def parse_polynomial(text: str, variable: str = 's') -> SLaurent:
    """Parses a polynomial in ``s`` (or ``x``); constants are lifted to degree zero polynomials."""
    value = parse(text)
    if isinstance(value, QRatFn):
        if not value.is_laurent():
            raise ParseError(f'{text!r} is not a polynomial')
        value = value.to_laurent()
    if isinstance(value, SLaurent):
        if not value.is_constant() and value.variable != variable:
            raise ParseError(f'{text!r} is not a polynomial in {variable}')
        return SLaurent(value.coefficients, value.offset, variable)
    return SLaurent.constant(value, variable)
