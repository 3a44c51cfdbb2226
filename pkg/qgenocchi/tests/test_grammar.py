from fractions import Fraction

import pytest

from qgenocchi.algebra import QLaurent, QRatFn, SLaurent
from qgenocchi.exceptions import ParseError
from qgenocchi.fib import FibFamily
from qgenocchi.grammar import parse, parse_polynomial, render


@pytest.mark.parametrize('text', ['0', '-3', '5/7', '1+q+q^2', '-q^-2+1/2*q^3', 'q/(1+q)',
                                  '-q^4/(1+2*q+2*q^2+q^3)', '1 + 3*s + s^2', '1 + (1+q)*s + q^2*s^2',
                                  '1/2 - x + x^2'])
def test_canonical_text_is_stable(text):
    assert render(parse(text)) == text


def test_rendered_values_parse_back():
    values = [Fraction(-7, 3), QLaurent({-1: 2, 4: -1}), QRatFn(QLaurent.q(2), QLaurent({0: 1, 1: 1, 2: 1})),
              FibFamily('q')[7], FibFamily('q-inverse')[6], FibFamily('classical')[-1]]
    for value in values:
        assert parse(render(value)) == value


def test_parse_returns_the_smallest_ring():
    assert parse('4/2') == 2
    assert isinstance(parse('4/2'), int)
    assert isinstance(parse('(1-q^2)/(1-q)'), QLaurent)
    assert isinstance(parse('1/(1-q)'), QRatFn)
    assert isinstance(parse('2*s'), SLaurent)


def test_implicit_multiplication():
    assert parse('2q') == QLaurent.q(1, 2)
    assert parse('(1+q)(1-q)') == QLaurent({0: 1, 2: -1})


def test_parse_polynomial():
    assert parse_polynomial('s^2') == SLaurent.monomial(1, 2)
    assert parse_polynomial('3') == SLaurent.constant(3)
    assert parse_polynomial('x^3 - x', 'x').variable == 'x'
    assert parse_polynomial('s/q') == SLaurent.monomial(QLaurent.q(-1), 1)


@pytest.mark.parametrize('text', ['', '   ', 'y + 1', 's + x', '1/(1+s)', '1 +', '(1+q', 'q^q', '2 $ 3',
                                  '1/0'])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse(text)


def test_parse_polynomial_errors():
    with pytest.raises(ParseError):
        parse_polynomial('x^2', 's')
    with pytest.raises(ParseError):
        parse_polynomial('1/(1+q)')
    with pytest.raises(ParseError):
        parse_polynomial('s/(1+q)')
