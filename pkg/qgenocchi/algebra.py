"""Exact coefficient rings used by qgenocchi.

The module provides the arithmetic every other part of the package is written on top of:

* :class:`QLaurent`: Laurent polynomials in ``q`` with rational coefficients.
* :class:`QRatFn`: rational functions in ``q`` kept in reduced form.
* :class:`SLaurent`: polynomials in ``s`` (or ``x``) allowing a single ``s^-1`` term, with coefficients
  in the rationals or in :class:`QLaurent`.
* :class:`TruncSeries`: power series in ``z`` truncated at a fixed order.

Rationals are plain :class:`fractions.Fraction` objects; integral values are stored as ``int``.
"""
import operator
from fractions import Fraction
from functools import lru_cache, reduce
from math import factorial
from typing import Callable, Iterable, Optional, Union

from sympy import QQ
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import ring

from qgenocchi.exceptions import (DenominatorVanishes, NegativeOffset, NonInvertibleConstantTerm,
                                  NonUnitDivision)

Rational = Fraction


def _is_scalar(value) -> bool:
    return isinstance(value, (int, Fraction))


def _scalar(value):
    """Normalizes a rational so that integral values are stored as ``int``."""
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    return value


def _ratio(a, b):
    """Exact quotient of two rationals."""
    if b == 0:
        raise ZeroDivisionError('division of a rational by zero')
    return _scalar(Fraction(a) / Fraction(b))


class QLaurent:
    """Laurent polynomial in ``q`` with rational coefficients.

    Instances are immutable. The canonical form is a mapping ``exponent -> coefficient`` holding only
    nonzero coefficients, so equality is structural.

    Parameters
    ----------
    terms: dict, int, Fraction or QLaurent, optional
        Either a mapping from integer exponents to rational coefficients or a rational constant.

    Examples
    --------
    >>> p = QLaurent({0: 1, 1: 1})
    >>> str(p * p)
    '1+2*q+q^2'
    """
    __slots__ = ('_terms',)

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif isinstance(terms, QLaurent):
            terms = terms._terms
        elif _is_scalar(terms):
            terms = {0: terms}
        self._terms = {int(e): _scalar(Fraction(c)) for e, c in dict(terms).items() if c != 0}

    @classmethod
    def _wrap(cls, terms: dict) -> 'QLaurent':
        obj = object.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def q(cls, exponent: int = 1, coefficient=1) -> 'QLaurent':
        """Returns the monomial ``coefficient * q^exponent``."""
        if coefficient == 0:
            return cls._wrap({})
        return cls._wrap({int(exponent): _scalar(Fraction(coefficient))})

    @classmethod
    def zero(cls) -> 'QLaurent':
        return cls._wrap({})

    @classmethod
    def one(cls) -> 'QLaurent':
        return cls._wrap({0: 1})

    @classmethod
    def coerce(cls, value) -> 'QLaurent':
        """Converts rationals, Laurent polynomials and Laurent-valued rational functions into a
        :class:`QLaurent`."""
        if isinstance(value, QLaurent):
            return value
        if _is_scalar(value):
            return cls.q(0, value)
        if isinstance(value, QRatFn):
            return value.to_laurent()
        raise TypeError(f'cannot convert {type(value).__name__} to QLaurent')

    def terms(self) -> list:
        """Returns the nonzero ``(exponent, coefficient)`` pairs in increasing exponent order."""
        return sorted(self._terms.items())

    def coefficient(self, exponent: int):
        return self._terms.get(exponent, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def min_exponent(self) -> int:
        if not self._terms:
            raise ValueError('the zero polynomial has no exponent')
        return min(self._terms)

    def max_exponent(self) -> int:
        if not self._terms:
            raise ValueError('the zero polynomial has no exponent')
        return max(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {0}

    def constant_value(self):
        """Returns the value of a constant polynomial as a rational."""
        if not self.is_constant():
            raise ValueError(f'{self} is not a constant')
        return self._terms.get(0, 0)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_unit(self) -> bool:
        """Units of the Laurent ring over Q are the nonzero monomials."""
        return len(self._terms) == 1

    def inverse(self) -> 'QLaurent':
        if not self.is_unit():
            raise NonUnitDivision(f'{self} is not a unit of Q[q,q^-1]')
        (e, c), = self._terms.items()
        return QLaurent._wrap({-e: _ratio(1, c)})

    def has_nonnegative_integer_coefficients(self) -> bool:
        return all(isinstance(c, int) and c >= 0 for c in self._terms.values())

    def shift(self, exponent: int) -> 'QLaurent':
        """Multiplies by ``q^exponent``."""
        return QLaurent._wrap({e + exponent: c for e, c in self._terms.items()})

    def substitute_q_inverse(self) -> 'QLaurent':
        return QLaurent._wrap({-e: c for e, c in self._terms.items()})

    def evaluate(self, value):
        """Evaluates at a rational value of ``q``."""
        value = Fraction(value)
        if value == 0 and any(e < 0 for e in self._terms):
            raise DenominatorVanishes(f'{self} has a pole at q=0')
        return _scalar(sum((c * value ** e for e, c in self._terms.items()), Fraction(0)))

    def evaluate_at_q1(self):
        return _scalar(sum(self._terms.values(), Fraction(0)))

    def __neg__(self):
        return QLaurent._wrap({e: -c for e, c in self._terms.items()})

    def __pos__(self):
        return self

    def __add__(self, other):
        if _is_scalar(other):
            other = QLaurent.q(0, other)
        elif not isinstance(other, QLaurent):
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            value = out.get(e, 0) + c
            if value == 0:
                out.pop(e, None)
            else:
                out[e] = _scalar(value)
        return QLaurent._wrap(out)

    __radd__ = __add__

    def __sub__(self, other):
        if not (_is_scalar(other) or isinstance(other, QLaurent)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            if other == 0:
                return QLaurent.zero()
            return QLaurent._wrap({e: _scalar(c * other) for e, c in self._terms.items()})
        if not isinstance(other, QLaurent):
            return NotImplemented
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return QLaurent._wrap({e: _scalar(c) for e, c in out.items() if c != 0})

    __rmul__ = __mul__

    def __truediv__(self, other):
        """Divides by a rational or a Laurent polynomial.

        Division by a unit stays in the Laurent ring; division by any other nonzero polynomial returns
        a :class:`QRatFn`.
        """
        if _is_scalar(other):
            if other == 0:
                raise ZeroDivisionError('division by zero')
            return self * _ratio(1, other)
        if not isinstance(other, QLaurent):
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError('division by the zero polynomial')
        if other.is_unit():
            return self * other.inverse()
        return QRatFn(self, other)

    def __rtruediv__(self, other):
        if not _is_scalar(other):
            return NotImplemented
        return QLaurent.q(0, other) / self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            if self.is_unit():
                return self.inverse() ** (-exponent)
            return QRatFn(1, self ** (-exponent))
        result, base = QLaurent.one(), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, QLaurent):
            return self._terms == other._terms
        if _is_scalar(other):
            return self.is_constant() and self._terms.get(0, 0) == other
        return NotImplemented

    def __hash__(self):
        if self.is_constant():
            return hash(self._terms.get(0, 0))
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        return f'QLaurent({str(self)!r})'

    def __str__(self):
        if not self._terms:
            return '0'
        text = ''
        for i, (e, c) in enumerate(self.terms()):
            magnitude = abs(c)
            if e == 0:
                body = str(magnitude)
            else:
                var = 'q' if e == 1 else f'q^{e}'
                body = var if magnitude == 1 else f'{magnitude}*{var}'
            if c < 0:
                text += '-' + body
            else:
                text += ('+' if i else '') + body
        return text


# Reductions in Q[q] go through sympy's sparse polynomial ring.
_QQ_Q, _ = ring('q', QQ)


def _to_poly(p: QLaurent):
    if p.is_zero():
        return _QQ_Q.zero
    if p.min_exponent() < 0:
        raise ValueError(f'{p} carries negative powers of q')
    terms = {}
    for e, c in p.terms():
        c = Fraction(c)
        terms[(e,)] = QQ(c.numerator, c.denominator)
    return _QQ_Q.from_dict(terms)


def _from_poly(f) -> QLaurent:
    return QLaurent._wrap({monom[0]: _scalar(Fraction(int(c.numerator), int(c.denominator)))
                           for monom, c in f.terms() if c})


def _exact_quotient(p: QLaurent, d: QLaurent) -> QLaurent:
    try:
        return _from_poly(_to_poly(p).exquo(_to_poly(d)))
    except ExactQuotientFailed:
        raise NonUnitDivision(f'{d} does not divide {p}') from None


class QRatFn:
    """Rational function in ``q`` over the rationals.

    The canonical form is a pair of polynomials in ``q`` without common factor and with a monic
    denominator, obtained by cancelling the gcd in ``Q[q]``. Laurent polynomials embed with a monomial
    denominator, so ``QRatFn(QLaurent.q(-2)) == QLaurent.q(-2)``.

    Parameters
    ----------
    numerator: int, Fraction, QLaurent or QRatFn
    denominator: int, Fraction, QLaurent or QRatFn, default 1

    Raises
    ------
    ZeroDivisionError
        If the denominator is zero.
    """
    __slots__ = ('_num', '_den')

    def __init__(self, numerator, denominator=1):
        if isinstance(numerator, QRatFn) or isinstance(denominator, QRatFn):
            n, d = QRatFn._split(numerator), QRatFn._split(denominator)
            num, den = n[0] * d[1], n[1] * d[0]
        else:
            num, den = QLaurent.coerce(numerator), QLaurent.coerce(denominator)
        if den.is_zero():
            raise ZeroDivisionError('rational function with zero denominator')
        if num.is_zero():
            self._num, self._den = QLaurent.zero(), QLaurent.one()
            return
        shift = max(0, -num.min_exponent(), -den.min_exponent())
        num, den = num.shift(shift), den.shift(shift)
        _, num_poly, den_poly = _to_poly(num).cofactors(_to_poly(den))
        num, den = _from_poly(num_poly), _from_poly(den_poly)
        lead = den.coefficient(den.max_exponent())
        if lead != 1:
            num, den = num * _ratio(1, lead), den * _ratio(1, lead)
        self._num, self._den = num, den

    @staticmethod
    def _split(value) -> tuple:
        if isinstance(value, QRatFn):
            return value._num, value._den
        return QLaurent.coerce(value), QLaurent.one()

    @classmethod
    def coerce(cls, value) -> 'QRatFn':
        return value if isinstance(value, QRatFn) else cls(value)

    @property
    def numerator(self) -> QLaurent:
        return self._num

    @property
    def denominator(self) -> QLaurent:
        return self._den

    def is_zero(self) -> bool:
        return self._num.is_zero()

    def __bool__(self):
        return not self._num.is_zero()

    def is_laurent(self) -> bool:
        return self._den.is_monomial()

    def to_laurent(self) -> QLaurent:
        """Returns the value as a Laurent polynomial when the denominator is a power of ``q``."""
        if not self._den.is_monomial():
            raise NonUnitDivision(f'{self} is not a Laurent polynomial')
        return self._num.shift(-self._den.max_exponent())

    def evaluate(self, value):
        den = self._den.evaluate(value)
        if den == 0:
            raise DenominatorVanishes(f'the denominator of {self} vanishes at q={value}')
        return _ratio(self._num.evaluate(value), den)

    def evaluate_at_q1(self):
        return self.evaluate(1)

    def substitute_q_inverse(self) -> 'QRatFn':
        return QRatFn(self._num.substitute_q_inverse(), self._den.substitute_q_inverse())

    @classmethod
    def sum(cls, items: Iterable) -> 'QRatFn':
        """Adds many values over a common denominator, reducing once at the end."""
        pairs = [cls._split(item) for item in items]
        pairs = [(n, d) for n, d in pairs if not n.is_zero()]
        if not pairs:
            return cls(0)
        common = pairs[0][1]
        for _, d in pairs[1:]:
            if d != common:
                common = _from_poly(_to_poly(common).lcm(_to_poly(d)))
        total = QLaurent.zero()
        for n, d in pairs:
            total = total + n * _exact_quotient(common, d)
        return cls(total, common)

    def _binary(self, other):
        if isinstance(other, QRatFn):
            return other
        if _is_scalar(other) or isinstance(other, QLaurent):
            return QRatFn(other)
        return None

    def __add__(self, other):
        other = self._binary(other)
        if other is None:
            return NotImplemented
        return QRatFn.sum([self, other])

    __radd__ = __add__

    def __neg__(self):
        result = object.__new__(QRatFn)
        result._num, result._den = -self._num, self._den
        return result

    def __sub__(self, other):
        other = self._binary(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._binary(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._binary(other)
        if other is None:
            return NotImplemented
        return QRatFn(self._num * other._num, self._den * other._den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._binary(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError('division by the zero rational function')
        return QRatFn(self._num * other._den, self._den * other._num)

    def __rtruediv__(self, other):
        other = self._binary(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return QRatFn(self._den ** (-exponent), self._num ** (-exponent))
        return QRatFn(self._num ** exponent, self._den ** exponent)

    def __eq__(self, other):
        other = self._binary(other)
        if other is None:
            return NotImplemented
        return self._num == other._num and self._den == other._den

    def __hash__(self):
        if self._den.is_monomial():
            return hash(self.to_laurent())
        return hash((self._num, self._den))

    def __repr__(self):
        return f'QRatFn({str(self)!r})'

    def __str__(self):
        if self._den == 1:
            return str(self._num)
        num, den = str(self._num), str(self._den)
        if len(self._num.terms()) > 1:
            num = f'({num})'
        if len(self._den.terms()) > 1 or self._den.coefficient(self._den.max_exponent()) != 1:
            den = f'({den})'
        return f'{num}/{den}'


def _coefficient_is_zero(c) -> bool:
    return c == 0


class SLaurent:
    """Polynomial in ``s`` extended by an optional ``s^-1`` term.

    The coefficients live either in the rationals or in :class:`QLaurent`; mixing the two lifts the
    rationals. The lowest power present is ``offset`` and is always ``-1`` or ``0``.

    Parameters
    ----------
    coefficients: iterable
        Coefficients of ``s^offset, s^(offset+1), ...``.
    offset: int, default 0
        Exponent of the first coefficient.
    variable: str, default 's'
        Name of the variable used when rendering, ``'s'`` or ``'x'``.

    Raises
    ------
    NegativeOffset
        If a power of ``s`` below ``-1`` carries a nonzero coefficient.
    """
    __slots__ = ('offset', 'coefficients', 'variable')

    def __init__(self, coefficients: Iterable = (), offset: int = 0, variable: str = 's'):
        coefficients = list(coefficients)
        while offset < 0 and coefficients and _coefficient_is_zero(coefficients[0]):
            coefficients.pop(0)
            offset += 1
        if offset > 0:
            coefficients = [0] * offset + coefficients
            offset = 0
        if offset < -1:
            raise NegativeOffset(f'power s^{offset} is not representable')
        while coefficients and _coefficient_is_zero(coefficients[-1]):
            coefficients.pop()
        if not coefficients:
            offset = 0
        if any(isinstance(c, QLaurent) for c in coefficients):
            coefficients = [QLaurent.coerce(c) for c in coefficients]
        else:
            coefficients = [_scalar(Fraction(c)) for c in coefficients]
        self.offset = offset
        self.coefficients = tuple(coefficients)
        self.variable = variable

    @classmethod
    def monomial(cls, coefficient=1, exponent: int = 1, variable: str = 's') -> 'SLaurent':
        """Returns ``coefficient * s^exponent``."""
        if exponent < 0:
            return cls([coefficient], offset=exponent, variable=variable)
        return cls([0] * exponent + [coefficient], variable=variable)

    @classmethod
    def constant(cls, value, variable: str = 's') -> 'SLaurent':
        return cls([value], variable=variable)

    @classmethod
    def lift(cls, value, variable: str = 's') -> 'SLaurent':
        return value if isinstance(value, SLaurent) else cls.constant(value, variable)

    @property
    def degree(self) -> Optional[int]:
        """Highest power of the variable, ``None`` for the zero polynomial."""
        if not self.coefficients:
            return None
        return self.offset + len(self.coefficients) - 1

    @property
    def ring(self) -> str:
        if any(isinstance(c, QLaurent) for c in self.coefficients):
            return 'Q[q,q^-1]'
        return 'Q'

    def coefficient(self, k: int):
        index = k - self.offset
        if 0 <= index < len(self.coefficients):
            return self.coefficients[index]
        return 0

    def leading_coefficient(self):
        return self.coefficients[-1] if self.coefficients else 0

    def items(self):
        """Yields ``(exponent, coefficient)`` for every nonzero coefficient."""
        for i, c in enumerate(self.coefficients):
            if not _coefficient_is_zero(c):
                yield self.offset + i, c

    def is_zero(self) -> bool:
        return not self.coefficients

    def __bool__(self):
        return bool(self.coefficients)

    def is_constant(self) -> bool:
        return self.degree is None or (self.degree == 0 and self.offset == 0)

    def map_coefficients(self, func: Callable) -> 'SLaurent':
        return SLaurent([func(c) for c in self.coefficients], self.offset, self.variable)

    def substitute_q_inverse(self) -> 'SLaurent':
        return self.map_coefficients(lambda c: c.substitute_q_inverse() if isinstance(c, QLaurent) else c)

    def evaluate_at_q1(self) -> 'SLaurent':
        return self.map_coefficients(lambda c: c.evaluate_at_q1() if isinstance(c, QLaurent) else c)

    def shift(self, k: int) -> 'SLaurent':
        """Multiplies by ``s^k``."""
        return SLaurent(self.coefficients, self.offset + k, self.variable)

    def _variable_with(self, other: 'SLaurent') -> str:
        if self.is_constant():
            return other.variable
        if not other.is_constant() and other.variable != self.variable:
            raise ValueError(f'cannot combine polynomials in {self.variable} and {other.variable}')
        return self.variable

    @staticmethod
    def _is_coefficient(value) -> bool:
        return _is_scalar(value) or isinstance(value, QLaurent)

    def __add__(self, other):
        if self._is_coefficient(other):
            other = SLaurent.constant(other, self.variable)
        elif not isinstance(other, SLaurent):
            return NotImplemented
        variable = self._variable_with(other)
        low = min(self.offset, other.offset)
        high = max(self.offset + len(self.coefficients), other.offset + len(other.coefficients))
        values = [self.coefficient(k) + other.coefficient(k) for k in range(low, high)]
        return SLaurent(values, low, variable)

    __radd__ = __add__

    def __neg__(self):
        return self.map_coefficients(operator.neg)

    def __sub__(self, other):
        if not (self._is_coefficient(other) or isinstance(other, SLaurent)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        if not self._is_coefficient(other):
            return NotImplemented
        return (-self) + other

    def __mul__(self, other):
        if self._is_coefficient(other):
            if other == 0:
                return SLaurent(variable=self.variable)
            return self.map_coefficients(lambda c: c * other)
        if not isinstance(other, SLaurent):
            return NotImplemented
        variable = self._variable_with(other)
        if self.is_zero() or other.is_zero():
            return SLaurent(variable=variable)
        values = [0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if _coefficient_is_zero(a):
                continue
            for j, b in enumerate(other.coefficients):
                values[i + j] = values[i + j] + a * b
        return SLaurent(values, self.offset + other.offset, variable)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QLaurent):
            return self * other.inverse()
        if _is_scalar(other):
            return self * _ratio(1, other)
        return NotImplemented

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            terms = list(self.items())
            if len(terms) == 1 and terms[0][0] == 1 and exponent == -1:
                c = terms[0][1]
                inverse = c.inverse() if isinstance(c, QLaurent) else _ratio(1, c)
                return SLaurent.monomial(inverse, -1, self.variable)
            raise NegativeOffset(f'({self})^{exponent} is not representable')
        result = SLaurent.constant(1, self.variable)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        if self._is_coefficient(other):
            return self.is_constant() and self.coefficient(0) == other
        if not isinstance(other, SLaurent):
            return NotImplemented
        if not (self.is_constant() or other.is_constant()) and self.variable != other.variable:
            return False
        return self.offset == other.offset and self.coefficients == other.coefficients

    def __hash__(self):
        if self.is_constant():
            return hash(self.coefficient(0))
        return hash((self.variable, self.offset, self.coefficients))

    def __repr__(self):
        return f'SLaurent({str(self)!r})'

    def __str__(self):
        terms = list(self.items())
        if not terms:
            return '0'
        text = ''
        for i, (k, c) in enumerate(terms):
            negative = False
            if isinstance(c, QLaurent) and not c.is_monomial():
                body_c = f'({c})'
            else:
                if isinstance(c, QLaurent):
                    negative = c.terms()[0][1] < 0
                else:
                    negative = c < 0
                body_c = str(-c if negative else c)
            if k == 0:
                body = body_c
            else:
                var = self.variable if k == 1 else f'{self.variable}^{k}'
                body = var if body_c == '1' else f'{body_c}*{var}'
            if i == 0:
                text = ('-' if negative else '') + body
            else:
                text += (' - ' if negative else ' + ') + body
        return text


def _inverse(value):
    """Inverts a series coefficient, raising if it is not a unit."""
    if _is_scalar(value):
        if value == 0:
            raise NonInvertibleConstantTerm('the constant term is zero')
        return _ratio(1, value)
    if isinstance(value, QLaurent):
        if not value.is_unit():
            raise NonInvertibleConstantTerm(f'the constant term {value} is not a unit')
        return value.inverse()
    if isinstance(value, QRatFn):
        if value.is_zero():
            raise NonInvertibleConstantTerm('the constant term is zero')
        return QRatFn(1) / value
    if isinstance(value, SLaurent) and value.is_constant() and not value.is_zero():
        return _inverse(value.coefficient(0))
    raise NonInvertibleConstantTerm(f'the constant term {value} is not invertible')


class TruncSeries:
    """Power series in ``z`` truncated after ``z^order``.

    Coefficients may be rationals, :class:`QLaurent`, :class:`QRatFn` or :class:`SLaurent` values.
    Operations between series of different orders keep the smaller order.

    Parameters
    ----------
    coefficients: iterable
        Coefficients of ``z^0, z^1, ...``. Missing coefficients up to ``order`` are zero.
    order: int, optional
        Truncation order. Defaults to the number of coefficients minus one.
    """
    __slots__ = ('order', 'coefficients')

    def __init__(self, coefficients: Iterable, order: Optional[int] = None):
        coefficients = list(coefficients)
        if order is None:
            order = len(coefficients) - 1
        if order < 0:
            raise ValueError('the truncation order must be nonnegative')
        coefficients = coefficients[:order + 1]
        coefficients += [0] * (order + 1 - len(coefficients))
        self.order = order
        self.coefficients = tuple(_scalar(c) if isinstance(c, Fraction) else c for c in coefficients)

    @classmethod
    def zero(cls, order: int) -> 'TruncSeries':
        return cls([], order)

    @classmethod
    def one(cls, order: int) -> 'TruncSeries':
        return cls([1], order)

    @classmethod
    def monomial(cls, coefficient, power: int, order: int) -> 'TruncSeries':
        """Returns ``coefficient * z^power``."""
        return cls([0] * power + [coefficient], order)

    @classmethod
    def exp(cls, order: int, scale=1) -> 'TruncSeries':
        """Returns ``e^(scale*z)``."""
        return cls([Fraction(scale) ** k / factorial(k) for k in range(order + 1)], order)

    @classmethod
    def geometric(cls, ratio, order: int) -> 'TruncSeries':
        """Returns ``1/(1 - ratio*z)``."""
        values, power = [], 1
        for _ in range(order + 1):
            values.append(power)
            power = power * ratio
        return cls(values, order)

    @classmethod
    def egf(cls, values: Iterable, order: int) -> 'TruncSeries':
        """Returns the exponential generating function ``sum values[n] z^n / n!``."""
        return cls([v * Fraction(1, factorial(n)) for n, v in zip(range(order + 1), values)], order)

    def __getitem__(self, k: int):
        if 0 <= k <= self.order:
            return self.coefficients[k]
        raise IndexError(f'coefficient z^{k} beyond order {self.order}')

    def truncate(self, order: int) -> 'TruncSeries':
        return TruncSeries(self.coefficients, min(order, self.order))

    def map_coefficients(self, func: Callable) -> 'TruncSeries':
        return TruncSeries([func(c) for c in self.coefficients], self.order)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)

    def _lift(self, other):
        if isinstance(other, TruncSeries):
            return other
        return TruncSeries([other], self.order)

    def __add__(self, other):
        other = self._lift(other)
        order = min(self.order, other.order)
        return TruncSeries([self[k] + other[k] for k in range(order + 1)], order)

    __radd__ = __add__

    def __neg__(self):
        return self.map_coefficients(operator.neg)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, TruncSeries):
            return self.map_coefficients(lambda c: c * other)
        order = min(self.order, other.order)
        values = []
        for k in range(order + 1):
            products = [self[i] * other[k - i] for i in range(k + 1) if self[i] != 0 and other[k - i] != 0]
            values.append(reduce(operator.add, products) if products else 0)
        return TruncSeries(values, order)

    def __rmul__(self, other):
        return self.map_coefficients(lambda c: other * c)

    def __truediv__(self, other):
        if not isinstance(other, TruncSeries):
            inverse = _inverse(other)
            return self.map_coefficients(lambda c: c * inverse)
        order = min(self.order, other.order)
        inverse = _inverse(other[0])
        values = []
        for k in range(order + 1):
            acc = self[k]
            for j in range(k):
                if values[j] != 0 and other[k - j] != 0:
                    acc = acc - values[j] * other[k - j]
            values.append(acc * inverse)
        return TruncSeries(values, order)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = TruncSeries.one(self.order)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, TruncSeries):
            order = min(self.order, other.order)
            return all(self[k] == other[k] for k in range(order + 1))
        if other == 0:
            return self.is_zero()
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f'TruncSeries({str(self)!r}, order={self.order})'

    def __str__(self):
        parts = []
        for k, c in enumerate(self.coefficients):
            if c == 0:
                continue
            body = f'({c})'
            parts.append(body if k == 0 else f'{body}*z' if k == 1 else f'{body}*z^{k}')
        return ' + '.join(parts) + f' + O(z^{self.order + 1})' if parts else f'O(z^{self.order + 1})'


@lru_cache(maxsize=None)
def gaussian_binomial(n: int, k: int) -> QLaurent:
    """Gaussian binomial coefficient ``[n, k]`` in ``q``.

    Nonnegative ``n`` uses the q-Pascal rule ``[n, k] = [n-1, k-1] + q^k [n-1, k]``. A negative upper
    index follows ``[-r, k] = (-1)^k q^(-kr - k(k-1)/2) [r+k-1, k]``. The value is zero for ``k < 0``
    and for ``k > n >= 0``.
    """
    if k < 0:
        return QLaurent.zero()
    if n < 0:
        r = -n
        factor = QLaurent.q(-k * r - k * (k - 1) // 2, -1 if k % 2 else 1)
        return factor * gaussian_binomial(r + k - 1, k)
    if k > n:
        return QLaurent.zero()
    if k == 0 or k == n:
        return QLaurent.one()
    return gaussian_binomial(n - 1, k - 1) + gaussian_binomial(n - 1, k).shift(k)


def q_integer(n: int) -> QLaurent:
    """q-integer ``[n] = (1 - q^n)/(1 - q)``."""
    return gaussian_binomial(n, 1)


def substitute_q_inverse(value):
    """Replaces ``q`` by ``1/q`` in any ring element."""
    if _is_scalar(value):
        return value
    return value.substitute_q_inverse()


def evaluate_at_q1(value):
    """Specializes ``q = 1``.

    Raises
    ------
    DenominatorVanishes
        If a rational function has ``q = 1`` as a pole.
    """
    if _is_scalar(value):
        return value
    return value.evaluate_at_q1()


def series_arith(a: TruncSeries, b: TruncSeries, op: str) -> TruncSeries:
    """Applies ``op`` (one of ``'+'``, ``'-'``, ``'*'``, ``'/'``) to two truncated series."""
    operations = {'+': operator.add, '-': operator.sub, '*': operator.mul, '/': operator.truediv}
    if op not in operations:
        raise ValueError(f'unknown series operation {op!r}')
    return operations[op](a, b)


Coefficient = Union[int, Fraction, QLaurent, QRatFn]
