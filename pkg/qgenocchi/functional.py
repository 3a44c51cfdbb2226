"""Linear functionals on polynomials in ``s`` defined through graded bases.

A functional is stored as its table of monomial values :math:`\\Phi(s^k)` for ``k = 0..N``. It is usually
compiled from a graded basis :math:`b_0, b_1, \\dots, b_N` with :math:`\\deg b_k = k` and prescribed
values :math:`\\Phi(b_k)` by forward substitution, dividing by the leading coefficient of each
:math:`b_k`.
"""
import operator
from fractions import Fraction
from functools import reduce
from typing import Optional, Sequence

from qgenocchi.algebra import QLaurent, QRatFn, SLaurent
from qgenocchi.exceptions import (CoefficientRingMismatch, DegreeExceedsTable, NegativeOffset,
                                  NonUnitLeadingCoefficient)
from qgenocchi.fib import FibFamily

VALUE_RINGS = ('Q', 'Q[q,q^-1]', 'Q(q)')


def _lift(value, ring: str):
    """Converts ``value`` into the representation used by ``ring``."""
    if ring == 'Q':
        if isinstance(value, QRatFn):
            if not value.is_laurent():
                raise CoefficientRingMismatch(f'{value} is not a rational number')
            value = value.to_laurent()
        if isinstance(value, QLaurent):
            if not value.is_constant():
                raise CoefficientRingMismatch(f'{value} is not a rational number')
            value = value.constant_value()
        value = Fraction(value)
        return value.numerator if value.denominator == 1 else value
    if ring == 'Q[q,q^-1]':
        return QLaurent.coerce(value)
    return QRatFn.coerce(value)


def _divide(value, lead, ring: str, index: int):
    if lead == 0:
        raise NonUnitLeadingCoefficient(f'basis polynomial {index} has a vanishing leading coefficient')
    if ring == 'Q':
        lead = _lift(lead, 'Q') if not isinstance(lead, QLaurent) or lead.is_constant() else lead
        if isinstance(lead, QLaurent):
            raise NonUnitLeadingCoefficient(f'leading coefficient {lead} of basis polynomial {index} '
                                            f'is not rational')
        return _lift(Fraction(value) / lead, ring)
    if ring == 'Q[q,q^-1]':
        lead = QLaurent.coerce(lead)
        if not lead.is_unit():
            raise NonUnitLeadingCoefficient(f'leading coefficient {lead} of basis polynomial {index} '
                                            f'is not a unit of Q[q,q^-1]; use the Q(q) value ring')
        return value * lead.inverse()
    return QRatFn.coerce(value) / QRatFn.coerce(lead)


def _sum(values: list, ring: str):
    if not values:
        return _lift(0, ring)
    if ring == 'Q(q)':
        return QRatFn.sum(values)
    return _lift(reduce(operator.add, values), ring)


class GradedBasis:
    """Graded basis of polynomials in ``s`` together with the values a functional takes on it.

    Parameters
    ----------
    polynomials: sequence of SLaurent
        Basis polynomials; ``polynomials[k]`` must have degree exactly ``k``.
    values: sequence
        Prescribed functional values on each basis polynomial.
    value_ring: str, default 'Q'
        Ring the values live in, one of ``'Q'``, ``'Q[q,q^-1]'`` or ``'Q(q)'``.
    """

    def __init__(self, polynomials: Sequence[SLaurent], values: Sequence, value_ring: str = 'Q'):
        if value_ring not in VALUE_RINGS:
            raise ValueError(f'unknown value ring {value_ring!r}, expected one of {VALUE_RINGS}')
        if len(polynomials) != len(values):
            raise ValueError('a graded basis needs exactly one value per polynomial')
        for k, b in enumerate(polynomials):
            if b.offset < 0:
                raise NegativeOffset(f'basis polynomial {k} carries a negative power of s')
            if b.degree != k:
                raise ValueError(f'basis polynomial {k} has degree {b.degree}, expected {k}')
        self.polynomials = tuple(polynomials)
        self.values = tuple(values)
        self.value_ring = value_ring

    def __len__(self):
        return len(self.polynomials)


class LinearFunctional:
    """Linear functional on polynomials in ``s`` given by its values on monomials.

    Parameters
    ----------
    values: sequence
        Monomial values :math:`\\Phi(s^0), \\dots, \\Phi(s^N)`.
    value_ring: str, default 'Q'
        One of ``'Q'``, ``'Q[q,q^-1]'`` or ``'Q(q)'``.
    name: str, optional
        Name used in messages, for example ``'Lq'``.
    provenance: str, default 'monomials'
        ``'monomials'`` or ``'graded_basis'``.

    Attributes
    ----------
    values: tuple
        Monomial table.
    table_size: int
        Largest degree the functional can be applied to.

    Examples
    --------
    >>> L = make_L(3)
    >>> L.values
    (1, -1, 2, -8)
    """

    def __init__(self, values: Sequence, value_ring: str = 'Q', name: Optional[str] = None,
                 provenance: str = 'monomials'):
        if value_ring not in VALUE_RINGS:
            raise ValueError(f'unknown value ring {value_ring!r}, expected one of {VALUE_RINGS}')
        self.value_ring = value_ring
        self.values = tuple(_lift(v, value_ring) for v in values)
        self.name = name or 'functional'
        self.provenance = provenance

    @property
    def table_size(self) -> int:
        return len(self.values) - 1

    def __repr__(self):
        return f'LinearFunctional(name={self.name!r}, value_ring={self.value_ring!r}, ' \
               f'table_size={self.table_size})'

    @classmethod
    def from_graded_basis(cls, basis: GradedBasis, name: Optional[str] = None) -> 'LinearFunctional':
        """Compiles the monomial table of the functional taking ``basis.values`` on ``basis``.

        Raises
        ------
        NonUnitLeadingCoefficient
            If a leading coefficient cannot be inverted in the value ring.
        """
        ring = basis.value_ring
        values = []
        for k, (b, v) in enumerate(zip(basis.polynomials, basis.values)):
            known = [c * values[j] for j, c in b.items() if j < k]
            acc = _lift(v, ring) - _sum(known, ring)
            values.append(_divide(acc, b.coefficient(k), ring, k))
        functional = cls(values, ring, name, provenance='graded_basis')
        return functional

    def value(self, k: int):
        """Returns :math:`\\Phi(s^k)`."""
        if k > self.table_size:
            raise DegreeExceedsTable(f'{self.name} is tabulated up to degree {self.table_size}, '
                                     f's^{k} requested')
        return self.values[k]

    def apply(self, p):
        """Applies the functional to a polynomial or a constant.

        Raises
        ------
        NegativeOffset
            If ``p`` carries a nonzero ``s^-1`` term.
        DegreeExceedsTable
            If the degree of ``p`` is larger than :attr:`table_size`.
        CoefficientRingMismatch
            If a rational-valued functional meets a coefficient depending on ``q``.
        """
        if not isinstance(p, SLaurent):
            p = SLaurent.constant(p)
        if p.offset < 0:
            raise NegativeOffset(f'{self.name} is only defined on polynomials, got {p}')
        if p.degree is not None and p.degree > self.table_size:
            raise DegreeExceedsTable(f'{self.name} is tabulated up to degree {self.table_size}, '
                                     f'polynomial of degree {p.degree} given; increase the table size')
        try:
            return _sum([c * self.values[k] for k, c in p.items()], self.value_ring)
        except CoefficientRingMismatch as error:
            raise CoefficientRingMismatch(f'{self.name} takes rational values and cannot be applied to {p}: '
                                          f'{error}; use a q-valued functional') from None

    __call__ = apply


def functional_from_graded_basis(basis: GradedBasis, name: Optional[str] = None) -> LinearFunctional:
    """Compiles a functional from its graded basis, see :meth:`LinearFunctional.from_graded_basis`."""
    return LinearFunctional.from_graded_basis(basis, name)


def apply(functional: LinearFunctional, p):
    """Applies ``functional`` to ``p``."""
    return functional.apply(p)


def _basis(kind: str, start: int, size: int, ring: str) -> GradedBasis:
    family = FibFamily(kind)
    polynomials = [family.poly(2 * k + start) for k in range(size + 1)]
    values = [1] + [0] * size
    return GradedBasis(polynomials, values, ring)


def make_L(size: int = 12) -> LinearFunctional:
    """Functional with :math:`L(F_{2n+1}(s)) = [n = 0]`, tabulated up to ``s^size``."""
    return functional_from_graded_basis(_basis('classical', 1, size, 'Q'), 'L')


def make_M(size: int = 12) -> LinearFunctional:
    """Functional with :math:`M(F_{2n+2}(s)) = [n = 0]`, tabulated up to ``s^size``."""
    return functional_from_graded_basis(_basis('classical', 2, size, 'Q'), 'M')


def make_V(bernoulli: Sequence) -> LinearFunctional:
    """Functional on polynomials in ``x`` with :math:`V(x^n) = B_n` except :math:`V(x) = 1/2`.

    Parameters
    ----------
    bernoulli: sequence of Fraction
        Bernoulli numbers :math:`B_0, B_1, \\dots`; the table size is ``len(bernoulli) - 1``.
    """
    values = list(bernoulli)
    if len(values) > 1:
        values[1] = Fraction(1, 2)
    return LinearFunctional(values, 'Q', 'V')


def make_Lq(size: int = 12) -> LinearFunctional:
    """q-functional with :math:`L(F_{2n+1}(s, 1/q)) = [n = 0]`, values in :math:`\\mathbb{Q}[q, q^{-1}]`.

    The leading coefficient of :math:`F_{2n+1}(s, 1/q)` is the monomial :math:`q^{-n(n-1)}`, so the
    table stays Laurent.
    """
    return functional_from_graded_basis(_basis('q-inverse', 1, size, 'Q[q,q^-1]'), 'Lq')


def make_Mq(size: int = 12) -> LinearFunctional:
    """q-functional with :math:`M(F_{2n+2}(s, q)) = [n = 0]`.

    The leading coefficient of :math:`F_{2n+2}(s, q)` is :math:`q^{n(n-1)}[n+1]`, which is not a unit in
    the Laurent ring, hence values are rational functions of ``q``.
    """
    return functional_from_graded_basis(_basis('q', 2, size, 'Q(q)'), 'Mq')


FACTORIES = {'L': make_L, 'M': make_M, 'Lq': make_Lq, 'Mq': make_Mq}
