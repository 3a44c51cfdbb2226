from fractions import Fraction

import pytest

from qgenocchi.algebra import QLaurent, QRatFn, SLaurent
from qgenocchi.exceptions import (CoefficientRingMismatch, DegreeExceedsTable, NegativeOffset,
                                  NonUnitLeadingCoefficient)
from qgenocchi.fib import FibFamily
from qgenocchi.functional import (GradedBasis, LinearFunctional, apply, functional_from_graded_basis, make_L,
                                  make_Lq, make_M, make_Mq, make_V)
from qgenocchi.grammar import parse, parse_polynomial
from qgenocchi.tables import bernoulli


def test_L_monomial_values():
    L = make_L(6)
    assert L.values == (1, -1, 2, -8, 56, -608, 9440)
    assert L.provenance == 'graded_basis'


def test_L_vanishes_on_the_odd_basis():
    L, family = make_L(10), FibFamily('classical')
    assert L(family[1]) == 1
    for n in range(1, 6):
        assert L(family[2 * n + 1]) == 0


def test_M_values():
    M, family = make_M(8), FibFamily('classical')
    assert M.values[:3] == (1, Fraction(-1, 2), Fraction(1, 3))
    assert M(family[3]) == Fraction(1, 2)
    for n in range(1, 5):
        assert M(family[2 * n + 2]) == 0


def test_Lq_values():
    Lq = make_Lq(4)
    assert Lq.value_ring == 'Q[q,q^-1]'
    assert Lq.values[:3] == (1, -1, QLaurent({0: 1, 1: 1}))
    assert Lq.values[3] == parse('-1-2*q-2*q^2-2*q^3-q^4')
    assert Lq.values[3].evaluate_at_q1() == make_L(3).values[3]


def test_Mq_values():
    Mq, family = make_Mq(6), FibFamily('q')
    assert Mq.value_ring == 'Q(q)'
    assert Mq(family[3]) == parse('q/(1+q)')
    assert Mq(SLaurent.monomial(1, 1)) == QRatFn(-1, QLaurent({0: 1, 1: 1}))
    for n in range(1, 4):
        assert Mq(family[2 * n + 2]) == 0


def test_V_values():
    V = make_V(bernoulli(6))
    x = SLaurent.monomial(1, 1, 'x')
    assert V(x) == Fraction(1, 2)
    assert V(x ** 2) == Fraction(1, 6)
    assert V(SLaurent.constant(1, 'x') - x) == Fraction(1, 2)


def test_apply_accepts_constants():
    assert apply(make_L(2), 3) == 3
    assert make_Mq(2)(0) == 0


def test_degree_exceeds_table():
    L = make_L(3)
    with pytest.raises(DegreeExceedsTable):
        L(SLaurent.monomial(1, 4))
    with pytest.raises(DegreeExceedsTable):
        L.value(4)


def test_negative_offset():
    with pytest.raises(NegativeOffset):
        make_L(3)(FibFamily('classical')[-1])
    with pytest.raises(NegativeOffset):
        GradedBasis([SLaurent.monomial(1, -1)], [1])


def test_graded_basis_validation():
    with pytest.raises(ValueError):
        GradedBasis([SLaurent.constant(1), SLaurent.monomial(1, 2)], [1, 0])
    with pytest.raises(ValueError):
        GradedBasis([SLaurent.constant(1)], [1, 0])
    with pytest.raises(ValueError):
        LinearFunctional([1], 'Z')


def test_non_unit_leading_coefficient():
    family = FibFamily('q')
    basis = GradedBasis([family[2 * k + 2] for k in range(3)], [1, 0, 0], 'Q[q,q^-1]')
    with pytest.raises(NonUnitLeadingCoefficient):
        functional_from_graded_basis(basis)
    with pytest.raises(NonUnitLeadingCoefficient):
        functional_from_graded_basis(GradedBasis([SLaurent.constant(QLaurent.q())], [1], 'Q'))


def test_functional_on_a_custom_basis():
    s = SLaurent.monomial(1, 1)
    basis = GradedBasis([SLaurent.constant(1), 2 * s + 1, s ** 2 - s], [3, 5, 0])
    phi = functional_from_graded_basis(basis, 'phi')
    assert phi.values == (3, 1, 1)
    assert phi(2 * s + 1) == 5
    assert repr(phi) == "LinearFunctional(name='phi', value_ring='Q', table_size=2)"


def test_rational_functionals_reject_q_coefficients():
    p = parse_polynomial('q*s')
    for functional in (make_L(3), make_M(3)):
        with pytest.raises(CoefficientRingMismatch, match='q-valued functional'):
            functional(p)
    assert make_L(3)(parse_polynomial('(q/q)*s')) == -1
    assert make_Lq(3)(p) == QLaurent.q(1, -1)
