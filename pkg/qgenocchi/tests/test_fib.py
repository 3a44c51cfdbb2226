from concurrent.futures import ThreadPoolExecutor

import pytest

from qgenocchi.algebra import QLaurent, SLaurent
from qgenocchi.exceptions import IndexOutOfRange
from qgenocchi.fib import FibFamily, fib_poly, q_fib_poly, q_fib_poly_inv


def test_classical_values():
    assert fib_poly(-1) == SLaurent.monomial(1, -1)
    assert fib_poly(0) == 0
    assert fib_poly(1) == 1
    assert str(fib_poly(5)) == '1 + 3*s + s^2'
    assert str(fib_poly(8)) == '1 + 6*s + 10*s^2 + 4*s^3'


def test_q_values():
    assert q_fib_poly(-1) == SLaurent.monomial(QLaurent.q(2), -1)
    assert q_fib_poly(2) == 1
    assert str(q_fib_poly(4)) == '1 + (1+q)*s'
    assert str(q_fib_poly(5)) == '1 + (1+q+q^2)*s + q^2*s^2'
    assert q_fib_poly_inv(5) == q_fib_poly(5).substitute_q_inverse()


@pytest.mark.parametrize('kind', FibFamily.KINDS)
def test_recursion_and_closed_form_agree(kind):
    family = FibFamily(kind)
    for n in range(1, 16):
        assert family.recursion_residual(n) == 0
        assert family.closed_form(n) == family.poly(n)
    assert family.closed_form(0) == 0


@pytest.mark.parametrize('kind', FibFamily.KINDS)
def test_specialization_at_q1_is_classical(kind):
    family = FibFamily(kind)
    for n in range(-1, 12):
        assert family.specialize_q1(n) == fib_poly(n)


def test_inverse_family_is_the_substituted_q_family():
    q, inverse = FibFamily('q'), FibFamily('q-inverse')
    for n in range(-1, 14):
        assert inverse[n] == q[n].substitute_q_inverse()


def test_degrees():
    family = FibFamily('q')
    for n in range(1, 14):
        assert family[n].degree == (n - 1) // 2


def test_index_out_of_range():
    with pytest.raises(IndexOutOfRange):
        fib_poly(-2)
    with pytest.raises(IndexOutOfRange):
        FibFamily('q').closed_form(-1)
    with pytest.raises(ValueError):
        FibFamily('p')


def test_cache_is_shared_between_threads():
    family = FibFamily('q')
    with ThreadPoolExecutor(max_workers=4) as executor:
        results = list(executor.map(family.poly, [20, 5, 20, 13, 1, 20]))
    assert len(family.polys) == 22
    assert results[0] == results[2] == family[20]
    assert results[1] == FibFamily('q')[5]


def test_shared_families_are_read_only():
    from qgenocchi.fib import _FAMILIES
    with pytest.raises(TypeError):
        _FAMILIES['q'] = FibFamily('q')
    with ThreadPoolExecutor(max_workers=4) as executor:
        results = list(executor.map(q_fib_poly, [12, 7, 12, 3]))
    assert results[0] == results[2] == _FAMILIES['q'][12]
    assert q_fib_poly(7) is _FAMILIES['q'][7]
