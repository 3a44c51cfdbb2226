import json
import os
from fractions import Fraction

import dill
import pytest

from qgenocchi.algebra import QLaurent
from qgenocchi.exceptions import SeedTooShort
from qgenocchi.functional import make_L, make_Lq, make_M
from qgenocchi.grammar import parse
from qgenocchi.tables import (IndexedMatrix, NumberTable, SeidelTriangle, a_matrix, bernoulli, display_discrepancies,
                              egf_coefficients, functional_seed, genocchi, genocchi_from_bernoulli,
                              genocchi_from_egf, latex_inline, median_genocchi, q_genocchi,
                              q_genocchi_via_seidel_identity, q_median_genocchi, q_seidel_matrix,
                              q_seidel_triangle, q_seidel_triangle_via_functional, reference_tables,
                              seidel_triangle, seidel_triangle_via_functional)

DATA = os.path.join(os.path.dirname(__file__), 'data')
OUTPUT = os.path.join(os.path.dirname(__file__), 'output')


def read_golden(name):
    with open(os.path.join(DATA, name)) as f:
        return f.read()


def test_genocchi_numbers():
    assert list(genocchi(8)) == [1, 1, 3, 17, 155, 2073, 38227, 929569]
    assert genocchi(8).to_text() == read_golden('genocchi.txt')
    assert list(genocchi(8)) == reference_tables()['genocchi']


def test_genocchi_oracles_agree():
    assert list(genocchi_from_egf(10)) == list(genocchi(10))
    assert list(genocchi_from_bernoulli(10)) == list(genocchi(10))


def test_genocchi_labels():
    G = genocchi(4)
    assert G.labels == [2, 4, 6, 8]
    assert G[8] == 17
    with pytest.raises(KeyError):
        G[3]


def test_bernoulli_numbers():
    B = bernoulli(10)
    assert list(B)[:5] == [1, Fraction(-1, 2), Fraction(1, 6), 0, Fraction(-1, 30)]
    assert B[10] == Fraction(5, 66)
    published = reference_tables()['bernoulli_odd_multiples']
    assert [(2 * n + 1) * B[2 * n] for n in range(5)] == published
    with pytest.raises(ValueError):
        bernoulli(-1)


def test_median_genocchi_numbers():
    assert list(median_genocchi(6)) == [1, 1, 2, 8, 56, 608, 9440]
    assert median_genocchi(2).labels == [1, 3, 5]


def test_seidel_triangle():
    t = seidel_triangle(8)
    assert t.to_text() == read_golden('seidel_triangle.txt')
    assert [list(row) for row in t.rows] == reference_tables()['seidel_triangle']
    assert t[5, 4] == 0
    assert t[20, 1] == 0
    with pytest.raises(ValueError):
        seidel_triangle(0)


def test_seidel_triangle_from_L():
    assert seidel_triangle_via_functional(9, make_L(6)) == seidel_triangle(9)


def test_q_seidel_triangle():
    t = q_seidel_triangle(6)
    assert t.to_text() == read_golden('q_seidel_triangle.txt')
    assert t.coefficient_ring == 'Z[q,q^-1]'
    assert t.evaluate_at_q1() == seidel_triangle(6)
    assert t.evaluate_at_q1().kind == 'seidel_triangle'


def test_q_seidel_triangle_from_Lq():
    assert q_seidel_triangle_via_functional(9, make_Lq(6)) == q_seidel_triangle(9)


def test_published_q_triangle_differs_in_row_six():
    messages = display_discrepancies(q_seidel_triangle(6), 'q_seidel_triangle')
    assert len(messages) == 2
    assert messages[0] == ('q_seidel_triangle entry (6, 1): displayed 1+2*q+q^2, '
                           'computed 1+2*q+2*q^2+2*q^3+q^4')
    assert all('entry (6,' in message for message in messages)
    assert display_discrepancies(seidel_triangle(8), 'seidel_triangle') == []


def test_q_genocchi_numbers():
    G = q_genocchi(4)
    assert G[4] == 1
    assert G[6] == QLaurent({0: 1, 1: 1, 2: 1})
    assert list(q_genocchi_via_seidel_identity(6)) == list(q_genocchi(6))
    assert [g.evaluate_at_q1() for g in q_genocchi(6)] == list(genocchi(6))


def test_q_median_genocchi_numbers():
    H = q_median_genocchi(4)
    assert H.labels == [1, 3, 5, 7]
    assert H[1] == QLaurent.q(-1)
    assert H[5] == QLaurent({1: 1, 2: 1})
    assert [h.evaluate_at_q1() for h in H] == list(median_genocchi(3))


def test_egf_coefficients():
    assert list(egf_coefficients(8)) == [0, 1, -1, 0, 1, 0, -3, 0, 17]


def test_a_matrix():
    A = a_matrix(5)
    assert A.to_text() == read_golden('a_matrix.txt')
    assert [list(row) for row in A.rows] == reference_tables()['a_matrix']
    assert A.coefficient_ring == 'Z'
    assert A[5, 1] == -255


def test_number_table():
    table = NumberTable(8)
    assert table.violations() == []
    df = table.to_frame()
    assert list(df.columns) == ['G_2n', 'H_2n+1', 'B_2n', 'g_2n']
    assert df.loc[4, 'G_2n'] == '17'
    assert df.loc[1, 'B_2n'] == '1/6'


def test_seidel_matrix_closed_form():
    Lq = make_Lq(8)
    seed = functional_seed(Lq, 10)
    matrix = q_seidel_matrix(seed, 4)
    for k in range(5):
        for n in range(10 - k):
            assert matrix[n, k] == matrix.closed_form(n, k)
    classical = q_seidel_matrix(functional_seed(make_M(8), 10, 'classical'), 3, q_analogue=False)
    assert classical[2, 3] == classical.closed_form(2, 3)
    assert (0, 10) not in matrix
    with pytest.raises(SeedTooShort):
        q_seidel_matrix(seed, 10)
    with pytest.raises(KeyError):
        matrix[9, 1]


def test_exports():
    t = seidel_triangle(3)
    data = json.loads(t.to_json())
    assert data == {'kind': 'seidel_triangle', 'coefficient_ring': 'Z',
                    'rows': {'1': {'1': '1'}, '2': {'1': '1'}, '3': {'1': '1', '2': '1'}}}
    assert t.to_csv() == 'i,1,2\n1,1,\n2,1,\n3,1,1\n'
    assert t.to_latex().splitlines()[0] == '\\begin{tabular}{cc}'
    assert genocchi(3).to_csv() == 'index,value\n2,1\n4,1\n6,3\n'
    assert latex_inline('1+2*q^-1') == '$1+2q^{-1}$'
    assert json.loads(q_genocchi(3).to_json())['values']['6'] == '1+q+q^2'
    assert parse(json.loads(q_seidel_triangle(5).to_json())['rows']['5']['2']) == QLaurent({0: 1, 1: 1, 2: 1})


def test_with_entry():
    t = seidel_triangle(5)
    perturbed = t.with_entry(5, 2, 4)
    assert perturbed[5, 2] == 4
    assert t[5, 2] == 3
    assert isinstance(perturbed, SeidelTriangle)
    with pytest.raises(IndexError):
        t.with_entry(5, 4, 1)


@pytest.mark.order(1)
def test_pickle_q_triangle():
    os.makedirs(OUTPUT, exist_ok=True)
    q_seidel_triangle(9).to_pickle(os.path.join(OUTPUT, 'q_seidel_triangle.pkl'))
    assert os.path.exists(os.path.join(OUTPUT, 'q_seidel_triangle.pkl'))


@pytest.mark.order(after='test_pickle_q_triangle')
def test_read_pickled_q_triangle():
    table = SeidelTriangle.read_pickle(os.path.join(OUTPUT, 'q_seidel_triangle.pkl'))
    assert table == q_seidel_triangle(9)
    with open(os.path.join(OUTPUT, 'fib.pkl'), 'wb') as f:
        dill.dump(genocchi(3), f)
    with pytest.raises(TypeError):
        IndexedMatrix.read_pickle(os.path.join(OUTPUT, 'fib.pkl'))
