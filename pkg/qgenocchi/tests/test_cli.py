import json
import os

import pytest

from qgenocchi.cli import main
from qgenocchi.fib import fib_poly, q_fib_poly
from qgenocchi.grammar import parse_polynomial

DATA = os.path.join(os.path.dirname(__file__), 'data')
OUTPUT = os.path.join(os.path.dirname(__file__), 'output')


def run(capsys, *argv):
    status = main(list(argv))
    captured = capsys.readouterr()
    return status, captured.out, captured.err


def test_gen_genocchi(capsys):
    status, out, _ = run(capsys, 'gen', 'genocchi', '--n', '8')
    assert status == 0
    assert out == '1 1 3 17 155 2073 38227 929569\n'


def test_gen_q_triangle(capsys):
    status, out, _ = run(capsys, 'gen', 'triangle', '--rows', '5', '--q')
    assert status == 0
    assert out.splitlines() == ['1', '1', '1, 1', '1+q, q', '1+q, 1+q+q^2, 1+q+q^2']


def test_gen_a_matrix(capsys):
    status, out, _ = run(capsys, 'gen', 'a-matrix', '--n', '5')
    assert status == 0
    with open(os.path.join(DATA, 'a_matrix.txt')) as f:
        assert out == f.read()


@pytest.mark.parametrize('argv, golden', [
    (['gen', 'triangle', '--rows', '8'], 'seidel_triangle.txt'),
    (['gen', 'triangle', '--rows', '6', '--q'], 'q_seidel_triangle.txt'),
])
def test_gen_triangle_goldens(capsys, argv, golden):
    status, out, _ = run(capsys, *argv)
    assert status == 0
    with open(os.path.join(DATA, golden)) as f:
        assert out == f.read()


def test_gen_fib_minus_one(capsys):
    assert run(capsys, 'gen', 'fib', '--n', '-1') == (0, str(fib_poly(-1)) + '\n', '')
    assert run(capsys, 'gen', 'fib', '--n', '-1', '--q')[1] == str(q_fib_poly(-1)) + '\n'


def test_gen_fib(capsys):
    assert run(capsys, 'gen', 'fib', '--n', '5')[1] == '1 + 3*s + s^2\n'
    assert run(capsys, 'gen', 'fib', '--n', '5', '--q')[1] == '1 + (1+q+q^2)*s + q^2*s^2\n'
    status, out, _ = run(capsys, 'gen', 'fib', '--n', '5', '--q', '--inv-q')
    assert status == 0
    assert parse_polynomial(out) == parse_polynomial('1 + (1+q+q^2)*s + q^2*s^2').substitute_q_inverse()


def test_gen_fib_json(capsys):
    status, out, _ = run(capsys, 'gen', 'fib', '--n', '4', '--q', '--format', 'json')
    data = json.loads(out)
    assert data['coefficient_ring'] == 'Z[q,q^-1]'
    assert data['coefficients'] == {'0': '1', '1': '1+q'}


def test_gen_formats(capsys):
    data = json.loads(run(capsys, 'gen', 'median', '--n', '3', '--format', 'json')[1])
    assert data['values'] == {'1': '1', '3': '1', '5': '2', '7': '8'}
    assert run(capsys, 'gen', 'bernoulli', '--n', '2', '--format', 'csv')[1] == 'index,value\n0,1\n1,-1/2\n2,1/6\n'
    assert run(capsys, 'gen', 'genocchi', '--n', '2', '--q', '--format', 'latex')[1].startswith('\\begin{tabular}')


def test_gen_m_values(capsys):
    status, out, _ = run(capsys, 'gen', 'm-values', '--n', '2', '--q', '--format', 'json')
    assert status == 0
    assert json.loads(out)['values'] == {'1': '1', '3': 'q/(1+q)'}


def test_gen_output_file(capsys):
    os.makedirs(OUTPUT, exist_ok=True)
    path = os.path.join(OUTPUT, 'genocchi.txt')
    status, out, _ = run(capsys, 'gen', 'genocchi', '--n', '8', '--output', path)
    assert status == 0
    assert out == ''
    with open(path) as f, open(os.path.join(DATA, 'genocchi.txt')) as golden:
        assert f.read() == golden.read()


@pytest.mark.parametrize('argv', [
    ['gen', 'fib', '--n', '3', '--inv-q'],
    ['gen', 'genocchi', '--inv-q', '--q'],
    ['gen', 'bernoulli', '--q'],
    ['gen', 'genocchi', '--n', '500'],
    ['gen', 'genocchi', '--n', '61', '--q'],
    ['gen', 'triangle', '--rows', '0'],
    ['gen', 'unknown'],
    ['verify', '--id', 'NOPE'],
    ['verify', '--id', 'I1_9', '--n', '0'],
    ['verify', '--all', '--n', '2'],
    ['functional', '--name', 'L', '--poly', 's^20'],
    ['functional', '--name', 'L', '--poly', '1/(1+s)'],
    ['functional', '--name', 'L', '--poly', 'x'],
    ['functional', '--name', 'L', '--poly', 'q*s'],
    ['functional', '--name', 'V', '--poly', '(1+q)*x'],
    ['gen', 'fib', '--n', '-2'],
])
def test_usage_errors(capsys, argv):
    status, out, err = run(capsys, *argv)
    assert status == 2
    assert out == ''
    assert 'error' in err


def test_functional(capsys):
    assert run(capsys, 'functional', '--name', 'L', '--poly', 's^2')[1] == '2\n'
    assert run(capsys, 'functional', '--name', 'M', '--poly', '1 + s')[1] == '1/2\n'
    assert run(capsys, 'functional', '--name', 'V', '--poly', 'x^1')[1] == '1/2\n'
    assert run(capsys, 'functional', '--name', 'Lq', '--poly', 's^2')[1] == '1+q\n'
    assert run(capsys, 'functional', '--name', 'Mq', '--poly-fib', '3')[1] == 'q/(1+q)\n'
    assert run(capsys, 'functional', '--name', 'L', '--poly-fib', '6')[1] == '3\n'


def test_functional_table_size(capsys):
    status, _, err = run(capsys, 'functional', '--name', 'L', '--poly', 's^13')
    assert status == 2
    assert '--table-size' in err
    assert run(capsys, 'functional', '--name', 'L', '--poly', 's^13', '--table-size', '13')[0] == 0


def test_verify_single_identity(capsys):
    status, out, _ = run(capsys, 'verify', '--id', 'I2_4', '--max-n', '30')
    assert status == 0
    data = json.loads(out)
    assert data['totals'] == {'pass': 31, 'fail': 0, 'anomaly': 0}
    assert [case['params']['n'] for case in data['cases']] == list(range(31))


def test_verify_single_parameters(capsys):
    status, out, _ = run(capsys, 'verify', '--id', 'I4_17', '--n', '3', '--format', 'text')
    assert status == 0
    assert out.startswith('suite: single\nI4_17     n=3          ok')
    assert 'totals: pass=1 fail=0 anomaly=0' in out


def test_functional_output_file(capsys):
    os.makedirs(OUTPUT, exist_ok=True)
    path = os.path.join(OUTPUT, 'lq.txt')
    status, out, _ = run(capsys, 'functional', '--name', 'Lq', '--poly', 's', '--output', path)
    assert status == 0
    assert out == ''
    with open(path) as f:
        assert f.read() == '-1\n'
