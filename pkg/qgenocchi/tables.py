"""Number sequences, Seidel triangles and Seidel matrices.

The classical objects (Genocchi, Bernoulli and median Genocchi numbers, the Seidel triangle) and
their q-analogues are generated here, each with at least one independent oracle so that the
verification suite can compare two constructions of the same table.
"""
import json
import re
import warnings
from fractions import Fraction
from importlib import resources
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Iterable, Optional, Sequence

import dill
import pandas as pd

from qgenocchi._utils import sign
from qgenocchi.algebra import QLaurent, SLaurent, TruncSeries, gaussian_binomial
from qgenocchi.exceptions import SeedTooShort
from qgenocchi.fib import FibFamily
from qgenocchi.functional import LinearFunctional
from qgenocchi.grammar import parse, render


def latex_inline(text: str) -> str:
    text = re.sub(r'\^(-?\d+)', r'^{\1}', text.replace('*', ''))
    return f'${text}$'


class IndexedMatrix:
    """Ragged table of exact values addressed by explicit row and column labels.

    Entries outside the stored rows read as zero, so formulas may run over the full index range of a
    sum without bound checks.

    Parameters
    ----------
    rows: iterable of iterables
        Stored entries, row by row.
    kind: str, default 'matrix'
        Name written in exports.
    coefficient_ring: str, default 'Z'
        Ring label written in exports, for example ``'Z'`` or ``'Z[q,q^-1]'``.
    row_start: int, default 1
        Label of the first row.
    col_start: int, default 1
        Label of the first column.
    """

    def __init__(self, rows: Iterable[Iterable], kind: str = 'matrix', coefficient_ring: str = 'Z',
                 row_start: int = 1, col_start: int = 1):
        self.rows = tuple(tuple(row) for row in rows)
        self.kind = kind
        self.coefficient_ring = coefficient_ring
        self.row_start = row_start
        self.col_start = col_start

    @property
    def zero(self):
        return QLaurent.zero() if self.coefficient_ring.startswith('Z[q') else 0

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    @property
    def row_labels(self) -> range:
        return range(self.row_start, self.row_start + len(self.rows))

    def row(self, i: int) -> tuple:
        index = i - self.row_start
        if 0 <= index < len(self.rows):
            return self.rows[index]
        return ()

    def __getitem__(self, index: tuple):
        i, j = index
        row = self.row(i)
        position = j - self.col_start
        if 0 <= position < len(row):
            return row[position]
        return self.zero

    def __eq__(self, other):
        if not isinstance(other, IndexedMatrix):
            return NotImplemented
        return (self.rows, self.row_start, self.col_start) == (other.rows, other.row_start, other.col_start)

    def __repr__(self):
        return f'{type(self).__name__}(kind={self.kind!r}, rows={self.num_rows})'

    def map(self, func: Callable, coefficient_ring: Optional[str] = None) -> 'IndexedMatrix':
        """Applies ``func`` entrywise and returns a table of the same class."""
        table = object.__new__(type(self))
        table.__dict__.update(self.__dict__)
        table.rows = tuple(tuple(func(v) for v in row) for row in self.rows)
        table.coefficient_ring = coefficient_ring or self.coefficient_ring
        return table

    def with_entry(self, i: int, j: int, value) -> 'IndexedMatrix':
        """Returns a copy with entry ``(i, j)`` replaced, used to build perturbed tables."""
        rows = [list(row) for row in self.rows]
        row = rows[i - self.row_start]
        position = j - self.col_start
        if not 0 <= position < len(row):
            raise IndexError(f'entry ({i}, {j}) is outside the stored {self.kind}')
        row[position] = value
        table = self.map(lambda v: v)
        table.rows = tuple(tuple(r) for r in rows)
        return table

    def to_text(self) -> str:
        return ''.join(', '.join(render(v) for v in row) + '\n' for row in self.rows)

    def to_dict(self) -> dict:
        return {'kind': self.kind,
                'coefficient_ring': self.coefficient_ring,
                'rows': {str(i): {str(self.col_start + j): render(v) for j, v in enumerate(row)}
                         for i, row in zip(self.row_labels, self.rows)}}

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent) + '\n'

    def to_frame(self) -> pd.DataFrame:
        """Returns the table as a pandas DataFrame of rendered entries, empty strings outside rows."""
        width = max((len(row) for row in self.rows), default=0)
        data = [[render(v) for v in row] + [''] * (width - len(row)) for row in self.rows]
        columns = [str(self.col_start + j) for j in range(width)]
        return pd.DataFrame(data, index=pd.Index(list(self.row_labels), name='i'), columns=columns)

    def to_csv(self, path: Optional[str] = None) -> Optional[str]:
        return self.to_frame().to_csv(path)

    def to_latex(self) -> str:
        width = max((len(row) for row in self.rows), default=0)
        lines = [f'\\begin{{tabular}}{{{"c" * width}}}']
        for row in self.rows:
            cells = [latex_inline(render(v)) for v in row] + [''] * (width - len(row))
            lines.append(' & '.join(cells) + ' \\\\')
        lines.append('\\end{tabular}')
        return '\n'.join(lines) + '\n'

    def to_pickle(self, path: str):
        """Saves the table with dill."""
        with open(path, 'wb') as f:
            dill.dump(self, f)

    @classmethod
    def read_pickle(cls, path: str) -> 'IndexedMatrix':
        """Reads a table saved with :meth:`to_pickle`."""
        with open(path, 'rb') as f:
            table = dill.load(f)
        if not isinstance(table, cls):
            raise TypeError(f'{path} does not hold a {cls.__name__}')
        return table


class SeidelTriangle(IndexedMatrix):
    """Seidel triangle :math:`g_{i,j}` with row ``i`` holding the columns ``1..ceil(i/2)``.

    Examples
    --------
    >>> t = seidel_triangle(5)
    >>> t[5, 2], t[5, 4]
    (3, 0)
    """

    def __init__(self, rows: Iterable[Iterable], coefficient_ring: str = 'Z', kind: str = 'seidel_triangle'):
        super().__init__(rows, kind, coefficient_ring, 1, 1)

    def evaluate_at_q1(self) -> 'SeidelTriangle':
        """Specializes every entry at ``q = 1``."""
        table = self.map(lambda v: v.evaluate_at_q1() if isinstance(v, QLaurent) else v, 'Z')
        table.kind = self.kind.replace('q_', '', 1)
        return table


class IndexedSequence:
    """Finite sequence with explicit labels ``start, start + step, ...``.

    Parameters
    ----------
    values: sequence
        Exact values.
    kind: str
        Name written in exports, for example ``'genocchi'``.
    coefficient_ring: str, default 'Z'
    start: int, default 0
        Label of the first value.
    step: int, default 1
        Difference between consecutive labels.
    """

    def __init__(self, values: Sequence, kind: str, coefficient_ring: str = 'Z', start: int = 0,
                 step: int = 1):
        self.values = tuple(values)
        self.kind = kind
        self.coefficient_ring = coefficient_ring
        self.start = start
        self.step = step

    @property
    def labels(self) -> list:
        return [self.start + self.step * i for i in range(len(self.values))]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, label: int):
        position, remainder = divmod(label - self.start, self.step)
        if remainder or not 0 <= position < len(self.values):
            raise KeyError(f'{self.kind} has no entry labelled {label}')
        return self.values[position]

    def __eq__(self, other):
        if isinstance(other, IndexedSequence):
            return (self.values, self.start, self.step) == (other.values, other.start, other.step)
        return list(self.values) == list(other)

    def to_text(self) -> str:
        return ' '.join(render(v) for v in self.values) + '\n'

    def to_dict(self) -> dict:
        return {'kind': self.kind, 'coefficient_ring': self.coefficient_ring,
                'values': {str(label): render(v) for label, v in zip(self.labels, self.values)}}

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent) + '\n'

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({'index': self.labels, 'value': [render(v) for v in self.values]})

    def to_csv(self, path: Optional[str] = None) -> Optional[str]:
        return self.to_frame().to_csv(path, index=False)

    def to_latex(self) -> str:
        width = len(self.values)
        lines = [f'\\begin{{tabular}}{{{"c" * width}}}',
                 ' & '.join(f'${label}$' for label in self.labels) + ' \\\\',
                 ' & '.join(latex_inline(render(v)) for v in self.values) + ' \\\\',
                 '\\end{tabular}']
        return '\n'.join(lines) + '\n'


def _boustrophedon(rows: int, weight: Callable[[int], object], one) -> list:
    if rows < 1:
        raise ValueError(f'a Seidel triangle needs at least one row, got {rows}')
    table = [[one]]
    for i in range(2, rows + 1):
        previous = table[-1]
        width = (i + 1) // 2
        row = [None] * width
        columns = range(width, 0, -1) if i % 2 == 0 else range(1, width + 1)
        acc = one * 0
        for j in columns:
            if j <= len(previous):
                acc = acc + weight(j) * previous[j - 1]
            row[j - 1] = acc
        table.append(row)
    return table


def seidel_triangle(rows: int) -> SeidelTriangle:
    """Classical Seidel triangle with ``rows`` rows.

    Odd rows accumulate the previous row from left to right, even rows from right to left.
    """
    return SeidelTriangle(_boustrophedon(rows, lambda j: 1, 1))


def q_seidel_triangle(rows: int) -> SeidelTriangle:
    """q-Seidel triangle: each step from the previous row is weighted by :math:`q^{j-1}`."""
    table = _boustrophedon(rows, lambda j: QLaurent.q(j - 1), QLaurent.one())
    return SeidelTriangle(table, 'Z[q,q^-1]', 'q_seidel_triangle')


def seidel_triangle_via_functional(rows: int, L: LinearFunctional) -> SeidelTriangle:
    """Classical Seidel triangle evaluated entrywise from the functional ``L``.

    .. math::

        g_{2n,k} = (-1)^n L(s^{n+1-k} F_{2k-1}), \\qquad g_{2n+1,k} = (-1)^n L(s^{n+1-k} F_{2k})
    """
    family = FibFamily('classical')
    table = []
    for i in range(1, rows + 1):
        n = i // 2
        if i % 2 == 0:
            row = [sign(n) * L(SLaurent.monomial(1, n + 1 - k) * family[2 * k - 1]) for k in range(1, n + 1)]
        else:
            row = [sign(n) * L(SLaurent.monomial(1, n + 1 - k) * family[2 * k]) for k in range(1, n + 2)]
        table.append(row)
    return SeidelTriangle(table, kind='seidel_triangle')


def q_seidel_triangle_via_functional(rows: int, Lq: LinearFunctional) -> SeidelTriangle:
    """q-Seidel triangle evaluated entrywise from the q-functional ``Lq``.

    .. math::

        g_{2n,k}(q) = (-1)^n q^{2\\binom{k-1}{2}} L(s^{n+1-k} F_{2k-1}(s, 1/q)), \\qquad
        g_{2n+1,k}(q) = (-1)^n q^{(k-1)^2} L(s^{n+1-k} F_{2k}(s, 1/q))
    """
    family = FibFamily('q-inverse')
    table = []
    for i in range(1, rows + 1):
        n = i // 2
        if i % 2 == 0:
            row = [QLaurent.q((k - 1) * (k - 2), sign(n)) * Lq(SLaurent.monomial(1, n + 1 - k) * family[2 * k - 1])
                   for k in range(1, n + 1)]
        else:
            row = [QLaurent.q((k - 1) ** 2, sign(n)) * Lq(SLaurent.monomial(1, n + 1 - k) * family[2 * k])
                   for k in range(1, n + 2)]
        table.append(row)
    return SeidelTriangle(table, 'Z[q,q^-1]', 'q_seidel_triangle')


def genocchi(N: int, triangle: Optional[SeidelTriangle] = None) -> IndexedSequence:
    """Genocchi numbers :math:`G_2, G_4, \\dots, G_{2N}` read off the diagonal :math:`g_{2n-1,n}`.

    Examples
    --------
    >>> list(genocchi(8))
    [1, 1, 3, 17, 155, 2073, 38227, 929569]
    """
    if N < 1:
        raise ValueError(f'N must be positive, got {N}')
    triangle = triangle or seidel_triangle(2 * N - 1)
    return IndexedSequence([triangle[2 * n - 1, n] for n in range(1, N + 1)], 'genocchi', 'Z', 2, 2)


def genocchi_from_egf(N: int) -> IndexedSequence:
    """Genocchi numbers from the expansion of :math:`2z/(1+e^z)`."""
    order = 2 * N
    series = TruncSeries.monomial(2, 1, order) / (1 + TruncSeries.exp(order))
    values = [sign(n) * series[2 * n] * factorial(2 * n) for n in range(1, N + 1)]
    return IndexedSequence(values, 'genocchi', 'Z', 2, 2)


def genocchi_from_bernoulli(N: int) -> IndexedSequence:
    """Genocchi numbers from :math:`G_{2n} = (-1)^n 2 (1 - 4^n) B_{2n}`."""
    B = bernoulli(2 * N)
    values = [sign(n) * 2 * (1 - 4 ** n) * B[2 * n] for n in range(1, N + 1)]
    return IndexedSequence(values, 'genocchi', 'Z', 2, 2)


def bernoulli(N: int) -> IndexedSequence:
    """Bernoulli numbers :math:`B_0, \\dots, B_N` from :math:`\\sum_{k \\le n} \\binom{n+1}{k} B_k = 0`."""
    if N < 0:
        raise ValueError(f'N must be nonnegative, got {N}')
    B = [Fraction(1)]
    for n in range(1, N + 1):
        B.append(-sum((comb(n + 1, k) * B[k] for k in range(n)), Fraction(0)) / (n + 1))
    return IndexedSequence([b.numerator if b.denominator == 1 else b for b in B], 'bernoulli', 'Q', 0, 1)


def median_genocchi(N: int, triangle: Optional[SeidelTriangle] = None) -> IndexedSequence:
    """Median Genocchi numbers :math:`H_1, H_3, \\dots, H_{2N+1}` from the first column :math:`g_{2n+1,1}`."""
    if N < 0:
        raise ValueError(f'N must be nonnegative, got {N}')
    triangle = triangle or seidel_triangle(2 * N + 1)
    return IndexedSequence([triangle[2 * n + 1, 1] for n in range(N + 1)], 'median_genocchi', 'Z', 1, 2)


def egf_coefficients(N: int, G: Optional[IndexedSequence] = None) -> IndexedSequence:
    """Coefficients :math:`g_0, \\dots, g_N` of :math:`2z/(1+e^z) = \\sum g_n z^n/n!`."""
    G = G or genocchi(max(N // 2, 1))
    values = []
    for n in range(N + 1):
        if n == 1:
            values.append(1)
        elif n == 0 or n % 2:
            values.append(0)
        else:
            values.append(sign(n // 2) * G[n])
    return IndexedSequence(values, 'genocchi_egf', 'Z', 0, 1)


def a_matrix_entry(n: int, k: int, G: Callable[[int], int]):
    """Coefficient :math:`a(n,k) = (-1)^{n-k-1} \\binom{2n}{2k} G_{2n-2k} / (2k+1)` as a rational.

    ``G(m)`` must return :math:`G_{2m}`.
    """
    if not 0 <= k <= n - 1:
        return 0
    value = Fraction(sign(n - k - 1) * comb(2 * n, 2 * k) * G(n - k), 2 * k + 1)
    return value.numerator if value.denominator == 1 else value


def a_matrix(n_max: int) -> IndexedMatrix:
    """Matrix :math:`a(n, k)`, ``1 <= n <= n_max``, ``0 <= k < n_max``, expressing :math:`F_{2n}` in the
    odd Fibonacci polynomials.

    Integrality is checked; a non-integral entry is kept as a rational and reported with a warning.
    """
    G = genocchi(n_max)
    rows = [[a_matrix_entry(n, k, lambda m: G[2 * m]) for k in range(n_max)] for n in range(1, n_max + 1)]
    integral = all(isinstance(v, int) for row in rows for v in row)
    if not integral:
        warnings.warn('a(n, k) has non-integral entries', Warning, stacklevel=2)
    return IndexedMatrix(rows, 'a_matrix', 'Z' if integral else 'Q', row_start=1, col_start=0)


class NumberTable:
    """Classical number sequences computed together and cross-checked.

    Parameters
    ----------
    N: int
        Number of Genocchi numbers :math:`G_2, \\dots, G_{2N}`.

    Attributes
    ----------
    triangle: SeidelTriangle
        Seidel triangle with ``2N+1`` rows.
    genocchi: IndexedSequence
    median_genocchi: IndexedSequence
    bernoulli: IndexedSequence
        :math:`B_0, \\dots, B_{2N}`.
    egf: IndexedSequence
        :math:`g_0, \\dots, g_{2N}`.
    """

    def __init__(self, N: int):
        self.N = N
        self.triangle = seidel_triangle(2 * N + 1)
        self.genocchi = genocchi(N, self.triangle)
        self.median_genocchi = median_genocchi(N, self.triangle)
        self.bernoulli = bernoulli(2 * N)
        self.egf = egf_coefficients(2 * N, self.genocchi)

    def violations(self) -> list:
        """Lists the relations between the sequences that fail, empty when all hold."""
        found = []
        if list(self.genocchi) != list(genocchi_from_egf(self.N)):
            found.append('Genocchi numbers from the triangle and from 2z/(1+e^z) differ')
        if list(self.genocchi) != list(genocchi_from_bernoulli(self.N)):
            found.append('Genocchi numbers from the triangle and from the Bernoulli numbers differ')
        if any(self.bernoulli[2 * n + 1] != 0 for n in range(1, self.N)):
            found.append('an odd Bernoulli number beyond B_1 does not vanish')
        return found

    def to_frame(self) -> pd.DataFrame:
        """One row per ``n`` with :math:`G_{2n}`, :math:`H_{2n+1}`, :math:`B_{2n}` and :math:`g_{2n}`."""
        records = [{'n': n,
                    'G_2n': render(self.genocchi[2 * n]) if n else '',
                    'H_2n+1': render(self.median_genocchi[2 * n + 1]),
                    'B_2n': render(self.bernoulli[2 * n]),
                    'g_2n': render(self.egf[2 * n])} for n in range(self.N + 1)]
        return pd.DataFrame(records).set_index('n')


def q_genocchi(N: int, triangle: Optional[SeidelTriangle] = None) -> IndexedSequence:
    """q-Genocchi numbers :math:`G_{2n}(q) = g_{2n-1,n}(q)`, ``n = 1..N``."""
    if N < 1:
        raise ValueError(f'N must be positive, got {N}')
    triangle = triangle or q_seidel_triangle(2 * N - 1)
    return IndexedSequence([triangle[2 * n - 1, n] for n in range(1, N + 1)], 'q_genocchi', 'Z[q,q^-1]', 2, 2)


def q_median_genocchi(N: int, triangle: Optional[SeidelTriangle] = None) -> IndexedSequence:
    """q-median Genocchi numbers :math:`H_{2n-1}(q) = q^{n-2} g_{2n-1,1}(q)`, ``n = 1..N``."""
    if N < 1:
        raise ValueError(f'N must be positive, got {N}')
    triangle = triangle or q_seidel_triangle(2 * N - 1)
    values = [triangle[2 * n - 1, 1].shift(n - 2) for n in range(1, N + 1)]
    return IndexedSequence(values, 'q_median_genocchi', 'Z[q,q^-1]', 1, 2)


def q_genocchi_via_seidel_identity(N: int) -> IndexedSequence:
    """Solves :math:`\\sum_k (-1)^k [n, 2k] q^{2\\binom{k}{2}} G_{2n-2k}(q) = [n = 1]` for
    :math:`G_{2n}(q)`, ``n = 1..N``, without using the triangle."""
    G = {}
    for n in range(1, N + 1):
        value = QLaurent.one() if n == 1 else QLaurent.zero()
        for k in range(1, n // 2 + 1):
            value = value - QLaurent.q(k * (k - 1), sign(k)) * gaussian_binomial(n, 2 * k) * G[n - k]
        G[n] = value
    return IndexedSequence([G[n] for n in range(1, N + 1)], 'q_genocchi', 'Z[q,q^-1]', 2, 2)


class QSeidelMatrix:
    """Seidel matrix :math:`a_{n,k}` of a seed sequence :math:`a_{n,0} = c_n`.

    With ``q_analogue`` the rule is :math:`a_{n,k} = q^{n-1}(a_{n,k-1} + a_{n+1,k-1})`, otherwise the
    classical :math:`a_{n,k} = a_{n,k-1} + a_{n+1,k-1}`. Entry ``(n, k)`` exists for
    ``start <= n`` and ``n + k <= start + len(seed) - 1``.

    Parameters
    ----------
    seed: sequence
        Values :math:`c_{start}, c_{start+1}, \\dots`.
    depth: int
        Largest column ``k`` to compute.
    q_analogue: bool, default True
    start: int, default 0
        Index of the first seed value.

    Raises
    ------
    SeedTooShort
        If ``depth`` exceeds ``len(seed) - 1``.
    """

    def __init__(self, seed: Sequence, depth: int, q_analogue: bool = True, start: int = 0):
        if depth > len(seed) - 1:
            raise SeedTooShort(f'depth {depth} needs at least {depth + 1} seed values, got {len(seed)}')
        self.q_analogue = q_analogue
        self.start = start
        self.depth = depth
        self.last = start + len(seed) - 1
        self.entries = {(start + i, 0): c for i, c in enumerate(seed)}
        for k in range(1, depth + 1):
            for n in range(start, self.last - k + 1):
                value = self.entries[n, k - 1] + self.entries[n + 1, k - 1]
                self.entries[n, k] = value * self._power(n - 1)

    def _power(self, exponent: int):
        return QLaurent.q(exponent) if self.q_analogue else 1

    def _bracket(self, k: int, j: int):
        return gaussian_binomial(k, j) if self.q_analogue else comb(k, j)

    def __getitem__(self, index: tuple):
        if index not in self.entries:
            raise KeyError(f'entry {index} is outside the computed Seidel matrix')
        return self.entries[index]

    def __contains__(self, index: tuple):
        return index in self.entries

    def closed_form(self, n: int, k: int):
        """Evaluates :math:`q^{k(n-1)} \\sum_j q^{\\binom{j}{2}} [k, j] a_{n+j,0}` from the seed alone."""
        total = 0
        for j in range(k + 1):
            total = total + self._power(j * (j - 1) // 2) * self._bracket(k, j) * self.entries[n + j, 0]
        return self._power(k * (n - 1)) * total


def q_seidel_matrix(seed: Sequence, depth: int, q_analogue: bool = True, start: int = 0) -> QSeidelMatrix:
    """Builds a :class:`QSeidelMatrix`."""
    return QSeidelMatrix(seed, depth, q_analogue, start)


def functional_seed(functional: LinearFunctional, length: int, kind: str = 'q-inverse') -> list:
    """Seed :math:`c_n = L((-1)^{n-1} F_n)` for ``n = 0..length-1``."""
    family = FibFamily(kind)
    return [functional(family[n] * sign(n - 1)) for n in range(length)]


@lru_cache(maxsize=None)
def reference_tables() -> dict:
    """Published tables, parsed from the packaged ``displays.json``."""
    text = resources.files('qgenocchi').joinpath('data').joinpath('displays.json').read_text()
    raw = json.loads(text)
    return {name: [[parse(cell) for cell in row] for row in rows] if rows and isinstance(rows[0], list)
            else [parse(cell) for cell in rows]
            for name, rows in raw.items()}


def display_discrepancies(table: IndexedMatrix, name: str) -> list:
    """Compares the rows of ``table`` with the published display ``name``.

    Returns a list of messages, one per differing entry; entries of the display beyond the row
    width of the table are compared against zero.
    """
    display = reference_tables()[name]
    messages = []
    for offset, row in enumerate(display):
        i = table.row_start + offset
        for position, expected in enumerate(row):
            j = table.col_start + position
            actual = table[i, j]
            if actual != expected:
                messages.append(f'{name} entry ({i}, {j}): displayed {render(expected)}, computed {render(actual)}')
    return messages
