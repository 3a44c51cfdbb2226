"""Exact machine verification of the Genocchi, Bernoulli and Fibonacci identities.

Every identity lives in a registry under a stable id. A check evaluates both sides of the identity
exactly for one set of parameters and returns a list of :class:`Comparison` objects; the runner turns
them into an :class:`IdentityCase` with status ``pass``, ``fail`` or ``anomaly``.
"""
import json
import operator
import sys
import threading
import warnings
from concurrent.futures import ThreadPoolExecutor
from csv import DictReader
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from importlib import resources
from math import comb, factorial
from time import perf_counter
from typing import Callable, Optional

import dill
import pandas as pd

from qgenocchi._utils import c2, log, sign, timeit
from qgenocchi.algebra import QLaurent, QRatFn, SLaurent, TruncSeries, gaussian_binomial, q_integer
from qgenocchi.exceptions import ParamOutOfRange, UnknownIdentity
from qgenocchi.fib import FibFamily
from qgenocchi.functional import make_L, make_Lq, make_M, make_Mq, make_V
from qgenocchi.grammar import render
from qgenocchi.tables import (QSeidelMatrix, a_matrix_entry, bernoulli, display_discrepancies,
                              functional_seed, q_genocchi_via_seidel_identity, q_seidel_triangle,
                              reference_tables, seidel_triangle)

STATUSES = ('pass', 'fail', 'anomaly')
METHODS = ('polynomial', 'functional', 'series')
CLASSICAL_CAP = 60
Q_CAP = 16

gb = gaussian_binomial


def _s(k: int, coefficient=1) -> SLaurent:
    return SLaurent.monomial(coefficient, k)


def _q(exponent: int, coefficient=1) -> QLaurent:
    return QLaurent.q(exponent, coefficient)


def _total(items):
    return reduce(operator.add, items, 0)


def _render(value) -> str:
    if isinstance(value, tuple):
        return '(' + ', '.join(_render(v) for v in value) + ')'
    return render(value)


@dataclass(frozen=True, eq=False)
class Comparison:
    """Both sides of one exact equality.

    Attributes
    ----------
    label: str
        Short description of the equality.
    lhs, rhs:
        Exact values of the two sides.
    reading: str, optional
        Name of the reading when an identity admits several index readings.
    note: str, optional
        Text copied into the notes of the case.
    """
    label: str
    lhs: object
    rhs: object
    reading: Optional[str] = None
    note: Optional[str] = None

    @property
    def holds(self) -> bool:
        return bool(self.lhs == self.rhs)

    def witness(self) -> str:
        """Renders ``lhs - rhs``, or both sides when they cannot be subtracted."""
        try:
            difference = self.lhs - self.rhs
        except TypeError:
            return f'{self.label}: {_render(self.lhs)} != {_render(self.rhs)}'
        return f'{self.label}: lhs - rhs = {_render(difference)}'


@dataclass
class IdentityCase:
    """Outcome of one identity at one parameter set."""
    id: str
    params: dict
    method: str
    status: str = 'pass'
    witness: Optional[str] = None
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {'id': self.id, 'params': dict(self.params), 'method': self.method, 'status': self.status,
                'witness': self.witness, 'notes': list(self.notes)}


@dataclass(frozen=True)
class Perturbation:
    """Adds ``delta`` to one entry of a table, for negative controls.

    Parameters
    ----------
    table: str
        ``'seidel_triangle'``, ``'q_seidel_triangle'`` or ``'bernoulli'``.
    index: tuple
        ``(i, j)`` for a triangle, ``(n,)`` for the Bernoulli numbers.
    delta: int, default 1
    """
    table: str
    index: tuple
    delta: int = 1

    TABLES = ('seidel_triangle', 'q_seidel_triangle', 'bernoulli')

    def __post_init__(self):
        if self.table not in self.TABLES:
            raise ValueError(f'unknown table {self.table!r}, expected one of {self.TABLES}')


class VerificationContext:
    """Tables, polynomial families and functionals shared by the checks of one run.

    Every table is built lazily at the size the run needs and, once built, only read. Call
    :meth:`warm_up` before running checks from several threads.

    Parameters
    ----------
    classical_n: int, default 12
        Largest ``n`` of the classical identities.
    q_n: int, default 6
        Largest ``n`` of the q-identities.
    classical_order: int, default 16
        Truncation order of the classical series identities.
    q_order: int, default 8
        Truncation order of the q-series identities.
    q_rows: int, default 9
        Rows of the q-triangle compared against the functional formulas.
    v_degree: int, default 12
        Largest ``n`` for the Bernoulli functional identities.
    perturbation: Perturbation, optional
        Entry to perturb after the tables are built.
    """

    def __init__(self, classical_n: int = 12, q_n: int = 6, classical_order: int = 16, q_order: int = 8,
                 q_rows: int = 9, v_degree: int = 12, perturbation: Optional[Perturbation] = None):
        self.classical_n = classical_n
        self.q_n = q_n
        self.classical_order = classical_order
        self.q_order = q_order
        self.q_rows = q_rows
        self.v_degree = v_degree
        self.perturbation = perturbation
        self.fib = FibFamily('classical')
        self.fib_q = FibFamily('q')
        self.fib_q_inverse = FibFamily('q-inverse')
        self._lock = threading.Lock()

    @classmethod
    def from_settings(cls, settings: dict, perturbation: Optional[Perturbation] = None) -> 'VerificationContext':
        keys = ('classical_n', 'q_n', 'classical_order', 'q_order', 'q_rows', 'v_degree')
        return cls(**{key: settings[key] for key in keys if key in settings}, perturbation=perturbation)

    def _perturb(self, name: str, table):
        p = self.perturbation
        if p is None or p.table != name:
            return table
        if name == 'bernoulli':
            values = list(table)
            values[p.index[0]] = values[p.index[0]] + p.delta
            return values
        i, j = p.index
        return table.with_entry(i, j, table[i, j] + p.delta)

    @cached_property
    def triangle(self):
        rows = max(2 * self.classical_n + 3, self.classical_order + 3)
        return self._perturb('seidel_triangle', seidel_triangle(rows))

    @cached_property
    def bernoulli(self) -> list:
        size = max(2 * self.classical_n + 4, 2 * self.v_degree + 2)
        return self._perturb('bernoulli', list(bernoulli(size)))

    @cached_property
    def q_triangle(self):
        rows = max(2 * self.q_n + 3, self.q_rows, self.q_order + 3)
        return self._perturb('q_seidel_triangle', q_seidel_triangle(rows))

    @cached_property
    def L(self):
        return make_L(self.classical_n + 3)

    @cached_property
    def M(self):
        return make_M(self.classical_n + 3)

    @cached_property
    def V(self):
        return make_V(self.bernoulli[:2 * self.v_degree + 2])

    @cached_property
    def Lq(self):
        return make_Lq(self.q_n + 3)

    @cached_property
    def Mq(self):
        return make_Mq(self.q_n + 2)

    @cached_property
    def q_genocchi_rebuilt(self) -> list:
        return list(q_genocchi_via_seidel_identity(self.q_n + 1))

    def warm_up(self, families: tuple = ('classical', 'q')):
        """Builds every lazy table of the given families."""
        names = {'classical': ('triangle', 'bernoulli', 'L', 'M', 'V'),
                 # q-objects are compared against the classical tables at q = 1
                 'q': ('q_triangle', 'Lq', 'Mq', 'q_genocchi_rebuilt', 'triangle', 'L', 'M')}
        with self._lock:
            for family in families:
                for name in names[family]:
                    getattr(self, name)
            if 'classical' in families:
                self.fib.poly(max(2 * self.classical_n + 4, self.classical_order + 2))
            if 'q' in families:
                self.fib_q.poly(max(2 * self.q_n + 4, 24))
                self.fib_q_inverse.poly(max(2 * self.q_n + 4, 24))

    def F(self, n: int) -> SLaurent:
        return self.fib.poly(n)

    def Fq(self, n: int) -> SLaurent:
        return self.fib_q.poly(n)

    def Fqi(self, n: int) -> SLaurent:
        return self.fib_q_inverse.poly(n)

    def G(self, n: int):
        """Genocchi number :math:`G_{2n}`."""
        return self.triangle[2 * n - 1, n]

    def g(self, n: int):
        """Coefficient :math:`g_n` of :math:`2z/(1+e^z) = \\sum g_n z^n/n!`."""
        if n == 1:
            return 1
        if n == 0 or n % 2:
            return 0
        return sign(n // 2) * self.G(n // 2)

    def H(self, n: int):
        """Median Genocchi number :math:`H_{2n+1}`."""
        return self.triangle[2 * n + 1, 1]

    def B(self, n: int):
        return self.bernoulli[n]

    def Gq(self, n: int) -> QLaurent:
        """q-Genocchi number :math:`G_{2n}(q)`."""
        return self.q_triangle[2 * n - 1, n]

    def Hq(self, n: int) -> QLaurent:
        """q-median Genocchi number :math:`H_{2n+1}(q) = q^{n-1} g_{2n+1,1}(q)`."""
        return self.q_triangle[2 * n + 1, 1].shift(n - 1)


# Classical identities

def check_genocchi_egf(ctx: VerificationContext, order: int) -> list:
    e = TruncSeries.exp(order)
    z = TruncSeries.monomial(1, 1, order)
    series = 2 * z / (1 + e)
    out = [Comparison('2z/(1+e^z) = z + z(1-e^z)/(1+e^z)', series, z + z * (1 - e) / (1 + e))]
    out += [Comparison(f'n={n}', series[n] * factorial(n), ctx.g(n)) for n in range(order + 1)]
    return out


def check_genocchi_bernoulli(ctx: VerificationContext, n: int) -> list:
    return [Comparison(f'G_{2 * n}', ctx.G(n), sign(n) * 2 * (1 - 4 ** n) * ctx.B(2 * n))]


def check_fib_egf(ctx: VerificationContext, order: int) -> list:
    e = TruncSeries.exp(order)
    lhs = TruncSeries.egf([ctx.F(n) for n in range(order + 1)], order)
    rhs = -e * TruncSeries.egf([ctx.F(n) * sign(n) for n in range(order + 1)], order)
    return [Comparison('sum F_n z^n/n! = -e^z sum F_n (-z)^n/n!', lhs, rhs)]


def check_fib_egf_parts(ctx: VerificationContext, order: int) -> list:
    e = TruncSeries.exp(order)
    z = TruncSeries.monomial(1, 1, order)
    even = TruncSeries.egf([ctx.F(n) if n % 2 == 0 else 0 for n in range(order + 1)], order)
    odd = TruncSeries.egf([ctx.F(n) if n % 2 else 0 for n in range(order + 1)], order)
    odd_over_z = TruncSeries([ctx.F(n + 1) * Fraction(1, factorial(n + 1)) if n % 2 == 0 else 0
                              for n in range(order + 1)], order)
    return [Comparison('(1+e^z) even part = (e^z-1) odd part', (1 + e) * even, (e - 1) * odd),
            Comparison('even part = z(e^z-1)/(1+e^z) odd part / z', even, z * (e - 1) / (1 + e) * odd_over_z)]


def check_L_even_fib(ctx: VerificationContext, n: int) -> list:
    return [Comparison(f'L(F_{2 * n})', ctx.L(ctx.F(2 * n)), sign(n - 1) * ctx.G(n))]


def check_L_fib(ctx: VerificationContext, n: int) -> list:
    return [Comparison(f'g_{n} = -L(F_{n})', ctx.g(n), -ctx.L(ctx.F(n)))]


def check_even_fib_expansion(ctx: VerificationContext, n: int) -> list:
    coefficients = [a_matrix_entry(n, k, ctx.G) for k in range(n)]
    rhs = _total(a * ctx.F(2 * k + 1) for k, a in enumerate(coefficients))
    out = [Comparison(f'F_{2 * n} = sum a(n,k) F_(2k+1)', ctx.F(2 * n), rhs)]
    out += [Comparison(f'a({n},{k}) is an integer', Fraction(a).denominator, 1) for k, a in enumerate(coefficients)]
    return out


def check_M_odd_fib(ctx: VerificationContext, n: int) -> list:
    return [Comparison(f'M(F_{2 * n + 1})', ctx.M(ctx.F(2 * n + 1)), (2 * n + 1) * ctx.B(2 * n))]


def check_odd_fib_expansion(ctx: VerificationContext, n: int) -> list:
    rhs = _total(Fraction(comb(2 * n + 1, 2 * j + 1) * ctx.B(2 * n - 2 * j), j + 1) * ctx.F(2 * j + 2)
                 for j in range(n + 1))
    return [Comparison(f'F_{2 * n + 1} in even Fibonacci polynomials', ctx.F(2 * n + 1), rhs)]


def check_bernoulli_symmetric_sum(ctx: VerificationContext, n: int) -> list:
    total = _total(comb(n + 1, i) * (n + i + 1) * ctx.B(n + i) for i in range(n + 2))
    out = [Comparison('sum binom(n+1,i)(n+i+1)B_(n+i)', total, 0)]
    if n >= 2:
        odd = _total(comb(n + 1, 2 * i + 1) * (2 * n - 2 * i + 1) * ctx.B(2 * n - 2 * i) for i in range(n // 2 + 1))
        out.append(Comparison('M applied to the alternating Fibonacci sum', odd, 0))
    return out


def check_alternating_fib_sum(ctx: VerificationContext, n: int) -> list:
    first = _total(sign(n - k) * comb(n, k) * ctx.F(n + k) for k in range(n + 1))
    second = _total(sign(k) * comb(n, k) * ctx.F(2 * n - k) for k in range(n + 1))
    even = _total(comb(n + 1, 2 * i) * ctx.F(2 * n + 2 - 2 * i) for i in range((n + 1) // 2 + 1))
    odd = _total(comb(n + 1, 2 * i + 1) * ctx.F(2 * n + 1 - 2 * i) for i in range(n // 2 + 1))
    return [Comparison('sum (-1)^(n-k) binom(n,k) F_(n+k)', first, 0),
            Comparison('sum (-1)^k binom(n,k) F_(2n-k)', second, 0),
            Comparison('even and odd binomial parts', even, odd)]


def check_bernoulli_difference(ctx: VerificationContext, n: int) -> list:
    B = ctx.B
    alternating = _total(sign(n - i) * comb(n, i) * B(n + i) for i in range(n + 1))
    plain = _total(comb(n, i) * B(n + i) for i in range(n + 1))
    odd = _total(comb(n, 2 * i + 1) * B(2 * n - 2 * i - 1) for i in range((n - 1) // 2 + 1))
    return [Comparison('difference identity with r = w = n', alternating, plain),
            Comparison('sum binom(n,2i+1) B_(2n-2i-1)', odd, 0),
            Comparison(f'B_{2 * n - 1}', B(2 * n - 1), 0)]


def check_bernoulli_shifted_difference(ctx: VerificationContext, n: int) -> list:
    B = ctx.B
    lhs = _total(sign(n - i) * comb(n, i) * B(n + 1 + i) for i in range(n + 1))
    middle = _total(comb(n + 1, j) * B(n + j) for j in range(n + 2))
    rhs = B(n) + _total(comb(n + 1, i + 1) * B(n + i + 1) for i in range(n + 1))
    weighted = _total(comb(n + 1, i) * (n + i + 1) * B(n + i) for i in range(n + 1))
    return [Comparison('alternating sum = binomial sum', lhs, middle),
            Comparison('binomial sum = B_n + shifted sum', middle, rhs),
            Comparison('weighted sum', weighted, 0)]


def check_V_reflection(ctx: VerificationContext, n: int) -> list:
    x = SLaurent.monomial(1, 1, 'x')
    one_minus_x = 1 - x
    f_reflected = x ** (n + 1) * (x - 1) ** n
    f = one_minus_x ** (n + 1) * (-x) ** n
    return [Comparison(f'V((1-x)^{n}) = V(x^{n})', ctx.V(one_minus_x ** n), ctx.V(x ** n)),
            Comparison('V(f(1-x)) = V(f(x)) for f = (1-x)^(n+1)(-x)^n', ctx.V(f_reflected), ctx.V(f))]


def check_triangle_partial_sums(ctx: VerificationContext, n: int) -> list:
    t = ctx.triangle
    out = [Comparison(f'g({2 * n},{j})', t[2 * n, j], _total(t[2 * n - 1, l] for l in range(j, n + 1)))
           for j in range(1, n + 1)]
    out += [Comparison(f'g({2 * n + 1},{j})', t[2 * n + 1, j], _total(t[2 * n, l] for l in range(1, j + 1)))
            for j in range(1, n + 2)]
    return out


def check_triangle_functional(ctx: VerificationContext, n: int) -> list:
    t, L, F = ctx.triangle, ctx.L, ctx.F
    out = [Comparison(f'g({2 * n},{k})', t[2 * n, k], sign(n) * L(_s(n + 1 - k) * F(2 * k - 1)))
           for k in range(1, n + 1)]
    out += [Comparison(f'g({2 * n + 1},{k})', t[2 * n + 1, k], sign(n) * L(_s(n + 1 - k) * F(2 * k)))
            for k in range(1, n + 2)]
    return out


def check_median_genocchi(ctx: VerificationContext, n: int) -> list:
    return [Comparison(f'L(s^{n})', ctx.L(_s(n)), sign(n) * ctx.H(n))]


def check_binomial_transform(ctx: VerificationContext, n: int) -> list:
    out = []
    for k in range(n + 2):
        lhs = _total(comb(k, j) * ctx.g(n + j) for j in range(k + 1))
        out.append(Comparison(f'k={k}', lhs, sign(n + k - 1) * ctx.L(_s(k) * ctx.F(n - k))))
        difference = _total(sign(k - j) * comb(k, j) * ctx.F(n + j) for j in range(k + 1))
        out.append(Comparison(f'k-th difference of F at {n}', difference, _s(k) * ctx.F(n - k)))
    return out


def check_seidel_identity(ctx: VerificationContext, n: int) -> list:
    out = [Comparison('sum binom(n,j) g_(n+j)', _total(comb(n, j) * ctx.g(n + j) for j in range(n + 1)), 0)]
    if n >= 2:
        total = _total(comb(n, 2 * k) * sign(k) * ctx.G(n - k) for k in range(n // 2 + 1))
        out.append(Comparison('sum binom(n,2k)(-1)^k G_(2n-2k)', total, 0))
    return out


def check_median_binomial(ctx: VerificationContext, n: int) -> list:
    binomial = _total(comb(n + 1, k) * ctx.g(n + k) for k in range(n + 2))
    out = [Comparison(f'H_{2 * n + 1} from g', ctx.H(n), sign(n) * binomial),
           Comparison('L(s^(n+1) F_-1) = L(s^n)', ctx.L(_s(n + 1) * ctx.F(-1)), ctx.L(_s(n)))]
    if n >= 2:
        total = _total(sign(k) * comb(n + 1, 2 * k + 1) * ctx.G(n - k) for k in range(n // 2 + 1))
        out.append(Comparison(f'H_{2 * n + 1} from G', ctx.H(n), total))
    return out


def check_median_generating_function(ctx: VerificationContext, order: int) -> list:
    z = TruncSeries.monomial(1, 1, order)
    lhs = TruncSeries([1] + [sign((k + 1) // 2 - 1) * ctx.G((k + 1) // 2) if k % 2 else 0
                             for k in range(1, order + 1)], order)
    inverse = TruncSeries.geometric(1, order)
    w = z * z * inverse
    rhs, power = TruncSeries.zero(order), TruncSeries.one(order)
    for n in range(order // 2 + 1):
        rhs = rhs + sign(n) * ctx.H(n) * (inverse * power)
        power = power * w
    s = _s(1)
    fib = TruncSeries([ctx.F(n + 1) for n in range(order + 1)], order)
    closed = 1 / (1 - z - z * z * s)
    expanded, power = TruncSeries.zero(order), TruncSeries.one(order)
    for n in range(order // 2 + 1):
        expanded = expanded + (inverse * power) * _s(n)
        power = power * w
    return [Comparison('L applied to the Fibonacci generating function', lhs, rhs),
            Comparison('sum F_(n+1) z^n = 1/(1-z-sz^2)', fib, closed),
            Comparison('sum F_(n+1) z^n = sum s^n z^2n/(1-z)^(n+1)', fib, expanded)]


# q-identities

def check_q_triangle_functional(ctx: VerificationContext, n: int) -> list:
    t, Lq, F = ctx.q_triangle, ctx.Lq, ctx.Fqi
    m = n // 2
    out = []
    if n % 2 == 0:
        for k in range(1, m + 1):
            value = _q((k - 1) * (k - 2), sign(m)) * Lq(_s(m + 1 - k) * F(2 * k - 1))
            out.append(Comparison(f'g({n},{k})', t[n, k], value))
    else:
        for k in range(1, m + 2):
            value = _q((k - 1) ** 2, sign(m)) * Lq(_s(m + 1 - k) * F(2 * k))
            out.append(Comparison(f'g({n},{k})', t[n, k], value))
    for k, entry in enumerate(t.row(n), 1):
        out.append(Comparison(f'g({n},{k}) has nonnegative integer coefficients',
                              QLaurent.coerce(entry).has_nonnegative_integer_coefficients(), True))
    return out


def check_q_triangle_sums(ctx: VerificationContext, n: int) -> list:
    t = ctx.q_triangle
    out = [Comparison(f'g({2 * n + 1},{k})', t[2 * n + 1, k],
                      _total(_q(k - 1 - l) * t[2 * n, k - l] for l in range(k)))
           for k in range(1, n + 2)]
    out += [Comparison(f'g({2 * n},{k})', t[2 * n, k],
                       _total(_q(k - 1 + l) * t[2 * n - 1, k + l] for l in range(n - k + 1)))
            for k in range(1, n + 1)]
    return out


def check_q_functional_values(ctx: VerificationContext, n: int) -> list:
    t, Lq = ctx.q_triangle, ctx.Lq
    factor = _q(-(n - 1) ** 2, sign(n))
    lhs = Lq(_s(1) * ctx.Fqi(2 * n))
    return [Comparison('L(s F_2n(s,1/q)) via g_(2n+1,n)', lhs, factor * t[2 * n + 1, n], reading='g_(2n+1,n)'),
            Comparison('L(s F_2n(s,1/q)) via G_(2n+2)(q)', lhs, factor * ctx.Gq(n + 1), reading='G_(2n+2)(q)'),
            Comparison(f'L(F_{2 * n}(s,1/q))', Lq(ctx.Fqi(2 * n)), _q(-(n - 1) ** 2, sign(n - 1)) * ctx.Gq(n)),
            Comparison(f'L(s^{n}) via g_(2n+1,1)', Lq(_s(n)), sign(n) * t[2 * n + 1, 1]),
            Comparison(f'L(s^{n}) via H_(2n+1)(q)', Lq(_s(n)), _q(1 - n, sign(n)) * ctx.Hq(n))]


def check_q_alternating_fib_sum(ctx: VerificationContext, n: int) -> list:
    q_sum = _total(_q(c2(k), sign(k)) * gb(n, k) * ctx.Fq(2 * n - k) for k in range(n + 1))
    inverse_sum = _total(_q(c2(k + 1) - k * n, sign(k)) * gb(n, k) * ctx.Fqi(2 * n - k) for k in range(n + 1))
    return [Comparison('sum (-1)^k [n,k] q^C(k,2) F_(2n-k)(s,q)', q_sum, 0),
            Comparison('sum (-1)^k [n,k] q^(C(k+1,2)-kn) F_(2n-k)(s,1/q)', inverse_sum, 0)]


def check_q_seidel_identity(ctx: VerificationContext, n: int) -> list:
    total = _total(_q(k * (k - 1), sign(k)) * gb(n, 2 * k) * ctx.Gq(n - k) for k in range(n // 2 + 1))
    rebuilt = ctx.q_genocchi_rebuilt[n - 1]
    return [Comparison('sum (-1)^k [n,2k] q^(2C(k,2)) G_(2n-2k)(q)', total, 1 if n == 1 else 0),
            Comparison(f'G_{2 * n}(q) rebuilt from the identity', rebuilt, ctx.Gq(n),
                       note=f'G_{2 * n}(q) = {render(rebuilt)}')]


def check_q_fib_shifted_sum(ctx: VerificationContext, n: int, m: int) -> list:
    lhs = _total(_q(c2(k), sign(k)) * gb(n, k) * ctx.Fq(2 * n + m - k) for k in range(n + 1))
    rhs = _q(2 * c2(n) + (m - 1) * n) * (_s(n) * ctx.Fq(m))
    return [Comparison(f'n={n}, m={m}', lhs, rhs)]


def check_q_fib_recursion(ctx: VerificationContext, m: int) -> list:
    return [Comparison(f'F_{m + 2} - F_{m + 1}', ctx.Fq(m + 2) - ctx.Fq(m + 1), _q(m - 1) * (_s(1) * ctx.Fq(m)))]


def check_q_median_genocchi(ctx: VerificationContext, n: int) -> list:
    rhs = _total(_q(k * k - k + n - 2, sign(k)) * gb(n + 1, 2 * k + 1) * ctx.Gq(n - k) for k in range(n // 2 + 1))
    expansion = _q(2 * c2(n)) * _total(_q(c2(k) - k * n, sign(k)) * gb(n + 1, k) * ctx.Fqi(2 * n + 1 - k)
                                       for k in range(n + 2))
    return [Comparison(f'H_{2 * n + 1}(q)', ctx.Hq(n), rhs),
            Comparison(f's^{n} in the basis F_k(s,1/q)', expansion, _s(n))]


def _geometric_product(order: int, factors: Callable[[int], TruncSeries], k: int) -> list:
    products, product = [], TruncSeries.one(order)
    for i in range(k + 1):
        product = product * factors(i)
        products.append(product)
    return products


def check_q_median_generating_function(ctx: VerificationContext, order: int) -> list:
    kmax = order // 2
    lhs = TruncSeries([1] + [_q(-((k + 1) // 2 - 1) ** 2, sign((k + 1) // 2 - 1)) * ctx.Gq((k + 1) // 2)
                             if k % 2 else 0 for k in range(1, order + 1)], order)
    # 1/(q^i - z) and 1/(z - q^i) as q^-i times a geometric series in q^-i z
    over_q_minus_z = _geometric_product(order, lambda i: TruncSeries.geometric(_q(-i), order) * _q(-i), kmax)
    over_z_minus_q = _geometric_product(order, lambda i: TruncSeries.geometric(_q(-i), order) * _q(-i, -1), kmax)
    over_one_minus = _geometric_product(order, lambda i: TruncSeries.geometric(_q(i), order), kmax)
    rhs_h, rhs_g = TruncSeries.zero(order), TruncSeries.zero(order)
    fib_q_expanded, fib_qi_expanded = TruncSeries.zero(order), TruncSeries.zero(order)
    for k in range(kmax + 1):
        shift = TruncSeries.monomial(1, 2 * k, order)
        rhs_h = rhs_h + (shift * over_z_minus_q[k]) * (_q(1 - c2(k), -1) * ctx.Hq(k))
        rhs_g = rhs_g + (shift * over_q_minus_z[k]) * (_q(k - c2(k), sign(k)) * ctx.q_triangle[2 * k + 1, 1])
        fib_q_expanded = fib_q_expanded + (shift * over_one_minus[k]) * _s(k, _q(2 * c2(k)))
        fib_qi_expanded = fib_qi_expanded + (shift * over_z_minus_q[k]) * _s(k, _q(k - c2(k), sign(k + 1)))
    fib_q = TruncSeries([ctx.Fq(n + 1) for n in range(order + 1)], order)
    fib_qi = TruncSeries([ctx.Fqi(n + 1) for n in range(order + 1)], order)
    return [Comparison('generating function in H(q)', lhs, rhs_h),
            Comparison('generating function in g(2k+1,1)', lhs, rhs_g),
            Comparison('sum F_(n+1)(s,q) z^n', fib_q, fib_q_expanded,
                       note='the weight of s^k z^2k in the q-Fibonacci generating function is q^(2 C(k,2))'),
            Comparison('sum F_(n+1)(s,1/q) z^n', fib_qi, fib_qi_expanded)]


def check_seidel_matrix(ctx: VerificationContext, n: int) -> list:
    out = []
    for q_analogue, functional, fib, kind in ((True, ctx.Lq, ctx.Fqi, 'q-inverse'),
                                              (False, ctx.L, ctx.F, 'classical')):
        matrix = QSeidelMatrix(functional_seed(functional, n + 2, kind), n + 1, q_analogue)
        tag = 'q' if q_analogue else 'classical'
        for (j, k), value in sorted(matrix.entries.items()):
            if k >= 1:
                out.append(Comparison(f'{tag} a({j},{k}) closed form', value, matrix.closed_form(j, k)))
            if j - k >= -1:
                weight = _q(c2(k + 1), sign(j - k - 1)) if q_analogue else sign(j - k - 1)
                out.append(Comparison(f'{tag} a({j},{k}) functional', value,
                                      functional(_s(k, weight) * fib(j - k))))
    return out


def check_q_bernoulli_analogue(ctx: VerificationContext, n: int) -> list:
    Mq, F = ctx.Mq, ctx.Fq
    total = QRatFn.sum(_q(c2(k), sign(k)) * gb(n + 1, k) * Mq(F(2 * n + 2 - k)) for k in range(n + 2))
    out = [Comparison('sum (-1)^k [n+1,k] q^C(k,2) M(F_(2n+2-k))', total, 0),
           Comparison(f'M(F_{2 * n + 2})', Mq(F(2 * n + 2)), 1 if n == 0 else 0)]
    published = reference_tables()['q_m_values']
    if n < len(published):
        out.append(Comparison(f'M(F_{2 * n + 1}) published value', Mq(F(2 * n + 1)), published[n],
                              note=f'M(F_{2 * n + 1}) = {render(Mq(F(2 * n + 1)))}'))
    return out


def check_first_column_vanishing(ctx: VerificationContext, n: int) -> list:
    t = ctx.q_triangle
    total = _total(_q(k * k + k - 2 * n * k, sign(k)) * gb(2 * n - k, k) * t[2 * k + 1, 1] for k in range(n + 1))
    return [Comparison('sum (-1)^k q^(k^2+k-2nk) [2n-k,k] g(2k+1,1)', total, 0)]


def check_first_column_genocchi(ctx: VerificationContext, n: int) -> list:
    t = ctx.q_triangle
    inner = _total(_q(k * k + 2 * k - 2 * n * k, sign(n - k - 1)) * gb(2 * n - 1 - k, k) * t[2 * k + 1, 1]
                   for k in range(n))
    return [Comparison(f'G_{2 * n}(q) from the first column', _q((n - 1) ** 2) * inner, ctx.Gq(n),
                       note='the prefactor q^((n-1)^2) multiplies the whole sum')]


def check_q_fib_addition(ctx: VerificationContext, n: int, m: int) -> list:
    rhs = _total(gb(n, k) * _q(k * (m + n - 2)) * (_s(k) * ctx.Fq(m + n - k)) for k in range(n + 1))
    return [Comparison(f'F_{m + 2 * n}(s,q)', ctx.Fq(m + 2 * n), rhs)]


def check_q_triangle_split(ctx: VerificationContext, n: int) -> list:
    t, F = ctx.q_triangle, ctx.Fqi
    lhs = _total(_q(3 * j * j - j, sign(j)) * gb(n, 2 * j) * t[2 * n - 2 * j, j + 1] for j in range(n // 2 + 1))
    rhs = _total(_q(3 * j * j - 4 * j + 1, sign(j - 1)) * gb(n, 2 * j - 1) * t[2 * n - 2 * j + 1, j]
                 for j in range(1, (n + 1) // 2 + 1))
    expansion = (_total(gb(n, 2 * j) * _q(2 * c2(2 * j) - 2 * c2(n)) * (_s(n - 2 * j) * F(2 * j + 1))
                        for j in range(n // 2 + 1))
                 + _total(gb(n, 2 * j - 1) * _q(2 * c2(2 * j - 1) - 2 * c2(n)) * (_s(n - 2 * j + 1) * F(2 * j))
                          for j in range(1, (n + 1) // 2 + 1)))
    return [Comparison('even and odd triangle sums', lhs, rhs),
            Comparison(f'F_{2 * n + 1}(s,1/q) split by parity', F(2 * n + 1), expansion)]


def _central_sum(n: int, m: int, weight: Callable[[int], QLaurent]) -> SLaurent:
    return _total(_s(k, sign(k)) * gb(2 * k + m, k) * weight(k) for k in range(n + 1))


def check_central_binomial_q(ctx: VerificationContext, n: int, m: int) -> list:
    lhs = _central_sum(n, m, lambda k: _q(-c2(k + m + 2)))
    even = _total(_s(n - k, sign(n - k)) * gb(2 * n + m + 2, n - k) * _q(-c2(n + 2 + m - k)) * ctx.Fq(2 * k + 2)
                  for k in range(n + 1))
    odd = _total(_s(n - k, sign(n - k)) * gb(2 * n + m + 1, n - k) * _q(-c2(n + 2 + m - k)) * ctx.Fq(2 * k + 1)
                 for k in range(n + 1))
    out = [Comparison('expansion in F_(2k+2)(s,q)', lhs, even),
           Comparison('expansion in F_(2k+1)(s,q)', lhs, odd)]
    for k in range(n + 1):
        vandermonde = _total(_q((k - j) * (2 * n + m + 2 - j)) * gb(2 * n + m + 2, j) * gb(2 * k - 2 * n - 2, k - j)
                             for j in range(k + 1))
        out.append(Comparison(f'q-Vandermonde k={k}', gb(2 * k + m, k), vandermonde))
    return out


def check_central_binomial_q_inverse(ctx: VerificationContext, n: int, m: int) -> list:
    lhs = _central_sum(n, m, lambda k: _q(-(k * (k - 3) // 2)))
    even = _q(-c2(n + 1)) * _total(_s(n - k, sign(n - k)) * gb(2 * n + m + 2, n - k)
                                   * _q(k * (3 * k + 1) // 2 - k * n) * ctx.Fqi(2 * k + 2) for k in range(n + 1))
    odd = _q(-c2(n)) * _total(_s(n - k, sign(n - k)) * gb(2 * n + m + 1, n - k)
                              * _q(k * (3 * k - 1) // 2 - k * n) * ctx.Fqi(2 * k + 1) for k in range(n + 1))
    return [Comparison('expansion in F_(2k+2)(s,1/q)', lhs, even),
            Comparison('expansion in F_(2k+1)(s,1/q)', lhs, odd)]


def check_central_binomial_triangle(ctx: VerificationContext, n: int, m: int) -> list:
    t = ctx.q_triangle
    lhs = _total(gb(2 * k + m, k) * _q(-(k * (k - 3) // 2)) * t[2 * k + 1, 1] for k in range(n + 1))
    odd_row = _q(-c2(n + 1)) * _total(_q(c2(k + 1) - k * n, sign(k)) * gb(2 * n + m + 2, n - k) * t[2 * n + 1, k + 1]
                                      for k in range(n + 1))
    out = [Comparison('odd row form', lhs, odd_row)]
    if n >= 1:
        even_row = _q(-c2(n)) * _total(_q(c2(k + 1) - k * n, sign(k)) * gb(2 * n + m + 1, n - k) * t[2 * n, k + 1]
                                       for k in range(n + 1))
        out.append(Comparison('even row form', lhs, even_row))
    if n == 1:
        out += [Comparison('1 + q[m+2]', lhs, 1 + _q(1) * q_integer(m + 2)),
                Comparison('([m+4]-1)/q', lhs, (q_integer(m + 4) - 1) * _q(-1)),
                Comparison('[m+3]', lhs, q_integer(m + 3))]
    if n == 2:
        two, three = q_integer(2), q_integer(3)
        out += [Comparison('1 + q[m+2] + q[m+4,2][2]', lhs, 1 + _q(1) * q_integer(m + 2) + _q(1) * gb(m + 4, 2) * two),
                Comparison('odd row closed form', lhs,
                           gb(m + 6, 2) * two * _q(-3) - gb(m + 6, 1) * three * _q(-4) + three * _q(-4)),
                Comparison('even row closed form', lhs, gb(m + 5, 2) * two * _q(-1) - gb(m + 5, 1) * _q(-1))]
    return out


def check_q_equals_one(ctx: VerificationContext, n: int) -> list:
    q_row = tuple(v.evaluate_at_q1() for v in ctx.q_triangle.row(n))
    out = [Comparison(f'row {n} at q=1', q_row, ctx.triangle.row(n)),
           Comparison(f'F_{n}(s,q) at q=1', ctx.fib_q.specialize_q1(n), ctx.F(n)),
           Comparison(f'F_{n}(s,1/q) at q=1', ctx.fib_q_inverse.specialize_q1(n), ctx.F(n)),
           Comparison(f'G_{2 * n}(q) at q=1', ctx.Gq(n).evaluate_at_q1(), ctx.G(n)),
           Comparison(f'H_{2 * n + 1}(q) at q=1', ctx.Hq(n).evaluate_at_q1(), ctx.H(n)),
           Comparison(f'L(s^{n}) at q=1', ctx.Lq(_s(n)).evaluate_at_q1(), ctx.L(_s(n))),
           Comparison(f'M(F_{2 * n + 1}) at q=1', ctx.Mq(ctx.Fq(2 * n + 1)).evaluate_at_q1(), ctx.M(ctx.F(2 * n + 1)))]
    out += [Comparison(f'[{n},{k}] at q=1', gb(n, k).evaluate_at_q1(), comb(n, k)) for k in range(n + 1)]
    return out


@dataclass(frozen=True)
class Identity:
    """Registry entry of one identity.

    Attributes
    ----------
    id: str
        Stable identifier used on the command line.
    description: str
    method: str
        ``'polynomial'``, ``'functional'`` or ``'series'``.
    family: str
        ``'classical'`` or ``'q'``; selects the profile ranges.
    check: callable
        Function of the context and the parameters returning comparisons.
    parameter: str
        ``'n'``, ``'order'``, ``'m'`` or ``'n,m'``.
    n_min: int
    cap: int, optional
        Largest admissible ``n`` or ``order``.
    m_range: tuple, optional
        Inclusive range of ``m``.
    excluded: tuple
        Values of ``n`` the identity does not hold for.
    upper: str, optional
        Profile key bounding ``n`` instead of ``<family>_n``.
    """
    id: str
    description: str
    method: str
    family: str
    check: Callable
    parameter: str = 'n'
    n_min: int = 0
    cap: Optional[int] = None
    m_range: Optional[tuple] = None
    excluded: tuple = ()
    upper: Optional[str] = None

    def upper_bound(self, settings: dict) -> int:
        key = self.upper or (f'{self.family}_order' if self.parameter == 'order' else f'{self.family}_n')
        bound = settings[key]
        return bound if self.cap is None else min(bound, self.cap)

    def grid(self, settings: dict) -> list:
        """Parameter sets covered by a run with ``settings``."""
        if self.parameter == 'order':
            return [{'order': self.upper_bound(settings)}]
        m_values = []
        if self.m_range is not None:
            m_values = list(range(self.m_range[0], min(self.m_range[1], settings.get('m_max', self.m_range[1])) + 1))
        if self.parameter == 'm':
            return [{'m': m} for m in m_values]
        n_values = [n for n in range(self.n_min, self.upper_bound(settings) + 1) if n not in self.excluded]
        if self.parameter == 'n':
            return [{'n': n} for n in n_values]
        return [{'n': n, 'm': m} for n in n_values for m in m_values]

    def validate(self, params: dict):
        """Raises :class:`ParamOutOfRange` unless ``params`` lies in the declared range."""
        expected = set(self.parameter.split(','))
        if set(params) != expected:
            raise ParamOutOfRange(f'{self.id} takes the parameters {sorted(expected)}, got {sorted(params)}')
        for key, value in params.items():
            if not isinstance(value, int):
                raise ParamOutOfRange(f'{self.id}: {key} must be an integer, got {value!r}')
        if 'order' in params and not 0 <= params['order'] <= (self.cap or CLASSICAL_CAP):
            raise ParamOutOfRange(f'{self.id}: order must lie in 0..{self.cap}, got {params["order"]}')
        if 'n' in params:
            n = params['n']
            cap = self.cap or (CLASSICAL_CAP if self.family == 'classical' else Q_CAP)
            if n < self.n_min or n > cap or n in self.excluded:
                raise ParamOutOfRange(f'{self.id}: n must lie in {self.n_min}..{cap}'
                                      + (f' except {self.excluded}' if self.excluded else '') + f', got {n}')
        if 'm' in params and not self.m_range[0] <= params['m'] <= self.m_range[1]:
            raise ParamOutOfRange(f'{self.id}: m must lie in {self.m_range[0]}..{self.m_range[1]}, got {params["m"]}')


REGISTRY = {identity.id: identity for identity in [
    Identity('I1_1', 'exponential generating function of the Genocchi numbers', 'series', 'classical',
             check_genocchi_egf, 'order', cap=24),
    Identity('I1_REL', 'Genocchi numbers from Bernoulli numbers', 'polynomial', 'classical',
             check_genocchi_bernoulli, n_min=1),
    Identity('I1_6', 'reflection of the exponential Fibonacci generating function', 'series', 'classical',
             check_fib_egf, 'order', cap=16),
    Identity('I1_7', 'even and odd parts of the exponential Fibonacci generating function', 'series', 'classical',
             check_fib_egf_parts, 'order', cap=16),
    Identity('I1_9', 'L on even Fibonacci polynomials gives Genocchi numbers', 'functional', 'classical',
             check_L_even_fib, n_min=1),
    Identity('I1_10', 'L on Fibonacci polynomials gives the EGF coefficients', 'functional', 'classical',
             check_L_fib, excluded=(1,)),
    Identity('I1_11', 'even Fibonacci polynomials in the odd ones', 'polynomial', 'classical',
             check_even_fib_expansion, n_min=1),
    Identity('I2_2', 'M on odd Fibonacci polynomials gives Bernoulli numbers', 'functional', 'classical',
             check_M_odd_fib),
    Identity('I2_3', 'odd Fibonacci polynomials in the even ones', 'polynomial', 'classical',
             check_odd_fib_expansion),
    Identity('I2_4', 'symmetric Bernoulli sum', 'polynomial', 'classical', check_bernoulli_symmetric_sum),
    Identity('I2_5', 'alternating binomial sums of Fibonacci polynomials', 'polynomial', 'classical',
             check_alternating_fib_sum),
    Identity('I2_6', 'Bernoulli difference identity, odd form', 'polynomial', 'classical',
             check_bernoulli_difference, n_min=2),
    Identity('I2_7', 'Bernoulli difference identity, shifted form', 'polynomial', 'classical',
             check_bernoulli_shifted_difference, n_min=1),
    Identity('I2_9', 'reflection x -> 1-x under V', 'functional', 'classical', check_V_reflection,
             cap=20, upper='v_degree'),
    Identity('I3_34', 'partial sums along Seidel triangle rows', 'polynomial', 'classical',
             check_triangle_partial_sums, n_min=1),
    Identity('I3_56', 'Seidel triangle from L', 'functional', 'classical', check_triangle_functional, cap=6),
    Identity('I3_7', 'median Genocchi numbers from L', 'functional', 'classical', check_median_genocchi),
    Identity('I3_8', 'binomial transform of the EGF coefficients', 'functional', 'classical',
             check_binomial_transform),
    Identity('I3_9', 'Seidel identity for Genocchi numbers', 'polynomial', 'classical', check_seidel_identity),
    Identity('I3_10', 'median Genocchi numbers from Genocchi numbers', 'polynomial', 'classical',
             check_median_binomial),
    Identity('I3_11', 'ordinary generating function of the median Genocchi numbers', 'series', 'classical',
             check_median_generating_function, 'order', cap=20),
    Identity('I4_TRI', 'q-Seidel triangle from the q-functional L', 'functional', 'q',
             check_q_triangle_functional, n_min=1, cap=9, upper='q_rows'),
    Identity('I4_89', 'weighted partial sums along q-triangle rows', 'polynomial', 'q', check_q_triangle_sums,
             n_min=1),
    Identity('I4_12_14', 'q-functional L on s F_2n, F_2n and s^n', 'functional', 'q', check_q_functional_values,
             n_min=1),
    Identity('I4_15', 'alternating q-binomial sums of q-Fibonacci polynomials', 'polynomial', 'q',
             check_q_alternating_fib_sum, n_min=1),
    Identity('I4_17', 'q-Seidel identity', 'polynomial', 'q', check_q_seidel_identity, n_min=1),
    Identity('I4_18', 'shifted alternating q-binomial sums', 'polynomial', 'q', check_q_fib_shifted_sum,
             'n,m', cap=8, m_range=(-1, 3)),
    Identity('I4_19', 'q-Fibonacci recursion for every m', 'polynomial', 'q', check_q_fib_recursion, 'm',
             m_range=(-1, 6)),
    Identity('I4_20', 'q-median Genocchi numbers from q-Genocchi numbers', 'polynomial', 'q',
             check_q_median_genocchi, n_min=2),
    Identity('I4_21', 'generating function of the q-Genocchi numbers', 'series', 'q',
             check_q_median_generating_function, 'order', cap=12),
    Identity('I4_SM', 'Seidel matrices of the functional seeds', 'functional', 'q', check_seidel_matrix, cap=12),
    Identity('I4_26', 'q-analogue of the symmetric Bernoulli sum under M', 'functional', 'q',
             check_q_bernoulli_analogue, cap=12),
    Identity('I5_1', 'vanishing first-column sum', 'polynomial', 'q', check_first_column_vanishing, n_min=1),
    Identity('I5_2', 'q-Genocchi numbers from the first column', 'polynomial', 'q', check_first_column_genocchi,
             n_min=1),
    Identity('I5_3', 'q-Fibonacci addition formula', 'polynomial', 'q', check_q_fib_addition, 'n,m', cap=8,
             m_range=(0, 4)),
    Identity('I5_4', 'parity split of q-triangle entries', 'polynomial', 'q', check_q_triangle_split, n_min=1),
    Identity('I5_56', 'central q-binomial sums in q-Fibonacci polynomials', 'polynomial', 'q',
             check_central_binomial_q, 'n,m', cap=6, m_range=(-1, 3)),
    Identity('I5_78', 'central q-binomial sums with q -> 1/q', 'polynomial', 'q',
             check_central_binomial_q_inverse, 'n,m', cap=6, m_range=(-1, 3)),
    Identity('I5_9', 'central q-binomial sums of the first column', 'polynomial', 'q',
             check_central_binomial_triangle, 'n,m', cap=6, m_range=(-1, 3)),
    Identity('Q1_SPEC', 'q-objects at q = 1 against their classical counterparts', 'polynomial', 'q',
             check_q_equals_one, n_min=1),
]}


def get_identity(identity_id: str) -> Identity:
    try:
        return REGISTRY[identity_id]
    except KeyError:
        raise UnknownIdentity(f'unknown identity {identity_id!r}; known ids are {", ".join(REGISTRY)}') from None


def load_profile(profile: str = 'quick', path: Optional[str] = None) -> dict:
    """Reads the settings of a verification profile.

    The profile file has the columns ``profile``, ``Param``, ``Value`` and ``data_type``; values are
    cast according to ``data_type``.
    """
    if path is None:
        text = resources.files('qgenocchi').joinpath('data').joinpath('profiles.csv').read_text()
    else:
        with open(path, 'r') as csvfile:
            text = csvfile.read()
    settings = {}
    for row in DictReader(text.splitlines()):
        if row['profile'] != profile or row['Value'] is None:
            continue
        if row['data_type'] == 'int':
            settings[row['Param']] = int(row['Value'])
        elif row['data_type'] == 'string':
            settings[row['Param']] = str(row['Value'])
        else:
            raise ValueError('Profile data type not recognised.')
    if not settings:
        raise ValueError(f'unknown verification profile {profile!r}')
    return settings


def _evaluate(identity: Identity, params: dict, context: VerificationContext) -> IdentityCase:
    case = IdentityCase(identity.id, dict(params), identity.method)
    try:
        comparisons = identity.check(context, **params)
    except (ArithmeticError, ValueError, IndexError, KeyError) as error:
        case.status = 'fail'
        case.witness = f'error: {type(error).__name__}: {error}'
        return case
    plain = [c for c in comparisons if c.reading is None]
    readings = {}
    for c in comparisons:
        if c.reading is not None:
            readings.setdefault(c.reading, []).append(c)
    case.notes += [c.note for c in comparisons if c.note and c.holds]
    failed = [c for c in plain if not c.holds]
    if failed:
        case.status = 'fail'
        case.witness = failed[0].witness()
        return case
    if readings:
        holding = [name for name, group in readings.items() if all(c.holds for c in group)]
        if len(holding) == len(readings):
            case.notes.append(f'readings {", ".join(readings)} agree')
        elif holding:
            case.status = 'anomaly'
            broken = next(c for name, group in readings.items() if name not in holding
                          for c in group if not c.holds)
            case.notes.append(f'resolved reading {holding[0]}')
            case.witness = broken.witness()
        else:
            case.status = 'fail'
            case.witness = next(iter(readings.values()))[0].witness()
    return case


def _context_for(identity: Identity, params: dict, perturbation: Optional[Perturbation]) -> VerificationContext:
    settings = load_profile('quick')
    n = params.get('n', 0) + max(params.get('m', 0), 0)
    if identity.family == 'classical':
        settings['classical_n'] = max(settings['classical_n'], n + 1)
        settings['classical_order'] = max(settings['classical_order'], params.get('order', 0))
        settings['v_degree'] = max(settings['v_degree'], params.get('n', 0))
    else:
        settings['q_n'] = max(settings['q_n'], n + 1)
        settings['q_order'] = max(settings['q_order'], params.get('order', 0))
        settings['q_rows'] = max(settings['q_rows'], params.get('n', 0))
        settings['classical_n'] = max(settings['classical_n'], settings['q_n'])
    return VerificationContext.from_settings(settings, perturbation)


def verify_identity(identity_id: str, params: dict, context: Optional[VerificationContext] = None,
                    perturbation: Optional[Perturbation] = None) -> IdentityCase:
    """Checks one identity at one parameter set.

    Parameters
    ----------
    identity_id: str
        Registry id, for example ``'I2_4'``.
    params: dict
        Parameters, for example ``{'n': 3}`` or ``{'n': 2, 'm': -1}``.
    context: VerificationContext, optional
        Shared tables; a context sized for ``params`` is built when omitted.
    perturbation: Perturbation, optional
        Only used when ``context`` is omitted.

    Raises
    ------
    UnknownIdentity
        If the id is not registered.
    ParamOutOfRange
        If the parameters fall outside the declared range.
    """
    identity = get_identity(identity_id)
    identity.validate(params)
    context = context or _context_for(identity, params, perturbation)
    return _evaluate(identity, params, context)


class VerificationReport:
    """Ordered outcome of a verification run.

    Parameters
    ----------
    suite: str
        Profile name of the run.
    cases: list of IdentityCase
        Cases in registry order.
    elapsed: float, default 0
        Wall time of the run in seconds.
    notes: list of str, optional
        Run-level remarks, for example differences between published and computed tables.
    """

    def __init__(self, suite: str, cases: list, elapsed: float = 0.0, notes: Optional[list] = None):
        self.suite = suite
        self.cases = list(cases)
        self.elapsed = elapsed
        self.notes = list(notes or [])

    @property
    def totals(self) -> dict:
        return {status: sum(case.status == status for case in self.cases) for status in STATUSES}

    @property
    def failures(self) -> list:
        return [case for case in self.cases if case.status == 'fail']

    @property
    def anomalies(self) -> list:
        return [case for case in self.cases if case.status == 'anomaly']

    @property
    def exit_status(self) -> int:
        return 1 if self.failures else 0

    def to_dict(self, include_elapsed: bool = True) -> dict:
        data = {'suite': self.suite,
                'cases': [case.to_dict() for case in self.cases],
                'totals': self.totals,
                'notes': self.notes}
        if include_elapsed:
            data['elapsed'] = round(self.elapsed, 3)
        return data

    def to_json(self, include_elapsed: bool = True, indent: int = 2) -> str:
        return json.dumps(self.to_dict(include_elapsed), indent=indent) + '\n'

    def to_text(self) -> str:
        lines = [f'suite: {self.suite}']
        for case in self.cases:
            params = ' '.join(f'{key}={value}' for key, value in case.params.items())
            marker = {'pass': 'ok', 'fail': 'FAIL', 'anomaly': 'ANOMALY'}[case.status]
            line = f'{case.id:<9} {params:<12} {marker}'
            if case.witness:
                line += f'  {case.witness}'
            lines.append(line)
        lines += [f'note: {note}' for note in self.notes]
        totals = self.totals
        lines.append(f'totals: pass={totals["pass"]} fail={totals["fail"]} anomaly={totals["anomaly"]}')
        lines.append(f'elapsed: {self.elapsed:.3f} s')
        return '\n'.join(lines) + '\n'

    def summary(self) -> pd.DataFrame:
        """Counts of cases by status for each identity, in registry order."""
        records = [{'id': case.id, 'method': case.method, 'status': case.status} for case in self.cases]
        if not records:
            return pd.DataFrame(columns=['id', 'method', *STATUSES]).set_index('id')
        df = pd.DataFrame(records)
        summary = pd.crosstab([df['id'], df['method']], df['status']).reindex(columns=list(STATUSES), fill_value=0)
        order = list(dict.fromkeys(df['id']))
        summary = summary.reset_index().set_index('id').loc[order]
        summary.columns.name = None
        return summary

    def to_pickle(self, path: str):
        with open(path, 'wb') as f:
            dill.dump(self, f)

    @classmethod
    def read_pickle(cls, path: str) -> 'VerificationReport':
        with open(path, 'rb') as f:
            return dill.load(f)


def resolve_settings(profile: str = 'quick', max_n: Optional[int] = None, stacklevel: int = 2) -> dict:
    """Profile settings with an optional override of the largest ``n``, clamped to the supported caps."""
    settings = load_profile(profile)
    if max_n is not None:
        settings['classical_n'] = max_n
        settings['q_n'] = max_n
        settings['v_degree'] = max_n
    if settings['classical_n'] > CLASSICAL_CAP:
        warnings.warn(f'classical n clamped to {CLASSICAL_CAP}', Warning, stacklevel=stacklevel)
        settings['classical_n'] = CLASSICAL_CAP
    if settings['q_n'] > Q_CAP:
        warnings.warn(f'q n clamped to {Q_CAP}', Warning, stacklevel=stacklevel)
        settings['q_n'] = Q_CAP
    return settings


@timeit
def verify_all(profile: str = 'quick', ids: Optional[list] = None, jobs: int = 1, verbose: bool = False,
               max_n: Optional[int] = None, perturbation: Optional[Perturbation] = None) -> VerificationReport:
    """Runs every selected identity over the ranges of a profile.

    Parameters
    ----------
    profile: str, default 'quick'
        ``'quick'`` or ``'full'``, see ``qgenocchi/data/profiles.csv``.
    ids: list of str, optional
        Identity ids to run, all of them by default.
    jobs: int, default 1
        Number of worker threads.
    verbose: bool, default False
        Prints one progress line per case to the standard error.
    max_n: int, optional
        Overrides the largest ``n`` of the profile.
    perturbation: Perturbation, optional
        Perturbs a table before checking, for negative controls.

    Returns
    -------
    VerificationReport
        Cases in registry order.
    """
    start = perf_counter()
    if ids is not None and not ids:
        raise UnknownIdentity('the identity selection is empty')
    wanted = {get_identity(i).id for i in ids} if ids is not None else set(REGISTRY)
    identities = [identity for identity in REGISTRY.values() if identity.id in wanted]
    settings = resolve_settings(profile, max_n, stacklevel=4)
    context = VerificationContext.from_settings(settings, perturbation)
    plan = [(identity, params) for identity in identities for params in identity.grid(settings)]
    families = tuple(sorted({identity.family for identity in identities}))
    log(profile, f'Preparing tables for {len(plan)} cases', verbose)
    context.warm_up(families)

    def run(item):
        identity, params = item
        log(profile, f'Checking {identity.id} {params}', verbose)
        return _evaluate(identity, params, context)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            cases = list(executor.map(run, plan))
    else:
        cases = [run(item) for item in plan]

    notes = []
    if 'q' in families and context.q_triangle.num_rows >= 6:
        published = display_discrepancies(context.q_triangle, 'q_seidel_triangle')
        if published:
            warnings.warn(f'{len(published)} entries of the published q-Seidel triangle differ from the '
                          f'computed ones', Warning, stacklevel=3)
            notes += published
    report = VerificationReport(profile, cases, perf_counter() - start, notes)
    for case in report.anomalies:
        warnings.warn(f'{case.id} {case.params}: {"; ".join(case.notes)}', Warning, stacklevel=3)
    if report.failures:
        print(f'[{profile}] {len(report.failures)} failed cases', file=sys.stderr)
    return report
