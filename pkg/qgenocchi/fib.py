"""Fibonacci polynomials and their q-analogues."""
import threading
from math import comb
from types import MappingProxyType
from typing import Optional

from qgenocchi.algebra import QLaurent, SLaurent, gaussian_binomial
from qgenocchi.exceptions import IndexOutOfRange


class FibFamily:
    """Cached sequence :math:`F_{-1}, F_0, F_1, \\dots` of Fibonacci polynomials in ``s``.

    The three families share the recursion

    .. math::

        F_n = F_{n-1} + w_n \\, s \\, F_{n-2}, \\qquad F_0 = 0,

    and differ by the weight :math:`w_n` and the value of :math:`F_{-1}`:

    ============== =================== ======================
    kind           :math:`w_n`         :math:`F_{-1}`
    ============== =================== ======================
    ``classical``  1                   :math:`s^{-1}`
    ``q``          :math:`q^{n-3}`     :math:`q^2 s^{-1}`
    ``q-inverse``  :math:`q^{3-n}`     :math:`q^{-2} s^{-1}`
    ============== =================== ======================

    The ``q-inverse`` family is the ``q`` family with ``q`` replaced by ``1/q``. All three give
    :math:`F_1 = 1`.

    Parameters
    ----------
    kind: str, default 'classical'
        One of ``'classical'``, ``'q'`` or ``'q-inverse'``.

    Attributes
    ----------
    kind: str
        Family of polynomials.
    polys: list of SLaurent
        Polynomials computed so far, ``polys[n + 1]`` holding :math:`F_n`.

    Examples
    --------
    >>> str(FibFamily('q')[5])
    '1 + (1+q+q^2)*s + q^2*s^2'
    """
    KINDS = ('classical', 'q', 'q-inverse')

    def __init__(self, kind: str = 'classical'):
        if kind not in self.KINDS:
            raise ValueError(f'unknown Fibonacci family {kind!r}, expected one of {self.KINDS}')
        self.kind = kind
        self._lock = threading.Lock()
        if kind == 'classical':
            self.polys = [SLaurent.monomial(1, -1), SLaurent(), SLaurent.constant(1)]
        elif kind == 'q':
            self.polys = [SLaurent.monomial(QLaurent.q(2), -1), SLaurent(), SLaurent.constant(QLaurent.one())]
        else:
            self.polys = [SLaurent.monomial(QLaurent.q(-2), -1), SLaurent(), SLaurent.constant(QLaurent.one())]

    def weight(self, n: int):
        """Weight multiplying :math:`s F_{n-2}` in the recursion."""
        if self.kind == 'classical':
            return 1
        return QLaurent.q(n - 3 if self.kind == 'q' else 3 - n)

    def poly(self, n: int) -> SLaurent:
        """Returns :math:`F_n`, extending the cache as needed.

        Raises
        ------
        IndexOutOfRange
            If ``n < -1``.
        """
        if n < -1:
            raise IndexOutOfRange(f'Fibonacci polynomials are defined for n >= -1, got {n}')
        if len(self.polys) < n + 2:
            s = SLaurent.monomial(1, 1)
            with self._lock:
                while len(self.polys) < n + 2:
                    m = len(self.polys) - 1
                    self.polys.append(self.polys[m] + (s * self.weight(m)) * self.polys[m - 1])
        return self.polys[n + 1]

    __getitem__ = poly

    def closed_form(self, n: int) -> SLaurent:
        """Evaluates :math:`F_n` from its explicit coefficient formula for ``n >= 0``."""
        if n < 0:
            raise IndexOutOfRange(f'the explicit formula holds for n >= 0, got {n}')
        coefficients = []
        for k in range((n - 1) // 2 + 1 if n > 0 else 0):
            if self.kind == 'classical':
                coefficients.append(comb(n - k - 1, k))
            elif self.kind == 'q':
                coefficients.append(QLaurent.q(k * (k - 1)) * gaussian_binomial(n - 1 - k, k))
            else:
                coefficients.append(QLaurent.q(k * k + 2 * k - n * k) * gaussian_binomial(n - 1 - k, k))
        return SLaurent(coefficients)

    def specialize_q1(self, n: int) -> SLaurent:
        """Returns :math:`F_n` at ``q = 1``, the classical polynomial for every family."""
        return self.poly(n).evaluate_at_q1()

    def recursion_residual(self, n: int) -> SLaurent:
        """Returns :math:`F_n - F_{n-1} - w_n s F_{n-2}`, zero for every ``n >= 1``."""
        s = SLaurent.monomial(1, 1)
        return self.poly(n) - self.poly(n - 1) - (s * self.weight(n)) * self.poly(n - 2)


# One shared family per kind; each guards its own cache with a lock.
_FAMILIES = MappingProxyType({kind: FibFamily(kind) for kind in FibFamily.KINDS})


def _family(kind: str) -> FibFamily:
    return _FAMILIES[kind]


def fib_poly(n: int, family: Optional[FibFamily] = None) -> SLaurent:
    """Classical Fibonacci polynomial :math:`F_n(s)` with :math:`F_{-1} = 1/s`.

    Examples
    --------
    >>> str(fib_poly(5))
    '1 + 3*s + s^2'
    """
    return (family or _family('classical')).poly(n)


def q_fib_poly(n: int) -> SLaurent:
    """q-Fibonacci polynomial :math:`F_n(s, q)` with :math:`F_{-1} = q^2/s`."""
    return _family('q').poly(n)


def q_fib_poly_inv(n: int) -> SLaurent:
    """q-Fibonacci polynomial :math:`F_n(s, 1/q)`, computed by its own recursion."""
    return _family('q-inverse').poly(n)
