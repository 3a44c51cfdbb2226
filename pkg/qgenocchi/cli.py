"""Command line front end: ``qgenocchi gen``, ``qgenocchi verify`` and ``qgenocchi functional``.

Results go to the standard output (or to ``--output``), diagnostics to the standard error. Exit status
is 0 on success, 1 when a verified identity fails and 2 on usage errors.
"""
import argparse
import json
import sys
from typing import Optional

import pandas as pd

from qgenocchi.algebra import SLaurent
from qgenocchi.exceptions import (CoefficientRingMismatch, DegreeExceedsTable, NegativeOffset,
                                  NonUnitLeadingCoefficient, ParamOutOfRange, ParseError, UnknownIdentity)
from qgenocchi.fib import FibFamily
from qgenocchi.functional import make_L, make_Lq, make_M, make_Mq, make_V
from qgenocchi.grammar import parse_polynomial, render
from qgenocchi.tables import (IndexedSequence, a_matrix, bernoulli, genocchi, latex_inline, median_genocchi,
                              q_genocchi, q_median_genocchi, q_seidel_triangle, seidel_triangle)
from qgenocchi.verify import VerificationReport, verify_all, verify_identity

GEN_KINDS = ('genocchi', 'bernoulli', 'median', 'triangle', 'fib', 'a-matrix', 'm-values')
FORMATS = ('text', 'json', 'csv', 'latex')
CLASSICAL_BOUND = 200
Q_BOUND = 60
FUNCTIONALS = {'L': make_L, 'M': make_M, 'Lq': make_Lq, 'Mq': make_Mq}
FUNCTIONAL_FAMILIES = {'L': 'classical', 'M': 'classical', 'V': 'classical', 'Lq': 'q-inverse', 'Mq': 'q'}
USAGE_ERRORS = (UnknownIdentity, ParamOutOfRange, DegreeExceedsTable, ParseError, NegativeOffset,
                NonUnitLeadingCoefficient, CoefficientRingMismatch)


class UsageError(Exception):
    """Invalid combination of command line flags."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='qgenocchi',
                                     description='Exact Genocchi, Bernoulli and q-Fibonacci computations.')
    commands = parser.add_subparsers(dest='command', required=True)

    gen = commands.add_parser('gen', help='Generate a number sequence, a triangle or a polynomial.')
    gen.add_argument('kind', choices=GEN_KINDS, help='What to generate.')
    gen.add_argument('--n', type=int, default=8, help='Number of terms, or the index of a polynomial (default: 8).')
    gen.add_argument('--rows', type=int, default=None, help='Rows of a triangle (default: 2n - 1).')
    gen.add_argument('--q', action='store_true', help='Generate the q-analogue.')
    gen.add_argument('--inv-q', action='store_true', dest='inv_q',
                     help='With --q and fib: the polynomials F_n(s, 1/q).')
    gen.add_argument('--format', choices=FORMATS, default='text', help='Output format (default: text).')
    gen.add_argument('--output', default=None, help='Write to this file instead of the standard output.')

    verify = commands.add_parser('verify', help='Verify identities exactly.')
    target = verify.add_mutually_exclusive_group(required=True)
    target.add_argument('--id', dest='identity', help='Identity id, for example I2_4.')
    target.add_argument('--all', action='store_true', help='Verify every registered identity.')
    verify.add_argument('--n', type=int, default=None, help='Check a single n (with --id).')
    verify.add_argument('--m', type=int, default=None, help='Check a single m (with --id).')
    verify.add_argument('--order', type=int, default=None, help='Truncation order of a series identity (with --id).')
    verify.add_argument('--max-n', type=int, default=None, dest='max_n', help='Largest n of every range.')
    verify.add_argument('--profile', choices=('quick', 'full'), default='quick', help='Range profile (default: quick).')
    verify.add_argument('--format', choices=('json', 'text'), default='json', help='Report format (default: json).')
    verify.add_argument('--jobs', type=int, default=1, help='Worker threads (default: 1).')
    verify.add_argument('--verbose', action='store_true', help='Print progress to the standard error.')
    verify.add_argument('--output', default=None, help='Write to this file instead of the standard output.')

    functional = commands.add_parser('functional', help='Apply a linear functional to a polynomial.')
    functional.add_argument('--name', choices=('L', 'M', 'V', 'Lq', 'Mq'), required=True)
    source = functional.add_mutually_exclusive_group(required=True)
    source.add_argument('--poly', help='Polynomial in the canonical grammar, for example "1 + 2*s".')
    source.add_argument('--poly-fib', type=int, dest='poly_fib',
                        help='Index k of the Fibonacci polynomial F_k of the matching family.')
    functional.add_argument('--table-size', type=int, default=12, dest='table_size',
                            help='Largest tabulated degree (default: 12).')
    functional.add_argument('--output', default=None, help='Write to this file instead of the standard output.')
    return parser


def _check_bound(value: int, q: bool, name: str = 'n', lowest: int = 0):
    bound = Q_BOUND if q else CLASSICAL_BOUND
    if not lowest <= value <= bound:
        raise UsageError(f'--{name} must lie in {lowest}..{bound}{" with --q" if q else ""}, got {value}')


def _polynomial_output(n: int, p: SLaurent, ring: str, fmt: str) -> str:
    if fmt == 'text':
        return render(p) + '\n'
    if fmt == 'json':
        data = {'kind': 'fibonacci', 'coefficient_ring': ring, 'n': n, 'value': render(p),
                'coefficients': {str(k): render(c) for k, c in p.items()}}
        return json.dumps(data, indent=2) + '\n'
    if fmt == 'csv':
        df = pd.DataFrame({'power': [k for k, _ in p.items()], 'coefficient': [render(c) for _, c in p.items()]})
        return df.to_csv(index=False)
    return latex_inline(render(p)) + '\n'


def _m_values(n: int, q: bool) -> IndexedSequence:
    family = FibFamily('q' if q else 'classical')
    functional = make_Mq(max(n - 1, 0)) if q else make_M(max(n - 1, 0))
    values = [functional(family[2 * k + 1]) for k in range(n)]
    return IndexedSequence(values, 'm_values', 'Q(q)' if q else 'Q', 1, 2)


def run_gen(args) -> str:
    """Renders the requested sequence, triangle or polynomial."""
    if args.inv_q and not args.q:
        raise UsageError('--inv-q requires --q')
    if args.inv_q and args.kind != 'fib':
        raise UsageError('--inv-q only applies to fib')
    if args.q and args.kind in ('bernoulli', 'a-matrix'):
        raise UsageError(f'{args.kind} has no q-analogue')
    _check_bound(args.n, args.q, lowest=-1 if args.kind == 'fib' else 0)
    if args.kind == 'fib':
        kind = 'q-inverse' if args.inv_q else 'q' if args.q else 'classical'
        p = FibFamily(kind)[args.n]
        return _polynomial_output(args.n, p, 'Z[q,q^-1]' if args.q else 'Z', args.format)
    if args.kind == 'triangle':
        rows = args.rows if args.rows is not None else max(2 * args.n - 1, 1)
        if not 1 <= rows <= 2 * (Q_BOUND if args.q else CLASSICAL_BOUND):
            raise UsageError(f'--rows must lie in 1..{2 * (Q_BOUND if args.q else CLASSICAL_BOUND)}, got {rows}')
        table = q_seidel_triangle(rows) if args.q else seidel_triangle(rows)
    elif args.kind == 'a-matrix':
        if args.n < 1:
            raise UsageError('--n must be positive for a-matrix')
        table = a_matrix(args.n)
    elif args.kind == 'genocchi':
        if args.n < 1:
            raise UsageError('--n must be positive for genocchi')
        table = q_genocchi(args.n) if args.q else genocchi(args.n)
    elif args.kind == 'median':
        if args.q:
            if args.n < 1:
                raise UsageError('--n must be positive for median --q')
            table = q_median_genocchi(args.n)
        else:
            table = median_genocchi(args.n)
    elif args.kind == 'bernoulli':
        table = bernoulli(args.n)
    else:
        table = _m_values(args.n, args.q)
    if args.format == 'text':
        return table.to_text()
    if args.format == 'json':
        return table.to_json()
    if args.format == 'csv':
        return table.to_csv()
    return table.to_latex()


def run_functional(args) -> str:
    """Applies L, M, V, Lq or Mq and renders the exact value."""
    if args.table_size < 0:
        raise UsageError(f'--table-size must be nonnegative, got {args.table_size}')
    variable = 'x' if args.name == 'V' else 's'
    if args.name == 'V':
        functional = make_V(bernoulli(args.table_size))
    else:
        functional = FUNCTIONALS[args.name](args.table_size)
    if args.poly is not None:
        p = parse_polynomial(args.poly, variable)
    else:
        if args.poly_fib < -1:
            raise UsageError(f'--poly-fib must be at least -1, got {args.poly_fib}')
        fib = FibFamily(FUNCTIONAL_FAMILIES[args.name])[args.poly_fib]
        p = SLaurent(fib.coefficients, fib.offset, variable)
    try:
        value = functional(p)
    except DegreeExceedsTable as error:
        raise DegreeExceedsTable(f'{error}; pass a larger --table-size') from error
    return render(value) + '\n'


def run_verify(args):
    """Runs the verification and returns the rendered report with the exit status."""
    single = {key: getattr(args, key) for key in ('n', 'm', 'order') if getattr(args, key) is not None}
    if single and args.all:
        raise UsageError('--n, --m and --order require --id')
    if args.jobs < 1:
        raise UsageError(f'--jobs must be positive, got {args.jobs}')
    if single:
        case = verify_identity(args.identity, single)
        report = VerificationReport('single', [case])
    else:
        ids = None if args.all else [args.identity]
        report = verify_all(args.profile, ids, jobs=args.jobs, verbose=args.verbose, max_n=args.max_n)
    text = report.to_json() if args.format == 'json' else report.to_text()
    return text, report.exit_status


def _write(text: str, output: Optional[str]):
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, 'w') as f:
            f.write(text)


def main(argv: Optional[list] = None) -> int:
    """Entry point of the ``qgenocchi`` command; returns the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as error:
        return error.code if isinstance(error.code, int) else 2
    status = 0
    try:
        if args.command == 'gen':
            text = run_gen(args)
        elif args.command == 'functional':
            text = run_functional(args)
        else:
            text, status = run_verify(args)
    except UsageError as error:
        print(f'qgenocchi {args.command}: error: {error}', file=sys.stderr)
        return 2
    except USAGE_ERRORS as error:
        print(f'qgenocchi {args.command}: error: {error}', file=sys.stderr)
        return 2
    _write(text, args.output)
    return status


if __name__ == '__main__':
    sys.exit(main())
