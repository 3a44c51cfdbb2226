from .algebra import QLaurent, QRatFn, SLaurent, TruncSeries, gaussian_binomial, q_integer
from .fib import FibFamily, fib_poly, q_fib_poly, q_fib_poly_inv
from .functional import GradedBasis, LinearFunctional, make_L, make_Lq, make_M, make_Mq, make_V
from .grammar import parse, parse_polynomial, render
from .tables import (IndexedMatrix, IndexedSequence, NumberTable, QSeidelMatrix, SeidelTriangle, a_matrix,
                     bernoulli, genocchi, median_genocchi, q_genocchi, q_median_genocchi, q_seidel_triangle,
                     seidel_triangle)
from .verify import REGISTRY, Perturbation, VerificationReport, verify_all, verify_identity
