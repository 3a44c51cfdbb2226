"""Exceptions raised by qgenocchi.

Every error derives from the closest builtin exception, so callers that only know about
``ValueError``, ``ZeroDivisionError`` and friends can still catch them.
"""


class DenominatorVanishes(ZeroDivisionError):
    """A rational function in q was evaluated at a root of its denominator."""


class NonInvertibleConstantTerm(ZeroDivisionError):
    """A truncated series was divided by a series whose constant term is not a unit."""


class NonUnitDivision(ArithmeticError):
    """An element was divided by a non-unit inside a ring that cannot represent the quotient."""


class IndexOutOfRange(IndexError):
    """A Fibonacci index below -1 was requested."""


class NonUnitLeadingCoefficient(ArithmeticError):
    """A graded basis polynomial has a leading coefficient that is not invertible in the value ring."""


class DegreeExceedsTable(ValueError):
    """A polynomial has a larger degree than the monomial table of a linear functional."""


class NegativeOffset(ValueError):
    """A polynomial carries negative powers of s where only polynomials are accepted."""


class SeedTooShort(ValueError):
    """A Seidel matrix was requested deeper than its seed sequence allows."""


class UnknownIdentity(KeyError):
    """An identity id is not part of the verification registry."""

    def __str__(self):
        return str(self.args[0]) if self.args else 'Unknown identity.'


class ParamOutOfRange(ValueError):
    """Parameters passed to an identity check fall outside the declared registry range."""


class ParseError(ValueError):
    """A string does not follow the canonical text grammar."""


class CoefficientRingMismatch(ValueError):
    """A polynomial has coefficients outside the ring a functional takes its values in."""
