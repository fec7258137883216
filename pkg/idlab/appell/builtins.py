"""Builtin Appell families, lambda = 1 throughout."""

from fractions import Fraction
from functools import lru_cache
from math import factorial

from idlab.appell import AppellFamily, family_polynomials, register_family
from idlab.exact.series import TruncatedSeries

STORED = 17


def _egf(series):
    return tuple(c * factorial(m) for m, c in enumerate(series.coefficients))


@lru_cache(maxsize=None)
def bernoulli_egf(count):
    """w / (e^w - 1)."""
    e = TruncatedSeries.exponential(count + 1)
    return _egf(((e - 1).shift_down(1)).invert())


@lru_cache(maxsize=None)
def euler_egf(count):
    """2 / (e^w + 1)."""
    e = TruncatedSeries.exponential(count)
    return _egf(((e + 1) * Fraction(1, 2)).invert())


def centered_monomial_egf(count):
    """e^{-w/2}."""
    return tuple(Fraction(-1, 2) ** m for m in range(count))


def centered_hermite_egf(count):
    """e^{-w/2 - w^2/2}."""
    shift = TruncatedSeries.exponential(count, Fraction(-1, 2))
    gauss = TruncatedSeries([Fraction(-1, 2) ** (m // 2) / factorial(m // 2) if m % 2 == 0 else 0
                             for m in range(count)])
    return _egf(shift * gauss)


def monomial_egf(count):
    """A(w) = 1, so F_n = x^n."""
    return (Fraction(1),) + (Fraction(0),) * (count - 1)


def _builtin(name, generator, parity):
    return register_family(AppellFamily(name, Fraction(1), generator(STORED), parity, generator))


BERNOULLI = _builtin('bernoulli', bernoulli_egf, 'alternating')
EULER = _builtin('euler', euler_egf, 'alternating')
CENTERED_MONOMIAL = _builtin('centered_monomial', centered_monomial_egf, 'alternating')
CENTERED_HERMITE = _builtin('centered_hermite', centered_hermite_egf, 'alternating')
MONOMIAL = _builtin('monomial', monomial_egf, None)

# families the classical audit expects to satisfy all three axioms
AXIOM_FAMILIES = (BERNOULLI, EULER, CENTERED_MONOMIAL, CENTERED_HERMITE)


def bernoulli_number(m) -> Fraction:
    """B_m with B_1 = -1/2."""
    return bernoulli_egf(max(m + 1, STORED))[m]


def bernoulli_polynomial(n):
    return family_polynomials(BERNOULLI, n)[n]


def euler_polynomial(n):
    return family_polynomials(EULER, n)[n]
