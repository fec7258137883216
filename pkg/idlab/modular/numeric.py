"""
Numeric side of the period pipeline: q-expansions on the upper half-plane,
completed L-values of cusp forms and their period polynomials.

    Lambda(m) = int_0^oo f(it) t^{m-1} dt
              = sum_n a_n [G(m, 2 pi n)/(2 pi n)^m + (-1)^{k/2} G(k-m, 2 pi n)/(2 pi n)^{k-m}]

with G the upper incomplete gamma function at integer order. Summation order
is fixed (increasing n), so repeated runs give identical values.
"""

import cmath
import math
from fractions import Fraction
from math import comb

import numpy as np
from scipy import integrate
from sympy import divisor_count

from idlab.errors import NotCuspidal, InsufficientTruncation, OutOfDomain, TableTooShort, UnsupportedWeight
from idlab.modular import PolyMod, cuspform_dim, even_period_space, s_relation, three_term_standard
from idlab.report import EvalResult

MIN_IMAG = 0.5
TARGET = 1e-10
MIN_TRUNCATION = 10
TAIL_TERMS = 2000
TAIL_WINDOW = 50


def evaluate_qexp(f, tau) -> complex:
    """sum a_n e^{2 pi i n tau} by Horner's rule in q."""
    q = cmath.exp(2j * math.pi * complex(tau))
    total = 0j
    for a in reversed(f.coefficients):
        total = total * q + float(a)
    return total


def _growth_constant(f):
    return max((abs(float(a)) / n ** f.weight for n, a in enumerate(f.coefficients[1:], 1)), default=0.0)


def tail_bound(f, imag) -> float:
    """Bound on |sum_{n > N} a_n q^n| at Im tau = imag, assuming |a_n| <= C n^k."""
    C = _growth_constant(f)
    if C == 0:
        return 0.0
    n = np.arange(f.truncation + 1, f.truncation + 1 + TAIL_TERMS, dtype=np.float64)
    logs = math.log(C) + f.weight * np.log(n) - 2 * math.pi * imag * n
    return float(np.sum(np.exp(logs)))


def modularity_check_numeric(f, samples, target=TARGET) -> EvalResult:
    """max over tau of |f(-1/tau) - tau^k f(tau)| / |tau^k f(tau)|."""
    worst = 0.0
    worst_bound = 0.0
    for tau in samples:
        tau = complex(tau)
        if tau.imag < MIN_IMAG:
            raise OutOfDomain(f"sample {tau} has imaginary part below {MIN_IMAG}")
        inverted = -1 / tau
        lhs = evaluate_qexp(f, inverted)
        rhs = tau ** f.weight * evaluate_qexp(f, tau)
        size = abs(rhs)
        bound = (tail_bound(f, inverted.imag) + abs(tau) ** f.weight * tail_bound(f, tau.imag)) / size
        if bound > target:
            raise InsufficientTruncation(
                f"{f.name} truncated at q^{f.truncation}: tail bound {bound:.3e} exceeds {target:.1e} at tau={tau}")
        worst = max(worst, abs(lhs - rhs) / size)
        worst_bound = max(worst_bound, bound)
    return EvalResult(worst, worst_bound, {'function': 'modularity', 'form': f.name, 'truncation': f.truncation})


def upper_gamma_int(j, x) -> float:
    """Gamma(j, x) = (j-1)! e^{-x} sum_{i<j} x^i / i! for integer j >= 1."""
    term = 1.0
    total = 1.0
    for i in range(1, j):
        term *= x / i
        total += term
    return math.factorial(j - 1) * math.exp(-x) * total


def _kernel(n, k, m):
    x = 2 * math.pi * n
    sign = -1 if (k // 2) % 2 else 1
    return upper_gamma_int(m, x) / x ** m + sign * upper_gamma_int(k - m, x) / x ** (k - m)


def _check_cusp_form(f, k):
    if not f.is_cuspidal:
        raise NotCuspidal(f"{f.name} has constant term {f.coefficients[0]}; its period integral diverges")
    if k % 2 or k < 4:
        raise UnsupportedWeight(f"weight {k} must be even and >= 4")


def _truncation(f, N):
    N = f.truncation if N is None else N
    if N < MIN_TRUNCATION:
        raise OutOfDomain(f"truncation {N} is below {MIN_TRUNCATION}")
    if N > f.truncation:
        raise TableTooShort(f"{f.name} is only known through q^{f.truncation}")
    return N


def deligne_bound(n, k) -> float:
    """|a_n| <= d(n) n^{(k-1)/2} for the normalized Hecke eigenform of weight k."""
    return int(divisor_count(n)) * n ** ((k - 1) / 2)


def _remainder_bound(M, k, scale):
    """
    Bound on sum_{n > M} |a_n kernel(n)| for a_n = scale * tau_k(n), using
    d(n) <= 2 sqrt(n) and Gamma(j, x) <= x^{j-1} e^{-x} / (1 - (j-1)/x).
    Successive terms then shrink by at most e^{-2 pi} (1 + 1/(M+1))^{k/2}.
    """
    x = 2 * math.pi * (M + 1)
    p = k / 2
    ratio = math.exp(-2 * math.pi) * (1 + 1 / (M + 1)) ** p
    return scale * 4 / (x - k) * (M + 1) ** p * math.exp(-x) / (1 - ratio)


def _tail(f, k, m, N):
    if cuspform_dim(k) != 1:
        # growth constant fitted to the known coefficients: an estimate only
        C = _growth_constant(f)
        return math.fsum(C * n ** k * abs(_kernel(n, k, m)) for n in range(N + 1, N + TAIL_WINDOW + 1)), 'fitted'
    # S_k is spanned by one eigenform, so f = a_1 times it
    scale = abs(float(f[1]))
    M = N + TAIL_WINDOW
    window = math.fsum(scale * deligne_bound(n, k) * abs(_kernel(n, k, m)) for n in range(N + 1, M + 1))
    return window + _remainder_bound(M, k, scale), 'deligne'


def completed_L(f, k, m, N=None) -> EvalResult:
    """
    Lambda(m) from the first N coefficients of a cusp form.

    When S_k is one-dimensional the error estimate bounds the whole tail
    through Deligne's bound. Otherwise it extrapolates the largest
    |a_n| / n^k seen so far, which is an estimate and not a bound.
    """
    _check_cusp_form(f, k)
    if not 1 <= m <= k - 1:
        raise OutOfDomain(f"m={m} outside the critical range 1..{k - 1}")
    N = _truncation(f, N)
    value = math.fsum(float(f[n]) * _kernel(n, k, m) for n in range(1, N + 1))
    error, tail = _tail(f, k, m, N)
    return EvalResult(value, error, {'function': 'completed_L', 'form': f.name, 'k': k, 'm': m, 'truncation': N,
                                     'tail': tail})


def completed_L_quadrature(f, k, m) -> float:
    """Lambda(m) by adaptive quadrature of int_1^oo f(it) (t^{m-1} + (-1)^{k/2} t^{k-m-1}) dt."""
    _check_cusp_form(f, k)
    sign = -1 if (k // 2) % 2 else 1
    coefficients = [(n, float(a)) for n, a in enumerate(f.coefficients) if a != 0]

    def integrand(t):
        ft = math.fsum(a * math.exp(-2 * math.pi * n * t) for n, a in coefficients)
        return ft * (t ** (m - 1) + sign * t ** (k - m - 1))

    value, _ = integrate.quad(integrand, 1, np.inf, epsabs=0, epsrel=1e-13, limit=200)
    return value


def critical_l_value(f, k, m, N=None) -> EvalResult:
    """L(f, m) = (2 pi)^m Lambda(m) / Gamma(m)."""
    completed = completed_L(f, k, m, N)
    scale = (2 * math.pi) ** m / math.factorial(m - 1)
    return EvalResult(scale * completed.value, scale * completed.error_estimate,
                      dict(completed.parameters, function='critical_l_value'))


def period_polynomial_numeric(f, k, N=None) -> PolyMod:
    """r_f(z) = i sum_m binom(w, m) i^m (-z)^{w-m} Lambda(m+1), w = k - 2."""
    _check_cusp_form(f, k)
    w = k - 2
    coeffs = [0j] * (w + 1)
    error = 0.0
    for m in range(w + 1):
        L = completed_L(f, k, m + 1, N)
        sign = -1 if (w - m) % 2 else 1
        coeffs[w - m] = 1j * comb(w, m) * (1j ** m) * sign * L.value
        error = max(error, comb(w, m) * L.error_estimate)
    return PolyMod(w, coeffs, error)


def relation_residuals(r: PolyMod, k) -> tuple[float, float]:
    """Relative max-norm residuals of r under 1 + U + U^2 and 1 + S."""
    size = r.max_norm
    return three_term_standard(r, k).max_norm / size, s_relation(r).max_norm / size


def projection(P: PolyMod, space) -> tuple[np.ndarray, float]:
    """Least-squares coordinates of P in the complexified basis, and the relative residual."""
    basis = np.array([[complex(c) for c in b.coefficients] for b in space.basis]).T
    target = np.array(P.coefficients, dtype=complex)
    coords, *_ = np.linalg.lstsq(basis, target, rcond=None)
    residual = float(np.linalg.norm(basis @ coords - target) / np.linalg.norm(target))
    return coords, residual


def even_period_ratio(f, k, N=None, max_denominator=10 ** 6) -> EvalResult:
    """
    Ratio of the first two coordinates of the even part of r_f in the exact
    even period basis, with its best rational approximation under the
    denominator bound in the parameters.
    """
    space = even_period_space(k)
    if space.dimension < 2:
        raise UnsupportedWeight(f"even period space of weight {k} has dimension {space.dimension}")
    r = period_polynomial_numeric(f, k, N)
    coords, residual = projection(r.even_part(), space)
    ratio = coords[0] / coords[1]
    guess = Fraction(ratio.real).limit_denominator(max_denominator)
    return EvalResult(ratio.real, residual, {
        'function': 'even_period_ratio', 'form': f.name, 'k': k, 'truncation': N or f.truncation,
        'rational': str(guess), 'imaginary_part': ratio.imag, 'projection_residual': residual,
    })
