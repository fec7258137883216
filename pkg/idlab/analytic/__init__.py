"""
Analytic Bernoulli functions in double precision.

    B(s; x) = -s zeta(1 - s, x)
    A(s; x) = -Gamma(s + 1)/(2 pi)^s * 2 Im(e^{-i pi s/2} Li_s(e^{2 pi i x}))

zeta is Hurwitz's: exact at nonpositive integers, through the functional
equation for other s <= -1 and by Euler-Maclaurin summation with exact
Bernoulli coefficients elsewhere. Li_s on the unit circle is summed directly,
for s >= 1.25 only. Every error estimate covers truncation and a
first-order rounding bound.
"""

import cmath
import logging
import math
import sys
from fractions import Fraction
from functools import lru_cache

import numpy as np

from idlab.appell.builtins import bernoulli_number, bernoulli_polynomial
from idlab.cyclic import bracket_sum
from idlab.errors import AccuracyUnreachable, NearPole, NonConvergent, OutOfDomain, PoleAtOne
from idlab.exact import generalized_binomial
from idlab.report import DefectReport, EvalResult

DEPTH = 15
NEAR_POLE = 1e-3
POLYLOG_MIN_S = 1.25
POLYLOG_CEILING = 10 ** 7
CHUNK = 1 << 16
STIRLING_SHIFT = 15.0
STIRLING_DEPTH = 10
FUNCTIONAL_TOL = 1e-14
EPS = sys.float_info.epsilon

EXACT = 'exact'
FUNCTIONAL = 'functional'
EULER_MACLAURIN = 'euler_maclaurin'


def default_shift(s) -> int:
    """Euler-Maclaurin shift N for a given s."""
    if s <= 0 and s == int(s):
        # the correction series terminates
        return 0
    if s < 0:
        return 10
    return 30


@lru_cache(maxsize=None)
def _em_coefficients(count):
    """B_{2j}/(2j)! for j = 1..count as floats."""
    return tuple(float(bernoulli_number(2 * j) / math.factorial(2 * j)) for j in range(1, count + 1))


@lru_cache(maxsize=None)
def _stirling_coefficients(count):
    return tuple(float(bernoulli_number(2 * j) / (2 * j * (2 * j - 1))) for j in range(1, count + 1))


def gamma_stirling(x) -> float:
    """Gamma(x) for real x > 0: shift up by the recurrence, then the Stirling series."""
    x = float(x)
    if x <= 0:
        raise OutOfDomain(f"gamma_stirling needs x > 0, got {x}")
    shift = 1.0
    z = x
    while z < STIRLING_SHIFT:
        shift *= z
        z += 1.0
    series = math.fsum(c / z ** (2 * j - 1) for j, c in enumerate(_stirling_coefficients(STIRLING_DEPTH), 1))
    log_gamma = (z - 0.5) * math.log(z) - z + 0.5 * math.log(2 * math.pi) + series
    return math.exp(log_gamma) / shift


def hurwitz_zeta(s, x, shift=None, depth=DEPTH, method=None) -> EvalResult:
    """
    zeta(s, x) = sum (n + x)^{-s}, continued to s != 1.

    Nonpositive integer s is exact, -B_{n+1}(x)/(n+1). Other s <= -1 goes
    through the functional equation and Li_{1-s} on the unit circle.
    Everything else, and any call that fixes shift or depth, is
    Euler-Maclaurin summation.
    """
    s, x = float(s), float(x)
    if s == 1.0:
        raise PoleAtOne("the Hurwitz zeta function has its pole at s = 1")
    if x <= 0:
        raise OutOfDomain(f"hurwitz_zeta needs x > 0, got {x}")
    if method is None:
        if shift is not None or depth != DEPTH:
            method = EULER_MACLAURIN
        elif s <= 0 and s == int(s):
            method = EXACT
        elif s <= -1:
            method = FUNCTIONAL
        else:
            method = EULER_MACLAURIN
    if method == EXACT:
        return _hurwitz_exact(s, x)
    if method == FUNCTIONAL:
        return _hurwitz_functional(s, x)
    if method != EULER_MACLAURIN:
        raise OutOfDomain(f"unknown hurwitz_zeta method {method!r}")
    return _hurwitz_euler_maclaurin(s, x, default_shift(s) if shift is None else shift, depth)


def _hurwitz_exact(s, x):
    n = int(-s)
    value = -float(bernoulli_polynomial(n + 1).substitute({'x': Fraction(x)})) / (n + 1)
    return EvalResult(value, 2 * EPS * abs(value), {'function': 'hurwitz_zeta', 's': s, 'x': x, 'method': EXACT})


def _hurwitz_euler_maclaurin(s, x, N, depth):
    a = N + x
    terms = [(n + x) ** -s for n in range(N)]
    terms.append(a ** (1 - s) / (s - 1))
    terms.append(a ** -s / 2)

    corrections = []
    rising = s
    for j, c in enumerate(_em_coefficients(depth + 1), 1):
        corrections.append(c * rising * a ** (-s - 2 * j + 1))
        rising *= (s + 2 * j - 1) * (s + 2 * j)
    omitted = abs(corrections.pop())
    if len(corrections) >= 2 and corrections[-1] != 0 and abs(corrections[-1]) > abs(corrections[-2]):
        raise NonConvergent(f"Euler-Maclaurin corrections grow at s={s}, x={x}, N={N}, J={depth}")

    value = math.fsum(terms + corrections)
    # each term carries a few ulps from pow; fsum adds nothing
    rounding = 4 * EPS * math.fsum(abs(t) for t in terms + corrections)
    return EvalResult(value, omitted + rounding,
                      {'function': 'hurwitz_zeta', 's': s, 'x': x, 'method': EULER_MACLAURIN,
                       'shift': N, 'depth': depth})


def _hurwitz_functional(s, x):
    """
    zeta(1 - t, x) = 2 Gamma(t)/(2 pi)^t Re(e^{-i pi t/2} Li_t(e^{2 pi i x})) for 0 < x < 1,
    zeta(1 - t) = 2 Gamma(t)/(2 pi)^t cos(pi t/2) zeta(t) at x = 1.
    """
    t = 1 - s
    m = math.ceil(x) - 1
    base = x - m
    # zeta(s, x) = zeta(s, x - m) - sum_{j < m} (x - m + j)^{-s}
    shifted = [(base + j) ** -s for j in range(m)]
    scale = 2 * gamma_stirling(t) / (2 * math.pi) ** t
    if base == 1.0:
        riemann = _hurwitz_euler_maclaurin(t, 1.0, default_shift(t), DEPTH)
        value = scale * math.cos(math.pi * t / 2) * riemann.value
        error = scale * riemann.error_estimate
        terms = None
    else:
        L = polylog_unit_circle(t, base, FUNCTIONAL_TOL)
        value = scale * (cmath.exp(-1j * math.pi * t / 2) * L.value).real
        error = scale * L.error_estimate
        terms = L.parameters['terms']
    total = value - math.fsum(shifted)
    # Gamma by Stirling is good to about 1e-14 relative
    error += 64 * EPS * (abs(value) + math.fsum(shifted))
    parameters = {'function': 'hurwitz_zeta', 's': s, 'x': x, 'method': FUNCTIONAL}
    if terms is not None:
        parameters['terms'] = terms
    return EvalResult(total, error, parameters)


def analytic_bernoulli_B(s, x) -> EvalResult:
    """B(s; x) = -s zeta(1 - s, x), with B(0; x) = 1."""
    s, x = float(s), float(x)
    if not 0 < x <= 1:
        raise OutOfDomain(f"B(s; x) needs 0 < x <= 1, got {x}")
    if s == 0:
        return EvalResult(1.0, 0.0, {'function': 'B', 's': s, 'x': x})
    if abs(s) < NEAR_POLE:
        raise NearPole(f"B(s; x) is not evaluated for 0 < |s| < {NEAR_POLE}, got s={s}")
    zeta = hurwitz_zeta(1 - s, x)
    return EvalResult(-s * zeta.value, abs(s) * zeta.error_estimate,
                      {'function': 'B', 's': s, 'x': x, 'method': zeta.parameters['method']})


def polylog_tail_bound(s, x, M) -> float:
    """Bound on |sum_{n > M} e^{2 pi i n x} / n^s|: absolute or Abel summation, whichever is smaller."""
    sin_px = abs(math.sin(math.pi * x))
    absolute = M ** (1 - s) / (s - 1)
    if sin_px == 0:
        return absolute
    return min(absolute, (M + 1) ** -s / sin_px)


def polylog_terms_needed(s, x, tol) -> int:
    sin_px = abs(math.sin(math.pi * x))
    M = (tol * (s - 1)) ** (-1 / (s - 1))
    if sin_px > 0:
        M = min(M, (tol * sin_px) ** (-1 / s))
    return max(1, math.ceil(M))


def polylog_rounding_bound(s, x, M) -> float:
    """First-order rounding in the chunked sum, phases included."""
    weight = 1 + 1 / (s - 1)
    if s == 2:
        moment = 1 + math.log(M)
    else:
        moment = 1 + (M ** (2 - s) - 1) / (2 - s)
    chunks = -(-M // CHUNK)
    return EPS * ((8 + math.log2(CHUNK) + chunks) * weight + math.pi * x * moment)


def polylog_unit_circle(s, x, tol=1e-12, max_terms=POLYLOG_CEILING) -> EvalResult:
    """Li_s(e^{2 pi i x}) by direct summation of the first M terms."""
    s, x = float(s), float(x)
    if s < POLYLOG_MIN_S:
        raise OutOfDomain(f"Li_s on the unit circle needs s >= {POLYLOG_MIN_S}, got {s}")
    if not 0 < x < 1:
        raise OutOfDomain(f"Li_s on the unit circle needs 0 < x < 1, got {x}")
    M = polylog_terms_needed(s, x, tol)
    if M > max_terms:
        raise AccuracyUnreachable(f"Li_{s} at x={x} needs {M:.3g} terms to reach {tol}",
                                  polylog_tail_bound(s, x, max_terms))
    total = 0j
    for start in range(1, M + 1, CHUNK):
        n = np.arange(start, min(start + CHUNK, M + 1), dtype=np.float64)
        phase = 2 * np.pi * np.mod(n * x, 1.0)
        total += complex(np.sum(np.exp(1j * phase) / n ** s))
    logging.debug("Summed %d polylog terms at s=%s, x=%s", M, s, x)
    error = polylog_tail_bound(s, x, M) + polylog_rounding_bound(s, x, M)
    return EvalResult(total, error, {'function': 'polylog', 's': s, 'x': x, 'terms': M})


def _polylog_scale(s):
    return gamma_stirling(s + 1) / (2 * math.pi) ** s


def analytic_bernoulli_A(s, x, tol=1e-12) -> EvalResult:
    s, x = float(s), float(x)
    L = polylog_unit_circle(s, x, tol)
    scale = _polylog_scale(s)
    value = -scale * 2 * (cmath.exp(-1j * math.pi * s / 2) * L.value).imag
    return EvalResult(value, 2 * scale * L.error_estimate,
                      {'function': 'A', 's': s, 'x': x, 'terms': L.parameters['terms']})


FUNCTIONS = {'A': analytic_bernoulli_A, 'B': analytic_bernoulli_B}
LADDER_TOLERANCE = {'A': 1e-5, 'B': 1e-6}


def appell_ladder_numeric(fn, s, x, h=1e-5, tol=None) -> DefectReport:
    """|d/dx fn(s; x) - s fn(s - 1; x)| with a central difference."""
    try:
        f = FUNCTIONS[fn]
    except KeyError:
        raise OutOfDomain(f"unknown analytic function {fn!r}; use A or B")
    tol = LADDER_TOLERANCE[fn] if tol is None else tol
    plus, minus, lower = f(s, x + h), f(s, x - h), f(s - 1, x)
    derivative = (plus.value - minus.value) / (2 * h)
    residual = abs(derivative - s * lower.value)
    error = (plus.error_estimate + minus.error_estimate) / (2 * h) + abs(s) * lower.error_estimate
    params = (('fn', fn), ('s', repr(float(s))), ('x', repr(float(x))), ('h', repr(h)))
    return DefectReport.numeric('appell_ladder_numeric', params, residual, tol, error)


def hurwitz_formula_check(s, x, tol=1e-8) -> DefectReport:
    """Relative gap between -s zeta(1-s, x) and -Gamma(s+1)/(2 pi)^s 2 Re(e^{-i pi s/2} Li_s)."""
    s, x = float(s), float(x)
    if s < 2:
        raise OutOfDomain(f"hurwitz_formula_check needs s >= 2, got {s}")
    # hurwitz_zeta itself would take the polylog path here
    zeta = hurwitz_zeta(1 - s, x, method=EULER_MACLAURIN)
    lhs = -s * zeta.value
    L = polylog_unit_circle(s, x, 1e-13)
    scale = _polylog_scale(s)
    rhs = -scale * 2 * (cmath.exp(-1j * math.pi * s / 2) * L.value).real
    size = max(abs(lhs), 1e-300)
    discrepancy = abs(lhs - rhs) / size
    error = (abs(s) * zeta.error_estimate + 2 * scale * L.error_estimate) / size
    params = (('s', repr(s)), ('x', repr(x)))
    details = (('zeta_path', repr(lhs)), ('polylog_path', repr(rhs)))
    return DefectReport.numeric('hurwitz_formula', params, discrepancy, tol, error, details)


def reflection_defect_A(s, x, tol=1e-9) -> DefectReport:
    """
    A(s; x) + A(s; 1 - x) against its closed form
    4 Gamma(s+1)/(2 pi)^s sin(pi s/2) Re Li_s(e^{2 pi i x}); the sum itself
    vanishes only for even integer s.
    """
    s, x = float(s), float(x)
    left, right = analytic_bernoulli_A(s, x), analytic_bernoulli_A(s, 1 - x)
    L = polylog_unit_circle(s, x)
    predicted = 4 * _polylog_scale(s) * math.sin(math.pi * s / 2) * L.value.real
    total = left.value + right.value
    error = left.error_estimate + right.error_estimate + 4 * _polylog_scale(s) * L.error_estimate
    params = (('s', repr(s)), ('x', repr(x)))
    details = (('sum', repr(total)), ('closed_form', repr(predicted)))
    return DefectReport.numeric('reflection_A', params, abs(total - predicted), tol, error, details)


def _with_error(values):
    return [v.value for v in values], [v.error_estimate for v in values]


def analytic_cyclic_probe(n, delta, x, y, r, s, tol=1e-8) -> DefectReport:
    """
    The classical cyclic sum with F_m(x) replaced by B(m + delta; x).

    At delta = 0 this must vanish; any other delta is recorded only.
    """
    x, y, r, s, delta = (float(v) for v in (x, y, r, s, delta))
    z = 1 - x - y
    t = n - r - s
    if not 0 < z <= 1:
        raise OutOfDomain(f"z = 1 - x - y = {z} must lie in (0, 1]")
    fx, ex = _with_error([analytic_bernoulli_B(m + delta, x) for m in range(n + 1)])
    fy, ey = _with_error([analytic_bernoulli_B(m + delta, y) for m in range(n + 1)])
    fz, ez = _with_error([analytic_bernoulli_B(m + delta, z) for m in range(n + 1)])

    def bound(u, v, f, ef, g, eg):
        return sum(abs(generalized_binomial(u, k) * generalized_binomial(v, n - k))
                   * (abs(f[n - k]) * eg[k] + ef[n - k] * abs(g[k]) + ef[n - k] * eg[k])
                   for k in range(n + 1))

    value = (r * bracket_sum(n, s, t, fx, fy) + s * bracket_sum(n, t, r, fy, fz)
             + t * bracket_sum(n, r, s, fz, fx))
    error = (abs(r) * bound(s, t, fx, ex, fy, ey) + abs(s) * bound(t, r, fy, ey, fz, ez)
             + abs(t) * bound(r, s, fz, ez, fx, ex))
    params = (('n', str(n)), ('delta', repr(delta)), ('point', f"({r!r}, {s!r}, {x!r}, {y!r})"))
    return DefectReport.numeric('analytic_cyclic_probe', params, float(value), tol, error,
                                recorded=delta != 0)


def catalan_series(terms=200000) -> float:
    """Catalan's constant from its alternating series, averaged over two consecutive partial sums."""
    k = np.arange(terms, dtype=np.float64)
    signs = np.where(k % 2 == 0, 1.0, -1.0)
    partial = np.cumsum(signs / (2 * k + 1) ** 2)
    return float((partial[-1] + partial[-2]) / 2)
