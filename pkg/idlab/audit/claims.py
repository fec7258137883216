"""
Derived residuals for the known-discrepancy manifest.

A manifest entry either lists its residual verbatim or names one of the
derivations below. A derivation recomputes the left-hand side of the
published claim with sympy, away from the exact engine, and renders it in the
engine's canonical form. A defect is known only when its residual matches
that text exactly.
"""

from fractions import Fraction
from functools import lru_cache

import sympy

from idlab.cyclic import BINOMIAL_VARIABLES, DEFECT_VARIABLES
from idlab.exact import MultiPoly, RationalFunction
from idlab.modular import Z
from idlab.qseries import SYMBOLIC_VARIABLES

U = sympy.Dummy('u')
HALF = sympy.Rational(1, 2)


def canonical(expr, variables) -> str:
    """The engine's canonical text of a rational sympy expression over `variables`."""
    symbols = sympy.symbols(variables)
    parts = []
    for part in sympy.fraction(sympy.cancel(expr)):
        terms = sympy.Poly(part, *symbols).terms()
        parts.append(MultiPoly(variables, {m: Fraction(str(c)) for m, c in terms}))
    return RationalFunction(*parts).render()


def _rationals(text):
    return [sympy.Rational(c) for c in text.strip('()').split(', ')]


def _binomial(u, k):
    return sympy.Mul(*[u - i for i in range(k)]) / sympy.factorial(k)


@lru_cache(maxsize=None)
def family_polynomial(family, n):
    """F_n(u) of a builtin family, from sympy's own special polynomials."""
    match family:
        case 'bernoulli':
            return sympy.bernoulli(n, U)
        case 'euler':
            return sympy.euler(n, U)
        case 'centered_monomial':
            return (U - HALF) ** n
        case 'centered_hermite':
            return sympy.expand(sympy.hermite_prob(n, U - HALF))
    raise KeyError(family)


def _bracket(n, s, t, fx, fy):
    return sympy.Add(*[(-1) ** k * _binomial(s, k) * _binomial(t, n - k) * fx[n - k] * fy[k]
                       for k in range(n + 1)])


def cyclic_sum(family, n, r, s, x, y):
    """r[s,t;x,y]_n + s[t,r;y,z]_n + t[r,s;z,x]_n with t = n - r - s, z = 1 - x - y."""
    t, z = n - r - s, 1 - x - y
    fx, fy, fz = ([family_polynomial(family, j).subs(U, a) for j in range(n + 1)] for a in (x, y, z))
    return sympy.expand(r * _bracket(n, s, t, fx, fy) + s * _bracket(n, t, r, fy, fz)
                        + t * _bracket(n, r, s, fz, fx))


def binomial_sum(n, k, r, s):
    t = n - r - s
    C = _binomial
    return sympy.expand(r * C(s, k) * C(t, n - k) + s * C(t, k) * C(r, n - k) + t * C(r, k) * C(s, n - k))


def _pochhammer(a, m, q):
    return sympy.Mul(*[1 - a * q ** i for i in range(m)])


def _gaussian(power, k, q):
    return sympy.Mul(*[(1 - power * q ** (i - k)) / (1 - q ** i) for i in range(1, k + 1)])


@lru_cache(maxsize=None)
def q_polynomials(kind, n, q):
    """q-Bernoulli or q-Euler polynomials of degree 0..n in u at the given q."""
    e = [1 / _pochhammer(q, m, q) for m in range(n + 2)]
    if kind == 'q-bernoulli':
        # (E_q(w) - 1)/w
        a = e[1:]
    elif kind == 'q-euler':
        # (E_q(w) + 1)/2
        a = [sympy.Integer(1)] + [c / 2 for c in e[1:]]
    else:
        raise KeyError(kind)
    b = [1 / a[0]]
    for m in range(1, n + 1):
        b.append(sympy.cancel(-sympy.Add(*[a[j] * b[m - j] for j in range(1, m + 1)]) / a[0]))
    return tuple(sympy.cancel(_pochhammer(q, m, q) * sympy.Add(*[b[m - j] * e[j] * U ** j for j in range(m + 1)]))
                 for m in range(n + 1))


def _q_bracket(n, q, gs, gt, fx, fy):
    return sympy.Add(*[(-1) ** k * q ** (k * (k - 1) // 2) * gs[k] * gt[n - k] * fx[n - k] * fy[k]
                       for k in range(n + 1)])


def _q_integer(power, q):
    return (1 - power) / (1 - q)


def q_cyclic_sum(kind, n, q, rho, sigma, x, y):
    """[r]_q[s,t;x,y] + [s]_q[t,r;y,z] + [t]_q[r,s;z,x] with q^r = rho, q^s = sigma, q^t = q^n/(rho sigma)."""
    R, S, T = rho, sigma, q ** n / (rho * sigma)
    z = 1 - x - y
    polys = q_polynomials(kind, n, q)
    fx, fy, fz = ([p.subs(U, a) for p in polys] for a in (x, y, z))
    gr, gs, gt = ([_gaussian(P, k, q) for k in range(n + 1)] for P in (R, S, T))
    return (_q_integer(R, q) * _q_bracket(n, q, gs, gt, fx, fy)
            + _q_integer(S, q) * _q_bracket(n, q, gt, gr, fy, fz)
            + _q_integer(T, q) * _q_bracket(n, q, gr, gs, fz, fx))


def q_binomial_sum(n, k, q, rho, sigma):
    R, S, T = rho, sigma, q ** n / (rho * sigma)
    g = _gaussian
    return (_q_integer(R, q) * g(S, k, q) * g(T, n - k, q)
            + _q_integer(S, q) * g(T, k, q) * g(R, n - k, q)
            + _q_integer(T, q) * g(R, k, q) * g(S, n - k, q))


def literal_three_term(k) -> MultiPoly:
    """The literal three-term residual of z^w - 1 in closed form: 2z^w - (z-1)^w - (1-z)^w."""
    z, = MultiPoly.gens(Z)
    w = k - 2
    return 2 * z ** w - (z - 1) ** w - (1 - z) ** w


def derive_cyclic(report):
    params = dict(report.params)
    r, s, x, y = sympy.symbols(DEFECT_VARIABLES)
    return canonical(cyclic_sum(params['family'], int(params['n']), r, s, x, y), DEFECT_VARIABLES)


def derive_cyclic_sampled(report):
    params = dict(report.params)
    return canonical(cyclic_sum(params['family'], int(params['n']), *_rationals(params['point'])), DEFECT_VARIABLES)


def derive_binomial(report):
    params = dict(report.params)
    r, s = sympy.symbols(BINOMIAL_VARIABLES)
    return canonical(binomial_sum(int(params['n']), int(params['k']), r, s), BINOMIAL_VARIABLES)


def derive_q_cyclic(report):
    params = dict(report.params)
    if params.get('mode') != 'symbolic':
        return None
    symbols = sympy.symbols(SYMBOLIC_VARIABLES)
    return canonical(q_cyclic_sum(params['kind'], int(params['n']), *symbols), SYMBOLIC_VARIABLES)


def derive_q_cyclic_sampled(report):
    """The first nonzero sample, or the symbolic sum when every sample vanishes."""
    params = dict(report.params)
    kind, n = params['kind'], int(params['n'])
    for key, _ in report.details:
        if key.startswith('('):
            value = q_cyclic_sum(kind, n, *_rationals(key))
            if value != 0:
                return canonical(value, SYMBOLIC_VARIABLES)
    return canonical(q_cyclic_sum(kind, n, *sympy.symbols(SYMBOLIC_VARIABLES)), SYMBOLIC_VARIABLES)


def derive_q_binomial(report):
    params = dict(report.params)
    symbols = sympy.symbols(SYMBOLIC_VARIABLES)[:3]
    return canonical(q_binomial_sum(int(params['n']), int(params['k']), *symbols), SYMBOLIC_VARIABLES)


def derive_three_term_literal(report):
    params = dict(report.params)
    k = int(params['k'])
    z, = MultiPoly.gens(Z)
    poly = (z ** (k - 2) - 1).render()
    if params.get('poly', poly) != poly:
        return None
    return literal_three_term(k).render()


DERIVATIONS = {
    'cyclic': derive_cyclic,
    'cyclic_sampled': derive_cyclic_sampled,
    'binomial': derive_binomial,
    'q_cyclic': derive_q_cyclic,
    'q_cyclic_sampled': derive_q_cyclic_sampled,
    'q_binomial': derive_q_binomial,
    'three_term_literal': derive_three_term_literal,
}


def derived_residual(name, report) -> str | None:
    """The residual the named derivation expects for this report, or None when it does not apply."""
    return DERIVATIONS[name](report)
