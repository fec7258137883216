"""
The cyclic bracket of an Appell table and its cyclic defect.

    [s, t; x, y]_n = sum_k (-1)^k binom(s, k) binom(t, n-k) F_{n-k}(x) F_k(y)

The defect r[s,t;x,y] + s[t,r;y,z] + t[r,s;z,x] is computed with t = n - r - s
and z = 1 - x - y eliminated first, so zero means zero as a polynomial in
r, s, x, y. Binomials are falling factorials, valid for symbolic arguments.
"""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction

from idlab.bloom import PointFilter
from idlab.errors import ConfigError
from idlab.exact import MultiPoly, generalized_binomial
from idlab.report import DefectReport
from idlab.trace import log

DEFECT_VARIABLES = ('r', 's', 'x', 'y')
BINOMIAL_VARIABLES = ('r', 's')
MAX_N = 16


@dataclass(frozen=True)
class BracketParams:
    """n and the four bracket arguments; a str argument names a symbolic variable."""
    n: int
    s_arg: object = 's'
    t_arg: object = 't'
    x_arg: object = 'x'
    y_arg: object = 'y'
    max_n: int = MAX_N

    def __post_init__(self):
        if not 0 <= self.n <= self.max_n:
            raise ConfigError(f"bracket degree {self.n} outside 0..{self.max_n}")

    def arguments(self):
        """The four arguments with names replaced by generators of a common ring."""
        args = (self.s_arg, self.t_arg, self.x_arg, self.y_arg)
        names = tuple(dict.fromkeys(a for a in args if isinstance(a, str)))
        if not names:
            return tuple(Fraction(a) for a in args)
        gens = dict(zip(names, MultiPoly.gens(names)))
        return tuple(gens[a] if isinstance(a, str) else Fraction(a) for a in args)


def _values(table, n, arg):
    return [table.evaluate(j, arg) for j in range(n + 1)]


def bracket_sum(n, s, t, fx, fy):
    total = Fraction(0)
    for k in range(n + 1):
        term = generalized_binomial(s, k) * generalized_binomial(t, n - k) * fx[n - k] * fy[k]
        total = total - term if k % 2 else total + term
    return total


def bracket(table, params: BracketParams):
    """[s, t; x, y]_n, exact in whichever arguments are symbolic."""
    table.require(params.n)
    s, t, x, y = params.arguments()
    return bracket_sum(params.n, s, t, _values(table, params.n, x), _values(table, params.n, y))


def _cyclic_sum(table, n, r, s, x, y):
    t = n - r - s
    z = 1 - x - y
    fx, fy, fz = (_values(table, n, arg) for arg in (x, y, z))
    return (r * bracket_sum(n, s, t, fx, fy)
            + s * bracket_sum(n, t, r, fy, fz)
            + t * bracket_sum(n, r, s, fz, fx))


@log(lambda p: f"{len(p.terms())} terms")
def cyclic_defect(table, n) -> MultiPoly:
    """The cyclic sum as a polynomial in r, s, x, y."""
    table.require(n)
    r, s, x, y = MultiPoly.gens(DEFECT_VARIABLES)
    return _cyclic_sum(table, n, r, s, x, y)


def cyclic_defect_at(table, n, point) -> Fraction:
    """The cyclic sum at one rational point (r, s, x, y)."""
    table.require(n)
    r, s, x, y = (Fraction(c) for c in point)
    return _cyclic_sum(table, n, r, s, x, y)


def transpose_defect(table, n) -> MultiPoly:
    """[s,t;x,y]_n - (-1)^n [t,s;y,x]_n with all four arguments symbolic."""
    table.require(n)
    s, t, x, y = MultiPoly.gens(('s', 't', 'x', 'y'))
    fx, fy = _values(table, n, x), _values(table, n, y)
    sign = -1 if n % 2 else 1
    return bracket_sum(n, s, t, fx, fy) - sign * bracket_sum(n, t, s, fy, fx)


def _random_rational(rng, span=5, denominator=7):
    return Fraction(rng.randint(-span * denominator, span * denominator), rng.randint(1, denominator))


def sample_points(seed, count, dimension=4, forbid=None):
    """`count` distinct random rational points, deterministic in `seed`."""
    rng = random.Random(seed)
    seen = PointFilter.for_capacity(max(count, 1) * 4)
    points = []
    while len(points) < count:
        point = tuple(_random_rational(rng) for _ in range(dimension))
        if point in seen or (forbid is not None and forbid(point)):
            logging.debug("Redrawing sample point %s", point)
            continue
        seen.add(point)
        points.append(point)
    return points


def cyclic_defect_sampled(table, n, seed, count, points=None) -> list[DefectReport]:
    """One exact evaluation report per random (or given) point."""
    if count < 1:
        raise ConfigError("sample count must be >= 1")
    if points is None:
        points = sample_points(seed, count)
    reports = []
    for point in points:
        value = cyclic_defect_at(table, n, point)
        params = (('family', table.family.name), ('n', str(n)),
                  ('point', '(' + ', '.join(str(Fraction(c)) for c in point) + ')'))
        reports.append(DefectReport.exact('cyclic_sampled', params, value))
    return reports


def binomial_cyclic_defect(n, k) -> MultiPoly:
    """r binom(s,k) binom(t,n-k) + s binom(t,k) binom(r,n-k) + t binom(r,k) binom(s,n-k), t = n - r - s."""
    if not 0 <= k <= n:
        raise ConfigError(f"need 0 <= k <= n, got n={n}, k={k}")
    r, s = MultiPoly.gens(BINOMIAL_VARIABLES)
    t = n - r - s
    C = generalized_binomial
    total = r * C(s, k) * C(t, n - k) + s * C(t, k) * C(r, n - k) + t * C(r, k) * C(s, n - k)
    return total
