"""
q-Appell machinery.

E_q(w) is the small q-exponential sum w^n / (q;q)_n. q-Bernoulli and q-Euler
polynomials come from w/(E_q(w) - 1) E_q(wx) and 2/(E_q(w) + 1) E_q(wx), with
the w^n coefficient multiplied by (q;q)_n. At q = 1 they degenerate as
B_n^(q)(x)/(1-q) -> B_n(x) and E_n^(q)(x) -> E_n(x).

Every q-computation here is written once over a "slot" context: in symbolic
mode q^r and q^s are the indeterminates rho and sigma with q^t = q^n/(rho sigma);
in integer mode they are actual powers of q; in sampled mode everything is a
Fraction.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from idlab.appell import family_polynomials
from idlab.appell.builtins import BERNOULLI, EULER
from idlab.cyclic import sample_points
from idlab.errors import ConfigError, TableTooShort
from idlab.exact import MultiPoly, RationalFunction, limit_at_one
from idlab.exact.series import TruncatedSeries
from idlab.report import DefectReport
from idlab.trace import log

TABLE_VARIABLES = ('q', 'x')
SYMBOLIC_VARIABLES = ('q', 'rho', 'sigma', 'x', 'y')
INTEGER_VARIABLES = ('q', 'x', 'y')


class QKind(Enum):
    BERNOULLI = 'q-bernoulli'
    EULER = 'q-euler'


class QMode(Enum):
    INTEGER = 'integer'
    SYMBOLIC = 'symbolic'


def q_pochhammer(a, n, q=None):
    """(a; q)_n = (1 - a)(1 - a q)...(1 - a q^{n-1})."""
    if n < 0:
        raise ValueError("q-Pochhammer length must be >= 0")
    if q is None:
        q = _q_like(a)
    result = Fraction(1)
    power = Fraction(1)
    for _ in range(n):
        result = result * (1 - a * power)
        power = power * q
    return result


def _q_like(value):
    """The generator q in the ring of `value` (adding q when it is missing)."""
    if isinstance(value, (MultiPoly, RationalFunction)):
        variables = value.variables if 'q' in value.variables else ('q',) + value.variables
        return RationalFunction.variable('q', variables)
    return RationalFunction.variable('q', ('q',))


def q_integer(power, q):
    """[m]_q = (1 - q^m)/(1 - q), with q^m given as `power`."""
    return (1 - power) / (1 - q)


@lru_cache(maxsize=None)
def q_exponential(order, variables=('q',)) -> TruncatedSeries:
    """E_q(w) to order w^order: the w^n coefficient is 1/(q;q)_n."""
    if order < 1:
        raise ValueError("order must be >= 1")
    q = RationalFunction.variable('q', variables)
    one = RationalFunction.constant(1, variables)
    return TruncatedSeries([one / q_pochhammer(q, n, q) for n in range(order)], order)


def gaussian_binomial(upper, k, q=None):
    """
    prod_{i=1..k} (1 - U q^{i-k}) / (1 - q^i), where U = q^upper for an
    integer upper index and U = upper itself for a symbolic power such as sigma.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if q is None:
        q = _q_like(upper)
        if isinstance(upper, (MultiPoly, RationalFunction)):
            upper = RationalFunction(upper) if isinstance(upper, MultiPoly) else upper
            upper = upper.embed(q.variables)
    power = q ** upper if isinstance(upper, int) else upper
    result = q ** 0
    for i in range(1, k + 1):
        result = result * (1 - power * q ** (i - k)) / (1 - q ** i)
    return result


@dataclass(frozen=True)
class QFamilyTable:
    kind: QKind
    polynomials: tuple[RationalFunction, ...]

    @property
    def max_degree(self) -> int:
        return len(self.polynomials) - 1

    def require(self, n):
        if n > self.max_degree:
            raise TableTooShort(f"{self.kind.value} table stops at degree {self.max_degree}, need {n}")

    def evaluate(self, n, q, x):
        """F_n^(q)(x) at the given q and x (Fractions or ring elements)."""
        self.require(n)
        return self.polynomials[n].substitute({'q': q, 'x': x})


@lru_cache(maxsize=None)
def q_family_polynomials(kind, n_max) -> QFamilyTable:
    kind = QKind(kind)
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    order = n_max + 1
    E = q_exponential(order + 1, TABLE_VARIABLES)
    q, x = RationalFunction.gens(TABLE_VARIABLES)
    if kind is QKind.BERNOULLI:
        prefactor = (E - 1).shift_down(1).invert()
    else:
        prefactor = ((E + 1) * Fraction(1, 2)).truncate(order).invert()
    phi = prefactor * E.scale_variable(x).truncate(order)
    polys = tuple(phi[n] * q_pochhammer(q, n, q) for n in range(order))
    logging.debug("Expanded %s up to degree %d", kind.value, n_max)
    return QFamilyTable(kind, polys)


def q_to_one_check(table: QFamilyTable) -> DefectReport:
    """Compare the q = 1 limit of every entry with the classical polynomial."""
    classical = family_polynomials(BERNOULLI if table.kind is QKind.BERNOULLI else EULER, table.max_degree)
    q = RationalFunction.variable('q', TABLE_VARIABLES)
    details = []
    first = None
    for n, entry in enumerate(table.polynomials):
        f = entry / (1 - q) if table.kind is QKind.BERNOULLI else entry
        residual = limit_at_one(f, 'q') - classical[n]
        details.append((f"n={n}", residual.render()))
        if first is None and not residual.is_zero:
            first = residual
    params = (('kind', table.kind.value), ('n_max', str(table.max_degree)))
    return DefectReport.exact('q_limit', params, first if first is not None else 0, details=details)


@dataclass(frozen=True)
class _Slots:
    q: object
    powers: dict
    x: object
    y: object

    @property
    def z(self):
        return 1 - self.x - self.y


@dataclass(frozen=True)
class QCyclicParams:
    n: int
    mode: QMode = QMode.SYMBOLIC
    triple: tuple[int, int, int] | None = None
    x_arg: object = 'x'
    y_arg: object = 'y'

    def __post_init__(self):
        object.__setattr__(self, 'mode', QMode(self.mode))
        if self.n < 0:
            raise ConfigError("n must be >= 0")
        if self.mode is QMode.INTEGER:
            if self.triple is None or len(self.triple) != 3 or min(self.triple) < 0 or sum(self.triple) != self.n:
                raise ConfigError(f"integer mode needs nonnegative r, s, t summing to {self.n}, got {self.triple}")
        elif self.triple is not None:
            raise ConfigError("symbolic mode takes no integer triple")

    @property
    def variables(self):
        return SYMBOLIC_VARIABLES if self.mode is QMode.SYMBOLIC else INTEGER_VARIABLES

    def describe(self):
        out = [('n', str(self.n)), ('mode', self.mode.value)]
        if self.triple is not None:
            out.append(('triple', ','.join(str(v) for v in self.triple)))
        return out

    def slots(self) -> _Slots:
        V = self.variables
        q = RationalFunction.variable('q', V)
        if self.mode is QMode.SYMBOLIC:
            rho = RationalFunction.variable('rho', V)
            sigma = RationalFunction.variable('sigma', V)
            powers = {'r': rho, 's': sigma, 't': q ** self.n / (rho * sigma)}
        else:
            powers = dict(zip('rst', (q ** m for m in self.triple)))
        x, y = (RationalFunction.variable(a, V) if isinstance(a, str) else Fraction(a)
                for a in (self.x_arg, self.y_arg))
        return _Slots(q, powers, x, y)


def _sampled_slots(n, point) -> _Slots:
    q, rho, sigma, x, y = point
    return _Slots(q, {'r': rho, 's': sigma, 't': q ** n / (rho * sigma)}, x, y)


def _gauss_row(power, n, q):
    return [gaussian_binomial(power, k, q) for k in range(n + 1)]


def _q_bracket(n, q, gs, gt, fx, fy):
    total = Fraction(0)
    for k in range(n + 1):
        term = q ** (k * (k - 1) // 2) * gs[k] * gt[n - k] * fx[n - k] * fy[k]
        total = total - term if k % 2 else total + term
    return total


def _values(table, n, q, arg):
    return [table.evaluate(j, q, arg) for j in range(n + 1)]


def q_bracket(table: QFamilyTable, params: QCyclicParams, s_slot='s', t_slot='t'):
    """[s, t; x, y]_n^(q) with s and t taken from the named slots r, s or t."""
    table.require(params.n)
    slots = params.slots()
    n, q = params.n, slots.q
    return _q_bracket(n, q,
                      _gauss_row(slots.powers[s_slot], n, q), _gauss_row(slots.powers[t_slot], n, q),
                      _values(table, n, q, slots.x), _values(table, n, q, slots.y))


def _q_cyclic(table, n, slots):
    q = slots.q
    R, S, T = (slots.powers[k] for k in 'rst')
    gr, gs, gt = (_gauss_row(p, n, q) for p in (R, S, T))
    fx, fy, fz = (_values(table, n, q, a) for a in (slots.x, slots.y, slots.z))
    return (q_integer(R, q) * _q_bracket(n, q, gs, gt, fx, fy)
            + q_integer(S, q) * _q_bracket(n, q, gt, gr, fy, fz)
            + q_integer(T, q) * _q_bracket(n, q, gr, gs, fz, fx))


def q_cyclic_value(table: QFamilyTable, params: QCyclicParams):
    """[r]_q [s,t;x,y] + [s]_q [t,r;y,z] + [t]_q [r,s;z,x] with z = 1 - x - y."""
    table.require(params.n)
    return _q_cyclic(table, params.n, params.slots())


@log(lambda r: r.residual[:80])
def q_cyclic_defect(table: QFamilyTable, params: QCyclicParams) -> DefectReport:
    value = q_cyclic_value(table, params)
    return DefectReport.exact('q_cyclic_defect', [('kind', table.kind.value)] + params.describe(), value)


def _admissible(point):
    q, rho, sigma = point[:3]
    return q not in (0, 1, -1) and rho != 0 and sigma != 0


def q_cyclic_defect_sampled(table: QFamilyTable, n, seed, count, escalate_ceiling=4) -> DefectReport:
    """
    Evaluate the symbolic-mode cyclic sum at random rational (q, rho, sigma, x, y).

    A nonzero sample settles the question; when every sample vanishes and
    n <= escalate_ceiling the exact symbolic computation decides instead.
    """
    if count < 1:
        raise ConfigError("sample count must be >= 1")
    table.require(n)
    points = sample_points(seed, count, dimension=5, forbid=lambda p: not _admissible(p))
    details = []
    first = None
    for point in points:
        value = _q_cyclic(table, n, _sampled_slots(n, point))
        details.append(('(' + ', '.join(str(c) for c in point) + ')', str(value)))
        if first is None and value != 0:
            first = value
    params = (('kind', table.kind.value), ('n', str(n)), ('seed', str(seed)), ('samples', str(count)))
    if first is None and n <= escalate_ceiling:
        logging.info("All %d samples vanish at n=%d; escalating to the symbolic computation", count, n)
        exact = q_cyclic_value(table, QCyclicParams(n))
        details.append(('escalated', 'symbolic'))
        return DefectReport.exact('q_cyclic_sampled', params, exact, details=details)
    return DefectReport.exact('q_cyclic_sampled', params, first if first is not None else 0, details=details)


def q_binomial_cyclic_defect(n, k, mode=QMode.SYMBOLIC, triple=None):
    """[r]_q g(s,k) g(t,n-k) + [s]_q g(t,k) g(r,n-k) + [t]_q g(r,k) g(s,n-k), g the Gaussian binomial."""
    if not 0 <= k <= n:
        raise ConfigError(f"need 0 <= k <= n, got n={n}, k={k}")
    slots = QCyclicParams(n, mode, triple).slots()
    q = slots.q
    R, S, T = (slots.powers[c] for c in 'rst')
    g = gaussian_binomial
    return (q_integer(R, q) * g(S, k, q) * g(T, n - k, q)
            + q_integer(S, q) * g(T, k, q) * g(R, n - k, q)
            + q_integer(T, q) * g(R, k, q) * g(S, n - k, q))
