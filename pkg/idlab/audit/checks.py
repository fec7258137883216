"""
The checks an audit runs. Each Check subclass wraps one library operation
and turns its outcome into DefectReports; `run` adds timing and converts
IdlabError into an error entry so one failing check never stops the audit.
"""

import logging
import math
from fractions import Fraction
from itertools import zip_longest

from idlab.analytic import (
    analytic_bernoulli_A,
    analytic_bernoulli_B,
    analytic_cyclic_probe,
    appell_ladder_numeric,
    catalan_series,
    hurwitz_formula_check,
    hurwitz_zeta,
    reflection_defect_A,
)
from idlab.appell import check_ladder, check_reflection, egf_defect, family_polynomials, get_family, reflection_report
from idlab.appell.builtins import bernoulli_polynomial
from idlab.cyclic import binomial_cyclic_defect, cyclic_defect, cyclic_defect_sampled, transpose_defect
from idlab.errors import IdlabError
from idlab.exact import MultiPoly
from idlab.modular import (
    LITERAL_MAPS,
    Z,
    bernoulli_period_defects,
    cuspform_dim,
    cusp_permutation,
    delta_qexp,
    eisenstein_qexp,
    literal_nullspaces,
    period_space,
    s_relation,
    three_term_paper,
    three_term_standard,
)
from idlab.modular.numeric import (
    completed_L,
    completed_L_quadrature,
    critical_l_value,
    even_period_ratio,
    modularity_check_numeric,
    period_polynomial_numeric,
    projection,
    relation_residuals,
)
from idlab.qseries import (
    QCyclicParams,
    QMode,
    q_binomial_cyclic_defect,
    q_cyclic_defect,
    q_cyclic_defect_sampled,
    q_family_polynomials,
    q_to_one_check,
)
from idlab.report import DefectReport
from idlab.trace import Stopwatch


def _first_nonzero(*values):
    for value in values:
        if not value.is_zero:
            return value
    return values[-1]


class Check:
    """One audit entry point; `name` is the check name its reports carry."""
    name = None

    def __init__(self, **params):
        self.params = params

    def __repr__(self):
        return f'<Check name={self.name} {self.params_text}>'

    def __str__(self):
        return self.name

    @property
    def params_text(self):
        return ', '.join(f"{k}={v}" for k, v in self.params.items())

    def describe(self):
        return tuple((k, str(v)) for k, v in self.params.items())

    def evaluate(self, config):
        raise NotImplementedError()

    def run(self, config) -> list[DefectReport]:
        logging.debug("Running %r", self)
        with Stopwatch() as watch:
            try:
                result = self.evaluate(config)
            except IdlabError as e:
                logging.exception(e)
                result = DefectReport.failure(self.name, self.describe(), e)
        reports = result if isinstance(result, list) else [result]
        if not config.timings:
            return reports
        share = watch.elapsed_ms / len(reports)
        return [r.with_fields(elapsed_ms=share) for r in reports]


class FamilyCheck(Check):
    def table(self, n):
        return family_polynomials(get_family(self.params['family']), n)


class AppellAxioms(FamilyCheck):
    name = 'appell_axioms'

    def evaluate(self, config):
        table = self.table(self.params['n_max'])
        return [check_ladder(table), reflection_report(table), egf_defect(table)]


class ReflectionControl(FamilyCheck):
    """A family without reflection symmetry; the check passes when the detector notices."""
    name = 'reflection_control'

    def evaluate(self, config):
        results = check_reflection(self.table(self.params['n_max']))
        missing = [r.n for r in results if r.parity is None]
        details = tuple((f"n={r.n}", 'none' if r.parity is None else f"{r.parity:+d}") for r in results)
        detected = 1 in missing
        residual = '0' if detected else 'parity found at n=1'
        return DefectReport(self.name, self.describe(), detected, residual, details=details)


class CyclicDefect(FamilyCheck):
    name = 'cyclic_defect'

    def evaluate(self, config):
        n = self.params['n']
        defect = cyclic_defect(self.table(n), n)
        details = (('degree_rs', str(defect.total_degree(('r', 's')))),
                   ('degree_xy', str(defect.total_degree(('x', 'y')))))
        return DefectReport.exact(self.name, self.describe(), defect, details)


class CyclicSampled(FamilyCheck):
    name = 'cyclic_sampled'

    def evaluate(self, config):
        n = self.params['n']
        return cyclic_defect_sampled(self.table(n), n, config.seed, config.samples)


class BracketTranspose(FamilyCheck):
    name = 'bracket_transpose'

    def evaluate(self, config):
        n = self.params['n']
        return DefectReport.exact(self.name, self.describe(), transpose_defect(self.table(n), n))


class BinomialDefect(Check):
    name = 'binomial_cyclic_defect'

    def evaluate(self, config):
        return DefectReport.exact(self.name, self.describe(),
                                  binomial_cyclic_defect(self.params['n'], self.params['k']))


class QLimit(Check):
    name = 'q_limit'

    def evaluate(self, config):
        return q_to_one_check(q_family_polynomials(self.params['kind'], self.params['n_max']))


class QCyclic(Check):
    name = 'q_cyclic_defect'

    def evaluate(self, config):
        n = self.params['n']
        triple = self.params.get('triple')
        params = QCyclicParams(n, self.params['mode'], tuple(int(v) for v in triple.split(',')) if triple else None)
        return q_cyclic_defect(q_family_polynomials(self.params['kind'], n), params)


class QCyclicSampled(Check):
    name = 'q_cyclic_sampled'

    def evaluate(self, config):
        n = self.params['n']
        table = q_family_polynomials(self.params['kind'], n)
        return q_cyclic_defect_sampled(table, n, config.seed, config.samples, escalate_ceiling=config.q_ceiling)


class QBinomialDefect(Check):
    name = 'q_binomial_cyclic_defect'

    def evaluate(self, config):
        value = q_binomial_cyclic_defect(self.params['n'], self.params['k'], QMode.SYMBOLIC)
        return DefectReport.exact(self.name, self.describe(), value)


def _z_power_minus_one(k):
    """z^w - 1 as a polynomial in z."""
    z, = MultiPoly.gens(Z)
    return z ** (k - 2) - 1


class PeriodSpaceCheck(Check):
    name = 'period_space'

    def evaluate(self, config):
        k = self.params['k']
        space = period_space(k, config.weight_ceiling)
        expected = 2 * cuspform_dim(k) + 1
        details = [('dimension', str(space.dimension)), ('expected', str(expected))]
        details += [(f"basis[{i}]", b.render()) for i, b in enumerate(space.basis)]
        failing = [b for b in space.basis if not space.contains(b)]
        if failing:
            return DefectReport(self.name, self.describe(), False, f"basis vector {failing[0].render()} fails",
                                details=tuple(details))
        return DefectReport.exact(self.name, self.describe(), Fraction(space.dimension - expected), details)


class PeriodMembership(Check):
    name = 'period_membership'

    def evaluate(self, config):
        k = self.params['k']
        P = _z_power_minus_one(k)
        return DefectReport.exact(self.name, self.describe() + (('poly', P.render()),),
                                  _first_nonzero(s_relation(P), three_term_standard(P, k)))


class ThreeTerm(Check):
    """Literal and standard three-term residuals of z^w - 1, side by side."""
    name = 'three_term'

    def evaluate(self, config):
        k = self.params['k']
        P = _z_power_minus_one(k)
        params = self.describe() + (('poly', P.render()),)
        return [DefectReport.exact('three_term_paper', params, three_term_paper(P, k)),
                DefectReport.exact('three_term_standard', params, three_term_standard(P, k))]


class LiteralNullspace(Check):
    name = 'literal_nullspace'

    def evaluate(self, config):
        literal, joint = literal_nullspaces(self.params['k'])
        details = [('joint_dimension', str(len(joint)))]
        details += [(f"literal[{i}]", b.render()) for i, b in enumerate(literal)]
        reproduced = not joint and len(literal) == 1
        residual = '0' if reproduced else f"literal dimension {len(literal)}, joint dimension {len(joint)}"
        return DefectReport(self.name, self.describe(), reproduced, residual, details=tuple(details))


class CuspPermutation(Check):
    name = 'cusp_permutation'

    def evaluate(self, config):
        reports = []
        for g in LITERAL_MAPS:
            images = cusp_permutation(g)
            details = tuple((src, dst) for src, dst in images.items())
            permutes = sorted(images.values()) == sorted(images)
            reports.append(DefectReport(self.name, (('matrix', str(g)),), permutes,
                                        '0' if permutes else 'cusps not permuted', details=details))
        return reports


class BernoulliPeriodFunction(Check):
    name = 'bernoulli_period_function'

    def evaluate(self, config):
        s_defect, u_defect = bernoulli_period_defects(self.params['k'])
        return DefectReport.exact(self.name, self.describe(), _first_nonzero(s_defect, u_defect),
                                  (('s_relation', s_defect.render()), ('three_term', u_defect.render())))


def _times(f, g, N):
    return [sum(f[i] * g[n - i] for i in range(n + 1)) for n in range(N + 1)]


class EisensteinIdentities(Check):
    """E4^2 = E8, E4 E6 = E10 and E4^3 - E6^2 = 1728 Delta, coefficientwise through q^N."""
    name = 'eisenstein_identity'

    def evaluate(self, config):
        N = self.params['N']
        E4, E6, E8, E10 = (eisenstein_qexp(k, N).coefficients for k in (4, 6, 8, 10))
        delta = delta_qexp(N).coefficients
        identities = {
            'E4^2 = E8': (_times(E4, E4, N), E8),
            'E4*E6 = E10': (_times(E4, E6, N), E10),
            'E4^3 - E6^2 = 1728*Delta': (
                [a - b for a, b in zip(_times(_times(E4, E4, N), E4, N), _times(E6, E6, N))],
                [1728 * c for c in delta]),
        }
        reports = []
        for label, (lhs, rhs) in identities.items():
            gap = next((Fraction(a - b) for a, b in zip_longest(lhs, rhs, fillvalue=0) if a != b), Fraction(0))
            reports.append(DefectReport.exact(self.name, (('identity', label), ('N', str(N))), gap))
        return reports


FORMS = {'Delta': lambda N: delta_qexp(N), 'E4': lambda N: eisenstein_qexp(4, N)}


class Modularity(Check):
    name = 'modularity'

    def evaluate(self, config):
        f = FORMS[self.params['form']](self.params['N'])
        tol = self.params.get('tol', config.tol)
        result = modularity_check_numeric(f, [complex(self.params['tau'])])
        return DefectReport.numeric(self.name, self.describe(), result.value, tol, result.error_estimate)


def _relative(a, b):
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


class LValue(Check):
    """Lambda(m) for Delta: truncation stability, functional equation, quadrature, and L(m) itself."""
    name = 'l_value'

    def evaluate(self, config):
        m = self.params['m']
        low = 20
        high = config.truncation if config.truncation > low else 2 * low
        delta = delta_qexp(high)
        coarse = completed_L(delta, 12, m, low)
        fine = completed_L(delta, 12, m)
        mirror = completed_L(delta, 12, 12 - m)
        quadrature = completed_L_quadrature(delta, 12, m)
        L = critical_l_value(delta, 12, m)
        params = self.describe()
        return [
            DefectReport.numeric('l_value_stability', params + (('N', f"{low},{high}"),),
                                 _relative(coarse.value, fine.value), 1e-12, fine.error_estimate),
            DefectReport.numeric('l_value_symmetry', params, _relative(fine.value, mirror.value), 1e-12,
                                 fine.error_estimate + mirror.error_estimate),
            DefectReport.numeric('l_value_quadrature', params, _relative(fine.value, quadrature), 1e-8,
                                 fine.error_estimate, (('series', repr(fine.value)), ('quadrature', repr(quadrature)))),
            DefectReport.numeric('critical_l_value', params, L.value, 0.0, L.error_estimate, recorded=True),
        ]


class PeriodNumeric(Check):
    name = 'period_numeric'

    def evaluate(self, config):
        N = self.params['N']
        r = period_polynomial_numeric(delta_qexp(N), 12, N)
        u_residual, s_residual = relation_residuals(r, 12)
        _, residual = projection(r, period_space(12))
        error = r.error_estimate / r.max_norm
        params = self.describe()
        return [
            DefectReport.numeric('period_relation_numeric', params + (('relation', '1+U+U^2'),),
                                 u_residual, 1e-8, error),
            DefectReport.numeric('period_relation_numeric', params + (('relation', '1+S'),),
                                 s_residual, 1e-8, error),
            DefectReport.numeric('period_projection', params, residual, 1e-6, error),
        ]


class EvenPeriodRatio(Check):
    """Rational reconstruction of the even-part coordinate ratio, at two truncations."""
    name = 'even_period_ratio'

    def evaluate(self, config):
        truncations = self.params['truncations']
        results = [even_period_ratio(delta_qexp(N), 12, N) for N in truncations]
        guesses = [Fraction(r.parameters['rational']) for r in results]
        details = []
        for N, r in zip(truncations, results):
            details += [(f"ratio N={N}", repr(r.value)), (f"rational N={N}", r.parameters['rational'])]
        error = max(r.error_estimate for r in results)
        report = DefectReport.exact(self.name, (('k', '12'), ('N', ','.join(map(str, truncations)))),
                                    guesses[0] - guesses[1], details)
        return report.with_fields(error_estimate=error)


CONSTANTS = {'pi^2/6': math.pi ** 2 / 6, '-1/12': -1 / 12}


class HurwitzValue(Check):
    name = 'hurwitz_zeta'

    def evaluate(self, config):
        result = hurwitz_zeta(self.params['s'], self.params['x'])
        expected = CONSTANTS[self.params['expected']]
        return DefectReport.numeric(self.name, self.describe(), result.value - expected, 1e-12,
                                    result.error_estimate, (('value', repr(result.value)),))


class AnalyticBernoulli(Check):
    """B(n; x) against the exact Bernoulli polynomial at x = 1/10, ..., 9/10."""
    name = 'analytic_bernoulli_B'

    def evaluate(self, config):
        n = self.params['n']
        exact = bernoulli_polynomial(n)
        worst = 0.0
        error = 0.0
        for j in range(1, 10):
            x = Fraction(j, 10)
            value = analytic_bernoulli_B(n, x)
            worst = max(worst, abs(value.value - float(exact.substitute({'x': x}))))
            error = max(error, value.error_estimate)
        return DefectReport.numeric(self.name, self.describe(), worst, 1e-10, error)


class HurwitzFormula(Check):
    name = 'hurwitz_formula'

    def evaluate(self, config):
        return hurwitz_formula_check(self.params['s'], self.params['x'])


class LadderNumeric(Check):
    name = 'appell_ladder_numeric'

    def evaluate(self, config):
        return appell_ladder_numeric(self.params['fn'], self.params['s'], self.params['x'])


class CatalanCheck(Check):
    """A(2; 1/4) = G / pi^2 with G from its alternating series."""
    name = 'catalan'

    def evaluate(self, config):
        value = analytic_bernoulli_A(2, 0.25)
        expected = catalan_series() / math.pi ** 2
        return DefectReport.numeric(self.name, self.describe(), value.value - expected, 1e-9,
                                    value.error_estimate, (('A(2;1/4)', repr(value.value)),))


class ReflectionA(Check):
    name = 'reflection_A'

    def evaluate(self, config):
        return reflection_defect_A(self.params['s'], self.params['x'])


class CyclicProbe(Check):
    name = 'analytic_cyclic_probe'

    def evaluate(self, config):
        p = self.params
        return analytic_cyclic_probe(p['n'], p['delta'], p['x'], p['y'], p['r'], p['s'])
