import unittest
from fractions import Fraction
from math import comb

from idlab.appell import family_polynomials
from idlab.appell.builtins import EULER
from idlab.cyclic import BracketParams, binomial_cyclic_defect, bracket
from idlab.errors import ConfigError, TableTooShort
from idlab.exact import MultiPoly, RationalFunction, limit_at_one
from idlab.qseries import (
    INTEGER_VARIABLES,
    SYMBOLIC_VARIABLES,
    QCyclicParams,
    QKind,
    QMode,
    gaussian_binomial,
    q_binomial_cyclic_defect,
    q_bracket,
    q_cyclic_defect,
    q_cyclic_defect_sampled,
    q_cyclic_value,
    q_exponential,
    q_family_polynomials,
    q_integer,
    q_pochhammer,
    q_to_one_check,
)

q, = MultiPoly.gens(('q',))


def triples(n):
    return [(r, s, n - r - s) for r in range(n + 1) for s in range(n + 1 - r)]


class TestQBasics(unittest.TestCase):
    def setUp(self):
        self.q = RationalFunction.variable('q', ('q',))

    def test_pochhammer(self):
        self.assertEqual(q_pochhammer(self.q, 2), (1 - q) * (1 - q ** 2))
        self.assertEqual(q_pochhammer(Fraction(1, 2), 2, Fraction(1, 2)), Fraction(3, 8))
        self.assertEqual(q_pochhammer(self.q, 0), 1)

    def test_q_integer(self):
        self.assertEqual(q_integer(self.q ** 3, self.q), 1 + q + q ** 2)

    def test_gaussian_binomial(self):
        self.assertEqual(gaussian_binomial(4, 2), 1 + q + 2 * q ** 2 + q ** 3 + q ** 4)
        self.assertEqual(gaussian_binomial(3, 0), 1)
        self.assertEqual(gaussian_binomial(2, 3), 0)

    def test_gaussian_binomial_at_one(self):
        for m in range(6):
            for k in range(m + 1):
                self.assertEqual(limit_at_one(gaussian_binomial(m, k), 'q'), comb(m, k))

    def test_gaussian_binomial_symmetry(self):
        for m in range(11):
            for k in range(m + 1):
                with self.subTest(m=m, k=k):
                    self.assertEqual(gaussian_binomial(m, k), gaussian_binomial(m, m - k))

    def test_exponential(self):
        E = q_exponential(4)
        self.assertEqual(E[2], RationalFunction(MultiPoly.constant(1, ('q',)), (1 - q) * (1 - q ** 2)))


class TestQFamilies(unittest.TestCase):
    def test_low_degrees(self):
        table = q_family_polynomials(QKind.BERNOULLI, 2)
        qq, x = RationalFunction.gens(('q', 'x'))
        self.assertEqual(table.polynomials[0], 1 - qq)
        self.assertEqual(table.polynomials[1], (1 - qq) * (x - 1 / (1 + qq)))

    def test_limit_to_classical(self):
        for kind in QKind:
            with self.subTest(kind=kind):
                report = q_to_one_check(q_family_polynomials(kind, 5))
                self.assertEqual(report.check, 'q_limit')
                self.assertTrue(report.is_zero, report.details)

    def test_table_too_short(self):
        with self.assertRaises(TableTooShort):
            q_family_polynomials('q-euler', 1).require(2)


class TestQCyclic(unittest.TestCase):
    def test_integer_mode_vanishes(self):
        for kind in QKind:
            table = q_family_polynomials(kind, 3)
            for n in range(4):
                for triple in triples(n):
                    with self.subTest(kind=kind.value, triple=triple):
                        value = q_cyclic_value(table, QCyclicParams(n, QMode.INTEGER, triple))
                        self.assertTrue(value.is_zero)

    def test_bracket_degree_zero(self):
        table = q_family_polynomials(QKind.BERNOULLI, 0)
        value = q_bracket(table, QCyclicParams(0, QMode.INTEGER, (0, 0, 0)))
        self.assertEqual(value.render(), ((1 - q) ** 2).render())

    def test_bracket_degree_one(self):
        # s = 0 and t = 1 leave only the k = 0 term F_1(x) F_0(y)
        mq, mx, _ = MultiPoly.gens(INTEGER_VARIABLES)
        Q = RationalFunction.variable('q', INTEGER_VARIABLES)
        table = q_family_polynomials(QKind.BERNOULLI, 1)
        value = q_bracket(table, QCyclicParams(1, QMode.INTEGER, (0, 0, 1)))
        self.assertEqual((value * (1 + Q)).render(), ((1 - mq) ** 2 * ((1 + mq) * mx - 1)).render())

    def test_symbolic_specializes_to_integer_mode(self):
        Q = RationalFunction.variable('q', INTEGER_VARIABLES)
        for kind in QKind:
            table = q_family_polynomials(kind, 4)
            for n in range(5):
                # x and y stay symbolic through degree 2
                point = {} if n <= 2 else {'x_arg': Fraction(1, 3), 'y_arg': Fraction(-2, 5)}
                symbolic = q_cyclic_value(table, QCyclicParams(n, **point))
                for r, s, t in triples(n):
                    with self.subTest(kind=kind.value, triple=(r, s, t)):
                        specialized = symbolic.substitute({'rho': Q ** r, 'sigma': Q ** s})
                        integer = q_cyclic_value(table, QCyclicParams(n, QMode.INTEGER, (r, s, t), **point))
                        self.assertEqual(specialized, integer)

    def test_q_euler_bracket_at_one(self):
        table = q_family_polynomials(QKind.EULER, 4)
        classical = family_polynomials(EULER, 4)
        for n in range(5):
            for r, s, t in triples(n):
                with self.subTest(n=n, triple=(r, s, t)):
                    value = q_bracket(table, QCyclicParams(n, QMode.INTEGER, (r, s, t)))
                    expected = bracket(classical, BracketParams(n, s, t, 'x', 'y'))
                    self.assertEqual(limit_at_one(value, 'q'), expected)

    def test_symbolic_degree_one_cancels(self):
        for kind in QKind:
            report = q_cyclic_defect(q_family_polynomials(kind, 1), QCyclicParams(1))
            self.assertTrue(report.is_zero)
            self.assertEqual(dict(report.params), {'kind': kind.value, 'n': '1', 'mode': 'symbolic'})

    def test_symbolic_degree_zero(self):
        report = q_cyclic_defect(q_family_polynomials(QKind.BERNOULLI, 0), QCyclicParams(0))
        self.assertFalse(report.is_zero)
        self.assertEqual(report.residual,
                         '(q*rho^2*sigma + q*rho*sigma^2 - 3*q*rho*sigma - rho^2*sigma - rho*sigma^2'
                         ' + 3*rho*sigma + q - 1)/(rho*sigma)')

    def test_integer_params(self):
        report = q_cyclic_defect(q_family_polynomials(QKind.EULER, 2), QCyclicParams(2, 'integer', (1, 0, 1)))
        self.assertEqual(dict(report.params)['triple'], '1,0,1')
        for bad in [dict(n=2, mode='integer'), dict(n=2, mode='integer', triple=(1, 1, 1)),
                    dict(n=2, mode='integer', triple=(3, -1, 0)), dict(n=2, triple=(1, 1, 0)), dict(n=-1)]:
            with self.subTest(params=bad), self.assertRaises(ConfigError):
                QCyclicParams(**bad)

    def test_sampled_matches_symbolic(self):
        table = q_family_polynomials(QKind.BERNOULLI, 0)
        report = q_cyclic_defect_sampled(table, 0, seed=4, count=3, escalate_ceiling=-1)
        self.assertEqual(report.check, 'q_cyclic_sampled')
        self.assertFalse(report.is_zero)
        symbolic = q_cyclic_value(table, QCyclicParams(0))
        point_text, value_text = report.details[0]
        point = [Fraction(c) for c in point_text.strip('()').split(', ')]
        self.assertEqual(str(symbolic.substitute(dict(zip(SYMBOLIC_VARIABLES, point)))), value_text)
        self.assertEqual(report.residual, value_text)

    def test_sampled_escalates_when_all_vanish(self):
        table = q_family_polynomials(QKind.EULER, 1)
        report = q_cyclic_defect_sampled(table, 1, seed=2, count=2, escalate_ceiling=1)
        self.assertTrue(report.is_zero)
        self.assertEqual(report.details[-1], ('escalated', 'symbolic'))

    def test_sampled_needs_a_sample(self):
        with self.assertRaises(ConfigError):
            q_cyclic_defect_sampled(q_family_polynomials(QKind.EULER, 1), 1, seed=1, count=0)


class TestQBinomial(unittest.TestCase):
    def test_integer_mode_limit(self):
        for n in range(4):
            for k in range(n + 1):
                for r, s, t in triples(n):
                    with self.subTest(n=n, k=k, triple=(r, s, t)):
                        value = q_binomial_cyclic_defect(n, k, QMode.INTEGER, (r, s, t))
                        classical = binomial_cyclic_defect(n, k).substitute({'r': r, 's': s})
                        self.assertEqual(limit_at_one(value, 'q'), classical)

    def test_k_out_of_range(self):
        with self.assertRaises(ConfigError):
            q_binomial_cyclic_defect(1, 2)


if __name__ == '__main__':
    unittest.main()
