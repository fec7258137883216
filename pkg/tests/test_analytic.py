import math
import sys
import unittest
from fractions import Fraction

import mpmath

from idlab.analytic import (
    analytic_bernoulli_A,
    analytic_bernoulli_B,
    analytic_cyclic_probe,
    appell_ladder_numeric,
    catalan_series,
    gamma_stirling,
    hurwitz_formula_check,
    hurwitz_zeta,
    polylog_unit_circle,
    reflection_defect_A,
)
from idlab.appell.builtins import bernoulli_polynomial
from idlab.errors import AccuracyUnreachable, NearPole, OutOfDomain, PoleAtOne
from idlab.report import RECORDED


class TestGamma(unittest.TestCase):
    def test_matches_math_gamma(self):
        for x in (0.5, 1.0, 3.7, 7.25, 20.0):
            with self.subTest(x=x):
                self.assertAlmostEqual(gamma_stirling(x) / math.gamma(x), 1.0, delta=1e-12)

    def test_domain(self):
        with self.assertRaises(OutOfDomain):
            gamma_stirling(0)


class TestHurwitz(unittest.TestCase):
    def test_zeta_two(self):
        result = hurwitz_zeta(2, 1)
        self.assertAlmostEqual(result.value, math.pi ** 2 / 6, delta=1e-12)
        self.assertLess(result.error_estimate, 1e-12)

    def test_zeta_minus_one(self):
        self.assertAlmostEqual(hurwitz_zeta(-1, 1).value, -1 / 12, delta=1e-12)

    def test_against_mpmath(self):
        for s in (2.0, 3.5, 0.5, -0.5):
            for x in (0.1, 0.3, 0.75, 1.0):
                with self.subTest(s=s, x=x):
                    expected = float(mpmath.zeta(s, x))
                    self.assertAlmostEqual(hurwitz_zeta(s, x).value, expected, delta=1e-9)

    def test_negative_non_integer(self):
        expected = float(mpmath.zeta(-1.5, 0.3))
        self.assertAlmostEqual(hurwitz_zeta(-1.5, 0.3).value, expected, delta=1e-13)

    def test_against_mpmath_grid(self):
        for s in (-19.5, -15.3, -12.3, -7.5, -3.2, -1.5, -0.5, 0.5, 2.5, 10.0, 19.5):
            for x in (0.1, 0.3, 0.75, 1.0, 1.5, 2.0):
                with self.subTest(s=s, x=x), mpmath.workdps(40):
                    expected = float(mpmath.zeta(s, x))
                    result = hurwitz_zeta(s, x)
                    self.assertAlmostEqual(result.value, expected, delta=1e-12 * abs(expected) + 1e-13)
                    self.assertLessEqual(abs(result.value - expected),
                                         result.error_estimate + sys.float_info.epsilon * abs(expected))

    def test_negative_integers_are_exact(self):
        for n in range(0, 20, 3):
            for x in (0.3, 1.0, 1.75):
                with self.subTest(n=n, x=x):
                    expected = -float(bernoulli_polynomial(n + 1).substitute({'x': Fraction(x)})) / (n + 1)
                    result = hurwitz_zeta(-n, x)
                    self.assertEqual(result.value, expected)
                    self.assertEqual(result.parameters['method'], 'exact')

    def test_shift_recurrence(self):
        for s in (-7.5, -3.2, 0.5, 2.5, 6.0):
            for x in (0.1, 0.3, 0.5, 0.75, 1.0):
                with self.subTest(s=s, x=x):
                    gap = hurwitz_zeta(s, x).value - hurwitz_zeta(s, x + 1).value
                    self.assertAlmostEqual(gap, x ** -s, delta=1e-12 * max(1.0, x ** -s))

    def test_independent_of_shift(self):
        for s in (2.0, 2.5, 3.5, 4.0, 6.0):
            for x in (0.1, 0.3, 0.5, 0.75, 1.0):
                with self.subTest(s=s, x=x):
                    short = hurwitz_zeta(s, x, shift=30, depth=15)
                    long = hurwitz_zeta(s, x, shift=60, depth=15)
                    self.assertAlmostEqual(short.value / long.value, 1.0, delta=1e-13)
                    self.assertEqual(short.parameters['method'], 'euler_maclaurin')

    def test_method(self):
        self.assertEqual(hurwitz_zeta(-12.3, 0.4).parameters['method'], 'functional')
        self.assertEqual(hurwitz_zeta(-0.5, 0.4).parameters['method'], 'euler_maclaurin')
        self.assertEqual(hurwitz_zeta(-12.3, 0.4, shift=10).parameters['method'], 'euler_maclaurin')
        with self.assertRaises(OutOfDomain):
            hurwitz_zeta(2, 0.5, method='taylor')

    def test_domain(self):
        with self.assertRaises(PoleAtOne):
            hurwitz_zeta(1, 0.5)
        with self.assertRaises(OutOfDomain):
            hurwitz_zeta(2, 0)


class TestAnalyticBernoulli(unittest.TestCase):
    def test_integer_orders_are_polynomials(self):
        for n in range(1, 8):
            poly = bernoulli_polynomial(n)
            for x in (0.1, 0.3, 0.5, 0.9):
                with self.subTest(n=n, x=x):
                    expected = float(poly.substitute({'x': Fraction(str(x))}))
                    self.assertAlmostEqual(analytic_bernoulli_B(n, x).value, expected, delta=1e-10)

    def test_large_order(self):
        for s, x in ((20.5, 0.3), (13.3, 0.9), (8.5, 1.0)):
            with self.subTest(s=s, x=x), mpmath.workdps(40):
                expected = float(-s * mpmath.zeta(1 - s, x))
                self.assertAlmostEqual(analytic_bernoulli_B(s, x).value, expected, delta=1e-12 * abs(expected))

    def test_order_zero(self):
        self.assertEqual(analytic_bernoulli_B(0, 0.4).value, 1.0)

    def test_near_pole(self):
        with self.assertRaises(NearPole):
            analytic_bernoulli_B(1e-4, 0.5)

    def test_domain(self):
        for x in (0, 1.5):
            with self.subTest(x=x), self.assertRaises(OutOfDomain):
                analytic_bernoulli_B(2, x)


class TestPolylog(unittest.TestCase):
    def test_dilogarithm(self):
        for x in (0.1, 0.25, 0.6):
            with self.subTest(x=x):
                value = polylog_unit_circle(2, x).value
                theta = 2 * math.pi * x
                self.assertAlmostEqual(value.real, math.pi ** 2 * (x * x - x + 1 / 6), delta=1e-9)
                self.assertAlmostEqual(value.imag, float(mpmath.clsin(2, theta)), delta=1e-9)

    def test_catalan(self):
        catalan = float(mpmath.catalan)
        self.assertAlmostEqual(analytic_bernoulli_A(2, 0.25).value, catalan / math.pi ** 2, delta=1e-11)
        self.assertAlmostEqual(catalan_series(), catalan, delta=1e-9)

    def test_domain(self):
        with self.assertRaises(OutOfDomain):
            polylog_unit_circle(1.1, 0.3)
        for x in (0, 1):
            with self.subTest(x=x), self.assertRaises(OutOfDomain):
                polylog_unit_circle(2, x)

    def test_accuracy_unreachable(self):
        with self.assertRaises(AccuracyUnreachable) as cm:
            polylog_unit_circle(1.5, 0.5, tol=1e-15, max_terms=1000)
        self.assertGreater(cm.exception.achievable, 1e-15)


class TestNumericChecks(unittest.TestCase):
    def test_ladder(self):
        for fn, s, x in (('B', 3.5, 0.3), ('B', 2.5, 0.6), ('A', 3.5, 0.3), ('A', 3.0, 0.6)):
            with self.subTest(fn=fn, s=s, x=x):
                report = appell_ladder_numeric(fn, s, x)
                self.assertTrue(report.is_zero, report.residual)

    def test_ladder_unknown_function(self):
        with self.assertRaises(OutOfDomain):
            appell_ladder_numeric('C', 3.0, 0.5)

    def test_hurwitz_formula(self):
        for s, x in ((2.0, 0.1), (2.5, 0.3), (4.0, 0.75)):
            with self.subTest(s=s, x=x):
                self.assertTrue(hurwitz_formula_check(s, x).is_zero)
        with self.assertRaises(OutOfDomain):
            hurwitz_formula_check(1.5, 0.3)

    def test_reflection(self):
        report = reflection_defect_A(2.0, 0.2)
        self.assertTrue(report.is_zero)
        self.assertAlmostEqual(float(dict(report.details)['sum']), 0.0, delta=1e-9)
        odd = reflection_defect_A(3.0, 0.3)
        self.assertTrue(odd.is_zero)
        self.assertGreater(abs(float(dict(odd.details)['sum'])), 1e-3)

    def test_cyclic_probe(self):
        self.assertTrue(analytic_cyclic_probe(3, 0.0, 0.2, 0.3, 0.7, 1.1).is_zero)
        shifted = analytic_cyclic_probe(3, 0.5, 0.2, 0.3, 0.7, 1.1)
        self.assertEqual(shifted.status, RECORDED)
        with self.assertRaises(OutOfDomain):
            analytic_cyclic_probe(2, 0.0, 0.6, 0.6, 1.0, 0.5)


if __name__ == '__main__':
    unittest.main()
