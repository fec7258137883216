import json
import unittest
from fractions import Fraction

from idlab.errors import AccuracyUnreachable, UnsupportedWeight
from idlab.exact import MultiPoly
from idlab.report import (
    DEFECT,
    ERROR,
    RECORDED,
    VERIFIED,
    AuditReport,
    DefectReport,
    EvalResult,
    emit_report,
    render_value,
)


def sample_report():
    r, s = MultiPoly.gens(('r', 's'))
    entries = (
        DefectReport.exact('binomial_cyclic_defect', (('n', '1'), ('k', '0')), -r ** 2 - r * s - s ** 2 + r + s),
        DefectReport.exact('period_space', (('k', '4'),), Fraction(0), (('dimension', '1'),)),
        DefectReport.numeric('critical_l_value', (('m', '1'),), 0.0374, 0.0, 1e-30, recorded=True),
        DefectReport.failure('period_space', (('k', '42'),), UnsupportedWeight("weight 42")),
    )
    return AuditReport('0.1.0', {'groups': ['modular']}, entries)


class TestDefectReport(unittest.TestCase):
    def test_exact(self):
        report = sample_report().checks[0]
        self.assertFalse(report.is_zero)
        self.assertEqual(report.residual, '-r^2 - r*s - s^2 + r + s')
        self.assertEqual(report.status, DEFECT)
        self.assertEqual(report.params_text, 'n=1, k=0')

    def test_statuses(self):
        self.assertEqual([e.status for e in sample_report().checks], [DEFECT, VERIFIED, RECORDED, ERROR])

    def test_numeric_tolerance(self):
        self.assertTrue(DefectReport.numeric('x', (), -1e-11, 1e-10).is_zero)
        self.assertFalse(DefectReport.numeric('x', (), 2e-10, 1e-10).is_zero)

    def test_failure(self):
        report = DefectReport.failure('l_value', (), AccuracyUnreachable("too many terms", 1e-3))
        self.assertTrue(report.numeric_failure)
        self.assertTrue(report.error.startswith('AccuracyUnreachable: too many terms'))

    def test_render_value(self):
        self.assertEqual(render_value(Fraction(6, 4)), '3/2')
        self.assertEqual(render_value(3), '3')
        self.assertEqual(render_value(0.25), '0.25')

    def test_eval_result(self):
        doc = EvalResult(1.5, 1e-12, {'form': 'Delta', 'k': 12, 'exact': Fraction(1, 3)}).to_dict()
        self.assertEqual(doc, {'value': '1.5', 'error_estimate': 1e-12,
                               'parameters': {'form': 'Delta', 'k': 12, 'exact': '1/3'}})


class TestAuditReport(unittest.TestCase):
    def test_summary(self):
        summary = sample_report().summary
        self.assertEqual(summary, {VERIFIED: 1, DEFECT: 1, ERROR: 1, RECORDED: 1, 'known': 0})

    def test_exit_codes(self):
        report = sample_report()
        self.assertEqual(report.exit_code(), 1)
        known = AuditReport('0.1.0', {}, (report.checks[0].with_fields(known=True), report.checks[1]))
        self.assertEqual(known.exit_code(), 1)
        self.assertEqual(known.exit_code(expect_known=True), 0)
        numeric = DefectReport.failure('hurwitz_formula', (), AccuracyUnreachable("bound", 1e-6))
        self.assertEqual(AuditReport('0.1.0', {}, (report.checks[1], numeric)).exit_code(), 3)
        self.assertEqual(AuditReport('0.1.0', {}, (report.checks[1],)).exit_code(), 0)

    def test_json(self):
        document = json.loads(emit_report(sample_report(), 'json'))
        self.assertEqual(document['version'], '0.1.0')
        first = document['checks'][0]
        self.assertEqual(first['name'], 'binomial_cyclic_defect')
        self.assertEqual(first['params'], {'n': '1', 'k': '0'})
        self.assertEqual(first['status'], 'defect')
        self.assertFalse(first['known'])
        self.assertIn('error', document['checks'][3])
        self.assertEqual(document['summary']['verified'], 1)

    def test_text_has_same_content(self):
        text = emit_report(sample_report(), 'text')
        self.assertIn('[defect] binomial_cyclic_defect n=1, k=0', text)
        self.assertIn('    residual: -r^2 - r*s - s^2 + r + s', text)
        self.assertIn('    dimension: 1', text)
        self.assertIn('error: UnsupportedWeight: weight 42', text)
        self.assertTrue(text.rstrip().endswith('known=0'))

    def test_unknown_format(self):
        with self.assertRaises(ValueError):
            emit_report(sample_report(), 'xml')


if __name__ == '__main__':
    unittest.main()
