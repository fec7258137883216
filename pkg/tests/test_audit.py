import json
import tempfile
import unittest
from pathlib import Path

from idlab.appell import family_polynomials, get_family
from idlab.audit import is_known, load_manifest, mark_known, plan_checks, run_audit
from idlab.audit.checks import CatalanCheck, CyclicProbe, HurwitzValue, LValue, PeriodSpaceCheck
from idlab.audit.claims import DERIVATIONS, derived_residual, literal_three_term
from idlab.config import AuditConfig
from idlab.cyclic import cyclic_defect
from idlab.errors import ConfigError, MalformedDocument
from idlab.exact import MultiPoly
from idlab.modular import Z, three_term_paper
from idlab.qseries import q_binomial_cyclic_defect
from idlab.report import DEFECT, ERROR, RECORDED, VERIFIED, DefectReport

MODULAR = AuditConfig(groups=('modular',), weights=(4, 6, 8, 10, 12))


class TestPlan(unittest.TestCase):
    def test_fixed_order(self):
        names = [c.name for c in plan_checks(MODULAR)]
        self.assertEqual(names[:4], ['period_space', 'period_membership', 'three_term', 'bernoulli_period_function'])
        self.assertEqual(names[-3:], ['literal_nullspace', 'cusp_permutation', 'eisenstein_identity'])

    def test_binomial_grid(self):
        checks = plan_checks(AuditConfig(groups=('binomial',), binomial_ceiling=2))
        self.assertEqual([c.params_text for c in checks],
                         ['n=0, k=0', 'n=1, k=0', 'n=1, k=1', 'n=2, k=0', 'n=2, k=1', 'n=2, k=2'])

    def test_empty_selection(self):
        with self.assertRaises(ConfigError):
            plan_checks(AuditConfig(groups=()))


class TestKnownManifest(unittest.TestCase):
    def test_listed_residual_must_match(self):
        manifest = [{'check': 'three_term_paper', 'params': {'k': '4'}, 'residual': '4*z - 2'}]
        entry = DefectReport('three_term_paper', (('k', '4'), ('poly', 'z^2 - 1')), False, '4*z - 2')
        self.assertTrue(is_known(entry, manifest))
        self.assertFalse(is_known(entry.with_fields(residual='4*z'), manifest))
        self.assertFalse(is_known(entry.with_fields(check='three_term_standard'), manifest))

    def test_first_match_decides(self):
        manifest = [{'check': 'binomial_cyclic_defect', 'params': {'n': '1'}, 'residual': 'r'},
                    {'check': 'binomial_cyclic_defect', 'residual': 's'}]
        entry = DefectReport('binomial_cyclic_defect', (('n', '1'), ('k', '0')), False, 's')
        self.assertFalse(is_known(entry, manifest))
        self.assertTrue(is_known(entry.with_fields(params=(('n', '2'), ('k', '0'))), manifest))

    def test_entry_without_residual_is_never_known(self):
        entry = DefectReport('binomial_cyclic_defect', (('n', '1'), ('k', '0')), False, 's')
        self.assertFalse(is_known(entry, [{'check': 'binomial_cyclic_defect'}]))

    def test_only_defects_are_marked(self):
        manifest = [{'check': 'period_space', 'residual': '1'}]
        verified = DefectReport('period_space', (('k', '4'),), True, '0')
        self.assertFalse(mark_known(verified, manifest).known)
        self.assertTrue(mark_known(verified.with_fields(is_zero=False, residual='1'), manifest).known)

    def test_shipped_manifest(self):
        entries = load_manifest()
        self.assertTrue(all('check' in e for e in entries))
        self.assertIn('three_term_paper', {e['check'] for e in entries})
        self.assertTrue(all('residual' in e or e['derive'] in DERIVATIONS for e in entries))

    def test_malformed_manifest(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'known.json'
            path.write_text(json.dumps({'entries': [{'check': 'three_term_paper'}]}), encoding='utf-8')
            with self.assertRaises(MalformedDocument):
                load_manifest(path)
            path.write_text(json.dumps({'entries': [{'check': 'x', 'derive': 'nope'}]}), encoding='utf-8')
            with self.assertRaises(MalformedDocument):
                load_manifest(path)

    def test_changed_residual_is_not_known(self):
        manifest = load_manifest()
        cases = (
            ('three_term_paper', (('k', '6'),)),
            ('three_term_paper', (('k', '6'), ('poly', 'z^4 - 1'))),
            ('cyclic_defect', (('family', 'euler'), ('n', '5'))),
            ('cyclic_defect', (('family', 'centered_hermite'), ('n', '3'))),
            ('binomial_cyclic_defect', (('n', '3'), ('k', '1'))),
            ('q_binomial_cyclic_defect', (('n', '1'), ('k', '0'))),
            ('q_cyclic_defect', (('kind', 'q-euler'), ('n', '1'), ('mode', 'symbolic'))),
        )
        for check, params in cases:
            with self.subTest(check=check, params=params):
                entry = DefectReport(check, params, False, 'totally wrong residual 12345*z')
                self.assertFalse(is_known(entry, manifest))

    def test_derived_residuals(self):
        manifest = load_manifest()
        literal = DefectReport('three_term_paper', (('k', '6'), ('poly', 'z^4 - 1')), False,
                               '8*z^3 - 12*z^2 + 8*z - 2')
        self.assertTrue(is_known(literal, manifest))
        self.assertFalse(is_known(literal.with_fields(params=(('k', '6'), ('poly', 'z^4 + 1'))), manifest))
        euler = DefectReport('cyclic_defect', (('family', 'euler'), ('n', '2')), False, '')
        self.assertEqual(derived_residual('cyclic', euler), '-1/4*r^2*s - 1/4*r*s^2 + 1/2*r*s')
        monomial = euler.with_fields(params=(('family', 'centered_monomial'), ('n', '2')))
        self.assertEqual(derived_residual('cyclic', monomial), '1/8*r^2*s + 1/8*r*s^2 - 1/4*r*s')
        binomial = DefectReport('binomial_cyclic_defect', (('n', '1'), ('k', '0')), False, '')
        self.assertEqual(derived_residual('binomial', binomial), '-r^2 - r*s - s^2 + r + s')
        q = DefectReport('q_cyclic_defect', (('kind', 'q-bernoulli'), ('n', '0'), ('mode', 'symbolic')), False, '')
        self.assertEqual(derived_residual('q_cyclic', q),
                         '(q*rho^2*sigma + q*rho*sigma^2 - 3*q*rho*sigma - rho^2*sigma - rho*sigma^2'
                         ' + 3*rho*sigma + q - 1)/(rho*sigma)')

    def test_derivations_agree_with_engine(self):
        table = family_polynomials(get_family('centered_hermite'), 3)
        hermite = DefectReport.exact('cyclic_defect', (('family', 'centered_hermite'), ('n', '3')),
                                     cyclic_defect(table, 3))
        self.assertEqual(derived_residual('cyclic', hermite), hermite.residual)
        q = DefectReport.exact('q_binomial_cyclic_defect', (('n', '2'), ('k', '1')), q_binomial_cyclic_defect(2, 1))
        self.assertEqual(derived_residual('q_binomial', q), q.residual)
        z, = MultiPoly.gens(Z)
        for k in range(4, 31, 2):
            with self.subTest(k=k):
                self.assertEqual(literal_three_term(k), three_term_paper(z ** (k - 2) - 1, k).to_poly())


class TestRunAudit(unittest.TestCase):
    def test_modular_group(self):
        report = run_audit(MODULAR)
        by_name = {}
        for entry in report.checks:
            by_name.setdefault(entry.check, []).append(entry)
        self.assertEqual(len(by_name['period_space']), 5)
        self.assertTrue(all(e.status == VERIFIED for e in by_name['period_space']))
        self.assertTrue(all(e.status == VERIFIED for e in by_name['three_term_standard']))
        self.assertTrue(all(e.status == VERIFIED for e in by_name['bernoulli_period_function']))
        self.assertTrue(all(e.status == VERIFIED for e in by_name['eisenstein_identity']))
        literal = [e for e in by_name['three_term_paper'] if dict(e.params)['k'] == '4']
        self.assertEqual(literal[0].residual, '4*z - 2')
        self.assertTrue(literal[0].known)
        defects = [e for e in report.checks if e.status == DEFECT]
        self.assertTrue(all(e.check == 'three_term_paper' and e.known for e in defects))
        self.assertEqual(report.summary[ERROR], 0)
        self.assertEqual(report.exit_code(), 1)
        self.assertEqual(report.exit_code(expect_known=True), 0)

    def test_deterministic(self):
        self.assertEqual(run_audit(MODULAR).to_dict(), run_audit(MODULAR).to_dict())

    def test_sorted(self):
        keys = [e.sort_key for e in run_audit(MODULAR).checks]
        self.assertEqual(keys, sorted(keys))

    def test_workers_do_not_change_results(self):
        config = AuditConfig(groups=('binomial',), binomial_ceiling=3)
        serial = run_audit(config)
        parallel = run_audit(AuditConfig(groups=('binomial',), binomial_ceiling=3, jobs=2))
        self.assertEqual(serial.to_dict(), parallel.to_dict())
        self.assertTrue(all(e.known for e in serial.checks if e.status == DEFECT))

    def test_classical_group(self):
        config = AuditConfig(groups=('classical',), n_ceiling=3, family_ceiling=2, transpose_ceiling=2)
        report = run_audit(config)
        self.assertEqual(report.summary[ERROR], 0)
        bernoulli = [e for e in report.checks if dict(e.params).get('family') == 'bernoulli']
        self.assertTrue(bernoulli)
        self.assertTrue(all(e.status == VERIFIED for e in bernoulli))
        self.assertTrue(all(e.known for e in report.checks if e.status == DEFECT))
        self.assertEqual(report.exit_code(expect_known=True), 0)

    def test_q_group(self):
        config = AuditConfig(groups=('q',), q_ceiling=1, q_sample_ceiling=2, q_binomial_ceiling=1)
        report = run_audit(config)
        self.assertEqual(report.summary[ERROR], 0)
        integer = [e for e in report.checks if dict(e.params).get('mode') == 'integer']
        self.assertTrue(integer)
        self.assertTrue(all(e.status == VERIFIED for e in integer))
        self.assertTrue(all(e.status == VERIFIED for e in report.checks if e.check == 'q_limit'))
        self.assertEqual(report.exit_code(expect_known=True), 0)

    def test_config_echo(self):
        report = run_audit(AuditConfig(groups=('binomial',), binomial_ceiling=1, jobs=1))
        self.assertEqual(report.config['groups'], ['binomial'])
        self.assertNotIn('jobs', report.config)


class TestChecks(unittest.TestCase):
    config = AuditConfig()

    def test_failure_becomes_error_entry(self):
        reports = PeriodSpaceCheck(k=42).run(self.config)
        self.assertEqual(len(reports), 1)
        self.assertEqual(reports[0].status, ERROR)
        self.assertTrue(reports[0].error.startswith('UnsupportedWeight'))
        self.assertFalse(reports[0].numeric_failure)

    def test_l_value(self):
        reports = LValue(m=3).run(self.config)
        self.assertEqual([r.status for r in reports], [VERIFIED, VERIFIED, VERIFIED, RECORDED])
        self.assertEqual(reports[-1].check, 'critical_l_value')

    def test_analytic_checks(self):
        for check in (HurwitzValue(s=2.0, x=1.0, expected='pi^2/6'), CatalanCheck(),
                      CyclicProbe(n=3, delta=0.0, x=0.2, y=0.3, r=0.7, s=1.1)):
            with self.subTest(check=str(check)):
                self.assertEqual([r.status for r in check.run(self.config)], [VERIFIED])

    def test_timings(self):
        reports = CatalanCheck().run(AuditConfig(timings=True))
        self.assertGreater(reports[0].elapsed_ms, 0)


if __name__ == '__main__':
    unittest.main()
