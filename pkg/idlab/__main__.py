# idlab audits cyclic vanishing identities of Appell-type polynomial families
# and reports the exact defect of every identity that fails

import argparse
import json
import logging
import sys

from idlab import __version__
from idlab.appell import check_ladder, egf_defect, family_polynomials, get_family, load_family_file, reflection_report
from idlab.audit import load_manifest, mark_known, run_audit
from idlab.config import AuditConfig, history_db, log_file
from idlab.cyclic import binomial_cyclic_defect, cyclic_defect, cyclic_defect_sampled
from idlab.db import recent_runs, record_report
from idlab.errors import (
    ConfigError,
    IdlabError,
    MalformedDocument,
    NonUnimodular,
    NumericError,
    PolySyntaxError,
    UnknownVariable,
    UnsupportedWeight,
    WeightMismatch,
)
from idlab.modular import GL2Mat, S, T, U, as_polymod, delta_qexp, eisenstein_qexp, period_space, s_relation, slash
from idlab.modular import three_term_paper, three_term_standard
from idlab.modular.numeric import (
    completed_L,
    critical_l_value,
    even_period_ratio,
    period_polynomial_numeric,
    projection,
    relation_residuals,
)
from idlab.parse import parse_poly
from idlab.qseries import QCyclicParams, q_cyclic_defect, q_cyclic_defect_sampled, q_family_polynomials
from idlab.qseries import q_to_one_check
from idlab.analytic import analytic_bernoulli_A, analytic_bernoulli_B, hurwitz_zeta, polylog_unit_circle
from idlab.report import AuditReport, DefectReport, emit_report

USAGE_ERRORS = (ConfigError, PolySyntaxError, UnknownVariable, MalformedDocument,
                NonUnimodular, UnsupportedWeight, WeightMismatch)
MATRICES = {'S': S, 'T': T, 'U': U}
ANALYTIC = {
    'zeta': hurwitz_zeta,
    'B': analytic_bernoulli_B,
    'A': analytic_bernoulli_A,
    'Li': polylog_unit_circle,
}


common = argparse.ArgumentParser(add_help=False)
common.add_argument(
    '--json',
    help='Print JSON instead of text',
    action='store_true',
    default=False
)
common.add_argument(
    '--expect-known',
    help='Do not count documented discrepancies as failures',
    action='store_true',
    default=False
)

parser = argparse.ArgumentParser(prog='idlab')
parser.add_argument('--version', action='version', version=f'idlab {__version__}')

subparsers = parser.add_subparsers(
    dest='command',
    help='The command to run'
)
subparsers.required = True

for name, help_text in (('bernoulli', 'Print Bernoulli polynomials'), ('euler', 'Print Euler polynomials')):
    p = subparsers.add_parser(name, help=help_text, parents=[common])
    p.add_argument('--n', help='Highest degree', type=int, default=6)

family_parser = subparsers.add_parser(
    'family',
    help='Load a family descriptor and check the Appell axioms',
    parents=[common]
)
family_parser.add_argument('path', help='The family descriptor (JSON)')
family_parser.add_argument('--n', help='Highest degree', type=int, default=6)

cyclic_parser = subparsers.add_parser(
    'cyclic-check',
    help='Compute the cyclic defect of a family',
    parents=[common]
)
cyclic_parser.add_argument('--family', help='A builtin family name or a descriptor path', default='bernoulli')
cyclic_parser.add_argument('--n', help='The bracket degree', type=int, default=2)
cyclic_parser.add_argument('--mode', help='symbolic or sampled', choices=['symbolic', 'sampled'], default='symbolic')
cyclic_parser.add_argument('--seed', help='Sampling seed', type=int, default=42)
cyclic_parser.add_argument('--samples', help='Number of sample points', type=int, default=5)

binomial_parser = subparsers.add_parser(
    'binomial-defect',
    help='The per-k binomial expression of the cyclic sum',
    parents=[common]
)
binomial_parser.add_argument('--n', type=int, default=1)
binomial_parser.add_argument('--k', type=int, default=0)

for name, help_text in (('q-polys', 'Print q-Bernoulli or q-Euler polynomials'),
                        ('q-limit', 'Check the q -> 1 degeneration')):
    p = subparsers.add_parser(name, help=help_text, parents=[common])
    p.add_argument('--kind', choices=['q-bernoulli', 'q-euler'], default='q-bernoulli')
    p.add_argument('--n', help='Highest degree', type=int, default=4)

q_cyclic_parser = subparsers.add_parser(
    'q-cyclic-check',
    help='Compute the q-cyclic defect',
    parents=[common]
)
q_cyclic_parser.add_argument('--kind', choices=['q-bernoulli', 'q-euler'], default='q-bernoulli')
q_cyclic_parser.add_argument('--n', type=int, default=0)
q_cyclic_parser.add_argument('--mode', choices=['symbolic', 'integer', 'sampled'], default='symbolic')
q_cyclic_parser.add_argument('--triple', help='r,s,t for integer mode', default=None)
q_cyclic_parser.add_argument('--seed', type=int, default=42)
q_cyclic_parser.add_argument('--samples', type=int, default=5)

period_parser = subparsers.add_parser(
    'period-space',
    help='Exact basis of the period space',
    parents=[common]
)
period_parser.add_argument('--weight', type=int, default=12)

three_term_parser = subparsers.add_parser(
    'three-term',
    help='Literal and standard three-term residuals of a polynomial in z',
    parents=[common]
)
three_term_parser.add_argument('poly', help='A polynomial in z, e.g. "z^2 - 1"')
three_term_parser.add_argument('--weight', type=int, default=4)

slash_parser = subparsers.add_parser(
    'slash',
    help='Apply the weight k-2 slash action',
    parents=[common]
)
slash_parser.add_argument('poly', help='A polynomial in z')
slash_parser.add_argument('--weight', type=int, default=4)
slash_parser.add_argument('--matrix', help='S, T, U or a,b,c,d', default='S')

qexp_parser = subparsers.add_parser(
    'qexp',
    help='q-expansion of E_k or Delta',
    parents=[common]
)
qexp_parser.add_argument('--form', choices=['eisenstein', 'delta'], default='eisenstein')
qexp_parser.add_argument('--weight', type=int, default=4)
qexp_parser.add_argument('--truncation', type=int, default=10)

l_value_parser = subparsers.add_parser(
    'l-value',
    help='Completed and critical L-values of Delta',
    parents=[common]
)
l_value_parser.add_argument('--m', type=int, default=1)
l_value_parser.add_argument('--truncation', type=int, default=40)

period_numeric_parser = subparsers.add_parser(
    'period-numeric',
    help='Numeric period polynomial of Delta',
    parents=[common]
)
period_numeric_parser.add_argument('--truncation', type=int, default=40)

analytic_parser = subparsers.add_parser(
    'analytic',
    help='Evaluate zeta(s, x), B(s; x), A(s; x) or Li_s(e^{2 pi i x})',
    parents=[common]
)
analytic_parser.add_argument('--fn', choices=sorted(ANALYTIC), default='B')
analytic_parser.add_argument('--s', type=float, default=2.0)
analytic_parser.add_argument('--x', type=float, default=0.25)
analytic_parser.add_argument('--tol', type=float, default=None)

audit_parser = subparsers.add_parser(
    'audit',
    help='Run the full audit',
    parents=[common]
)
audit_parser.add_argument('--groups', help='Comma-separated check groups', default=None)
audit_parser.add_argument('--n', help='Cyclic defect ceiling', type=int, default=None)
audit_parser.add_argument('--weight', help='Weights: k, a..b or a list', default=None)
audit_parser.add_argument('--truncation', type=int, default=None)
audit_parser.add_argument('--tol', type=float, default=None)
audit_parser.add_argument('--seed', type=int, default=None)
audit_parser.add_argument('--samples', type=int, default=None)
audit_parser.add_argument('--jobs', help='Worker processes', type=int, default=None)
audit_parser.add_argument('--timings', help='Record elapsed_ms per check', action='store_true', default=False)
audit_parser.add_argument('--record', help='Store the run in this sqlite file', nargs='?', const='', default=None)

history_parser = subparsers.add_parser(
    'history',
    help='List recorded audit runs'
)
history_parser.add_argument('--db', help='The sqlite history file', default=None)
history_parser.add_argument('--limit', type=int, default=10)


def show(document, args, text):
    if args.json:
        print(json.dumps(document, indent=2))
    else:
        print(text)


def finish(reports, args):
    """Print check reports and return the exit code they imply."""
    manifest = load_manifest()
    report = AuditReport(__version__, {'command': args.command}, tuple(mark_known(r, manifest) for r in reports))
    print(emit_report(report, 'json' if args.json else 'text'), end='')
    return report.exit_code(args.expect_known)


def load_table(name, n):
    family = load_family_file(name) if name.endswith('.json') else get_family(name)
    return family_polynomials(family, n)


def run_polynomials(args):
    table = family_polynomials(get_family(args.command), args.n)
    rendered = [p.render() for p in table.polynomials]
    show({'family': args.command, 'polynomials': rendered}, args,
         '\n'.join(f"F_{n}(x) = {p}" for n, p in enumerate(rendered)))
    return 0


def run_family(args):
    table = family_polynomials(load_family_file(args.path), args.n)
    if not args.json:
        for n, p in enumerate(table.polynomials):
            print(f"F_{n}(x) = {p.render()}")
    return finish([check_ladder(table), reflection_report(table), egf_defect(table)], args)


def run_cyclic(args):
    table = load_table(args.family, args.n)
    if args.mode == 'sampled':
        return finish(cyclic_defect_sampled(table, args.n, args.seed, args.samples), args)
    params = (('family', table.family.name), ('n', str(args.n)))
    return finish([DefectReport.exact('cyclic_defect', params, cyclic_defect(table, args.n))], args)


def run_binomial(args):
    params = (('n', str(args.n)), ('k', str(args.k)))
    return finish([DefectReport.exact('binomial_cyclic_defect', params, binomial_cyclic_defect(args.n, args.k))], args)


def run_q_polys(args):
    table = q_family_polynomials(args.kind, args.n)
    rendered = [p.render() for p in table.polynomials]
    show({'kind': args.kind, 'polynomials': rendered}, args,
         '\n'.join(f"F_{n}(q; x) = {p}" for n, p in enumerate(rendered)))
    return 0


def run_q_limit(args):
    return finish([q_to_one_check(q_family_polynomials(args.kind, args.n))], args)


def run_q_cyclic(args):
    table = q_family_polynomials(args.kind, args.n)
    if args.mode == 'sampled':
        return finish([q_cyclic_defect_sampled(table, args.n, args.seed, args.samples)], args)
    triple = None
    if args.triple is not None:
        try:
            triple = tuple(int(v) for v in args.triple.split(','))
        except ValueError:
            raise ConfigError(f"--triple must be r,s,t integers, not {args.triple!r}")
    return finish([q_cyclic_defect(table, QCyclicParams(args.n, args.mode, triple))], args)


def run_period_space(args):
    space = period_space(args.weight)
    basis = [b.render() for b in space.basis]
    show({'weight': args.weight, 'dimension': space.dimension, 'basis': basis,
          'coefficients': [[str(c) for c in b.coefficients] for b in space.basis]}, args,
         f"dimension {space.dimension}\n" + '\n'.join(basis))
    return 0


def run_three_term(args):
    P = as_polymod(parse_poly(args.poly, ('z',)).poly, args.weight - 2)
    params = (('k', str(args.weight)), ('poly', P.render()))
    return finish([DefectReport.exact('three_term_paper', params, three_term_paper(P, args.weight)),
                   DefectReport.exact('three_term_standard', params, three_term_standard(P, args.weight)),
                   DefectReport.exact('s_relation', params, s_relation(P))], args)


def parse_matrix(text) -> GL2Mat:
    if text in MATRICES:
        return MATRICES[text]
    try:
        a, b, c, d = (int(v) for v in text.split(','))
    except ValueError:
        raise ConfigError(f"--matrix must be S, T, U or a,b,c,d, not {text!r}")
    return GL2Mat(a, b, c, d)


def run_slash(args):
    P = as_polymod(parse_poly(args.poly, ('z',)).poly, args.weight - 2)
    g = parse_matrix(args.matrix)
    result = slash(P, g).render()
    show({'poly': P.render(), 'matrix': str(g), 'weight': args.weight - 2, 'result': result}, args, result)
    return 0


def run_qexp(args):
    N = args.truncation
    f = delta_qexp(N) if args.form == 'delta' else eisenstein_qexp(args.weight, N)
    coefficients = [str(c) for c in f.coefficients]
    show({'form': f.name, 'weight': f.weight, 'coefficients': coefficients}, args,
         ' + '.join(f"({c})*q^{n}" for n, c in enumerate(coefficients) if c != '0'))
    return 0


def run_l_value(args):
    delta = delta_qexp(args.truncation)
    completed = completed_L(delta, 12, args.m)
    critical = critical_l_value(delta, 12, args.m)
    show({'completed': completed.to_dict(), 'critical': critical.to_dict()}, args,
         f"Lambda({args.m}) = {completed.value!r} +- {completed.error_estimate:.3e}\n"
         f"L(Delta, {args.m}) = {critical.value!r} +- {critical.error_estimate:.3e}")
    return 0


def run_period_numeric(args):
    N = args.truncation
    delta = delta_qexp(N)
    r = period_polynomial_numeric(delta, 12, N)
    u_residual, s_residual = relation_residuals(r, 12)
    _, residual = projection(r, period_space(12))
    ratio = even_period_ratio(delta, 12, N)
    document = {
        'coefficients': [repr(c) for c in r.coefficients],
        'error_estimate': r.error_estimate,
        'three_term_residual': u_residual,
        's_relation_residual': s_residual,
        'projection_residual': residual,
        'even_ratio': ratio.to_dict(),
    }
    show(document, args, '\n'.join(f"{k}: {v}" for k, v in document.items()))
    return 0


def run_analytic(args):
    f = ANALYTIC[args.fn]
    result = f(args.s, args.x) if args.tol is None or args.fn in ('zeta', 'B') else f(args.s, args.x, args.tol)
    show(result.to_dict(), args, f"{result.value!r} +- {result.error_estimate:.3e}")
    return 0


def run_audit_command(args):
    config = AuditConfig.from_args(args)
    report = run_audit(config)
    print(emit_report(report, 'json' if args.json else 'text'), end='')
    if args.record is not None:
        record_report(report, args.record or history_db(), config.expect_known)
    return report.exit_code(config.expect_known)


def run_history(args):
    for run in recent_runs(args.db, args.limit):
        print(f"{run.id:5d}  {run.created_at:%Y-%m-%d %H:%M:%S}  idlab {run.version}  "
              f"verified={run.verified} defect={run.defect} error={run.error} "
              f"recorded={run.recorded} known={run.known}  exit={run.exit_code}")
    return 0


COMMANDS = {
    'bernoulli': run_polynomials,
    'euler': run_polynomials,
    'family': run_family,
    'cyclic-check': run_cyclic,
    'binomial-defect': run_binomial,
    'q-polys': run_q_polys,
    'q-limit': run_q_limit,
    'q-cyclic-check': run_q_cyclic,
    'period-space': run_period_space,
    'three-term': run_three_term,
    'slash': run_slash,
    'qexp': run_qexp,
    'l-value': run_l_value,
    'period-numeric': run_period_numeric,
    'analytic': run_analytic,
    'audit': run_audit_command,
    'history': run_history,
}


def main(argv=None):
    args = parser.parse_args(argv)
    logging.basicConfig(
        filename=log_file(),
        level=logging.DEBUG,
        encoding='utf-8'
    )
    logging.info('Running %s', args.command)
    try:
        return COMMANDS[args.command](args)
    except USAGE_ERRORS as e:
        logging.error(e)
        print(f"idlab: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except NumericError as e:
        logging.error(e)
        print(f"idlab: {type(e).__name__}: {e}", file=sys.stderr)
        return 3
    except IdlabError as e:
        logging.exception(e)
        print(f"idlab: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == '__main__':
    sys.exit(main())
