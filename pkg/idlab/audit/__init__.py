"""Plan, run and collect an audit across every engine."""

import json
import logging
from concurrent.futures import ProcessPoolExecutor
from itertools import repeat
from pathlib import Path

from idlab import __version__
from idlab.audit.checks import (
    AnalyticBernoulli,
    AppellAxioms,
    BernoulliPeriodFunction,
    BinomialDefect,
    BracketTranspose,
    CatalanCheck,
    CuspPermutation,
    CyclicDefect,
    CyclicProbe,
    CyclicSampled,
    EisensteinIdentities,
    EvenPeriodRatio,
    HurwitzFormula,
    HurwitzValue,
    LadderNumeric,
    LiteralNullspace,
    LValue,
    Modularity,
    PeriodMembership,
    PeriodNumeric,
    PeriodSpaceCheck,
    QBinomialDefect,
    QCyclic,
    QCyclicSampled,
    QLimit,
    ReflectionA,
    ReflectionControl,
    ThreeTerm,
)
from idlab.audit.claims import DERIVATIONS, derived_residual
from idlab.config import AuditConfig
from idlab.errors import MalformedDocument
from idlab.qseries import QKind
from idlab.report import DEFECT, AuditReport
from idlab.trace import log

KNOWN_MANIFEST = Path(__file__).parent / 'known.json'

FAMILY_NAMES = ('bernoulli', 'euler', 'centered_monomial', 'centered_hermite')
AXIOM_DEGREE = 12
Q_LIMIT_DEGREE = 6
SAMPLED_DEGREE = 6
HURWITZ_GRID = [(s, x) for s in (2.0, 2.5, 3.5, 4.0) for x in (0.1, 0.3, 0.5, 0.75)]
LADDER_POINTS = (('B', 3.5, 0.3), ('B', 2.5, 0.6), ('A', 3.5, 0.3), ('A', 3.0, 0.6))
REFLECTION_POINTS = ((2.0, 0.2), (2.0, 0.35), (2.5, 0.3), (3.5, 0.3))


def _triples(n):
    return [(r, s, n - r - s) for r in range(n + 1) for s in range(n + 1 - r)]


def _classical(config):
    checks = [AppellAxioms(family=f, n_max=AXIOM_DEGREE) for f in FAMILY_NAMES]
    checks.append(ReflectionControl(family='monomial', n_max=4))
    for family in FAMILY_NAMES:
        ceiling = config.n_ceiling if family == 'bernoulli' else min(config.family_ceiling, config.n_ceiling)
        checks += [CyclicDefect(family=family, n=n) for n in range(ceiling + 1)]
        checks.append(CyclicSampled(family=family, n=min(SAMPLED_DEGREE, config.n_ceiling)))
        checks += [BracketTranspose(family=family, n=n) for n in range(config.transpose_ceiling + 1)]
    return checks


def _binomial(config):
    return [BinomialDefect(n=n, k=k) for n in range(config.binomial_ceiling + 1) for k in range(n + 1)]


def _q(config):
    checks = []
    for kind in QKind:
        kind = kind.value
        checks.append(QLimit(kind=kind, n_max=Q_LIMIT_DEGREE))
        for n in range(config.q_ceiling + 1):
            checks += [QCyclic(kind=kind, n=n, mode='integer', triple=','.join(map(str, t))) for t in _triples(n)]
        checks += [QCyclic(kind=kind, n=n, mode='symbolic') for n in range(min(1, config.q_ceiling) + 1)]
        checks += [QCyclicSampled(kind=kind, n=n) for n in range(2, config.q_sample_ceiling + 1)]
    checks += [QBinomialDefect(n=n, k=k)
               for n in range(min(config.q_binomial_ceiling, config.q_ceiling) + 1) for k in range(n + 1)]
    return checks


def _modular(config):
    checks = []
    for k in config.weights:
        checks += [PeriodSpaceCheck(k=k), PeriodMembership(k=k), ThreeTerm(k=k), BernoulliPeriodFunction(k=k)]
    checks += [LiteralNullspace(k=4), CuspPermutation(), EisensteinIdentities(N=config.truncation)]
    return checks


def _numeric(config):
    checks = [
        Modularity(form='Delta', N=config.truncation, tau='1j'),
        Modularity(form='Delta', N=config.truncation, tau='2j'),
        Modularity(form='E4', N=60, tau='(0.3+1.1j)', tol=1e-8),
    ]
    checks += [LValue(m=m) for m in range(1, 12)]
    checks += [PeriodNumeric(N=config.truncation), EvenPeriodRatio(truncations=(30, 50))]
    return checks


def _analytic(config):
    checks = [HurwitzValue(s=2.0, x=1.0, expected='pi^2/6'), HurwitzValue(s=-1.0, x=1.0, expected='-1/12')]
    checks += [AnalyticBernoulli(n=n) for n in range(1, 9)]
    checks += [HurwitzFormula(s=s, x=x) for s, x in HURWITZ_GRID]
    checks += [LadderNumeric(fn=fn, s=s, x=x) for fn, s, x in LADDER_POINTS]
    checks.append(CatalanCheck())
    checks += [ReflectionA(s=s, x=x) for s, x in REFLECTION_POINTS]
    checks += [CyclicProbe(n=3, delta=delta, x=0.2, y=0.3, r=0.7, s=1.1) for delta in (0.0, 0.5)]
    return checks


PLANNERS = {
    'classical': _classical,
    'binomial': _binomial,
    'q': _q,
    'modular': _modular,
    'numeric': _numeric,
    'analytic': _analytic,
}


def plan_checks(config: AuditConfig):
    """Every check the configured groups ask for, in a fixed order."""
    config.validate()
    checks = []
    for group in config.groups:
        checks += PLANNERS[group](config)
    return checks


def load_manifest(path=KNOWN_MANIFEST) -> list[dict]:
    """Entries of the known-discrepancy manifest, in match order."""
    try:
        document = json.loads(Path(path).read_text(encoding='utf-8'))
    except (OSError, json.JSONDecodeError) as e:
        raise MalformedDocument(f"cannot read known-discrepancy manifest {path}: {e}")
    entries = document['entries']
    for item in entries:
        if 'residual' not in item and item.get('derive') not in DERIVATIONS:
            raise MalformedDocument(f"manifest entry for {item.get('check')} needs a residual or a known derivation")
    return entries


def is_known(entry, manifest) -> bool:
    """
    The first manifest entry whose check and params match decides. Its listed
    or derived residual must equal the entry's exactly.
    """
    params = dict(entry.params)
    for item in manifest:
        if item['check'] != entry.check:
            continue
        if any(params.get(k) != v for k, v in item.get('params', {}).items()):
            continue
        if 'residual' in item:
            return item['residual'] == entry.residual
        if 'derive' in item:
            return derived_residual(item['derive'], entry) == entry.residual
        return False
    return False


def mark_known(entry, manifest):
    if entry.status == DEFECT and is_known(entry, manifest):
        return entry.with_fields(known=True)
    return entry


def run_check(check, config):
    return check.run(config)


@log(lambda report: report.summary)
def run_audit(config: AuditConfig, manifest=None) -> AuditReport:
    checks = plan_checks(config)
    manifest = load_manifest() if manifest is None else manifest
    logging.info("Running %d checks with %d job(s)", len(checks), config.jobs)
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            batches = list(pool.map(run_check, checks, repeat(config)))
    else:
        batches = [run_check(check, config) for check in checks]
    entries = [mark_known(entry, manifest) for batch in batches for entry in batch]
    entries.sort(key=lambda e: e.sort_key)
    return AuditReport(__version__, config.echo(), tuple(entries))
