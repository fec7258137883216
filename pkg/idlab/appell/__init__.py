"""
Appell polynomial families.

A family is given by the exponential generating function A(w) e^{lambda w x}
with A(w) = sum a_m w^m / m!. The table of polynomials F_0..F_n is expanded
from that generating function; the ladder and reflection axioms are checked
exactly, never assumed.
"""

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from pathlib import Path
from typing import Callable

from idlab.errors import MalformedDocument, TableTooShort, ZeroLambda, ZeroPrefactorConstant
from idlab.exact import MultiPoly, rational
from idlab.exact.series import TruncatedSeries
from idlab.report import DefectReport

X = ('x',)

FAMILY_DIR = Path(__file__).parent / 'families'


@dataclass(frozen=True)
class AppellFamily:
    name: str
    lam: Fraction
    egf_coeffs: tuple[Fraction, ...]
    parity: str | tuple[int, ...] | None = None
    generator: Callable[[int], tuple[Fraction, ...]] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.egf_coeffs or self.egf_coeffs[0] == 0:
            raise ZeroPrefactorConstant(f"family {self.name}: a_0 must be nonzero")
        if self.lam == 0:
            raise ZeroLambda(f"family {self.name}: lambda must be nonzero")

    def coefficients(self, count) -> tuple[Fraction, ...]:
        """a_0..a_{count-1}, extending the stored list with the generator when there is one."""
        if len(self.egf_coeffs) >= count:
            return self.egf_coeffs[:count]
        if self.generator is not None:
            return self.generator(count)
        raise TableTooShort(f"family {self.name} only knows {len(self.egf_coeffs)} prefactor coefficients")

    def prefactor(self, order) -> TruncatedSeries:
        """A(w) as an ordinary power series, a_m / m! at w^m."""
        coeffs = self.coefficients(order)
        return TruncatedSeries([c / factorial(m) for m, c in enumerate(coeffs)], order)

    def declared_parity(self, n) -> int | None:
        match self.parity:
            case None:
                return None
            case 'alternating':
                return -1 if n % 2 else 1
            case 'even':
                return 1
            case tuple() as signs:
                return signs[n] if n < len(signs) else None
        return None


class AppellPolynomialTable:
    """F_0..F_max_degree of one family as MultiPolys in x."""

    def __init__(self, family, polynomials):
        self.family = family
        self.polynomials = tuple(polynomials)

    def __repr__(self):
        return f"<AppellPolynomialTable family={self.family.name} max_degree={self.max_degree}>"

    def __len__(self):
        return len(self.polynomials)

    @property
    def max_degree(self) -> int:
        return len(self.polynomials) - 1

    def __getitem__(self, n) -> MultiPoly:
        if n > self.max_degree:
            raise TableTooShort(f"table for {self.family.name} stops at degree {self.max_degree}, need {n}")
        return self.polynomials[n]

    def require(self, n):
        if n > self.max_degree:
            raise TableTooShort(f"table for {self.family.name} stops at degree {self.max_degree}, need {n}")

    def evaluate(self, n, arg):
        """F_n(arg) for a Fraction, a MultiPoly or a float."""
        poly = self[n]
        if isinstance(arg, float):
            return sum(float(c) * arg ** exps[0] for exps, c in poly.terms())
        return poly.substitute({'x': arg})


@lru_cache(maxsize=64)
def family_polynomials(family: AppellFamily, n_max: int) -> AppellPolynomialTable:
    """F_n(x) = sum_j binom(n, j) a_{n-j} (lambda x)^j for n <= n_max."""
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    a = family.coefficients(n_max + 1)
    polys = []
    for n in range(n_max + 1):
        terms = {(j,): comb(n, j) * a[n - j] * family.lam ** j for j in range(n + 1)}
        polys.append(MultiPoly(X, terms))
    logging.debug("Expanded %s up to degree %d", family.name, n_max)
    return AppellPolynomialTable(family, polys)


def check_ladder(table: AppellPolynomialTable) -> DefectReport:
    """d/dx F_n - lambda n F_{n-1} for every n in the table."""
    details = []
    first = None
    for n in range(1, len(table)):
        residual = table[n].diff('x') - table[n - 1] * (table.family.lam * n)
        details.append((f"n={n}", residual.render()))
        if first is None and not residual.is_zero:
            first = residual
    params = (('family', table.family.name), ('n_max', str(table.max_degree)))
    return DefectReport.exact('appell_ladder', params, first if first is not None else 0, details=details)


@dataclass(frozen=True)
class ParityResult:
    n: int
    parity: int | None
    plus_residual: str
    minus_residual: str
    declared: int | None = None

    @property
    def consistent(self) -> bool:
        return self.parity is not None and self.declared in (None, self.parity)


def check_reflection(table: AppellPolynomialTable) -> list[ParityResult]:
    """Compare F_n(1-x) with +F_n(x) and -F_n(x) for every n in the table."""
    x = MultiPoly.variable('x', X)
    reflected_arg = 1 - x
    results = []
    for n, poly in enumerate(table.polynomials):
        reflected = poly.substitute({'x': reflected_arg})
        plus = reflected - poly
        minus = reflected + poly
        if plus.is_zero:
            parity = 1
        elif minus.is_zero:
            parity = -1
        else:
            parity = None
        results.append(ParityResult(n, parity, plus.render(), minus.render(), table.family.declared_parity(n)))
    return results


def reflection_report(table: AppellPolynomialTable) -> DefectReport:
    """check_reflection folded into one report: zero when every degree has its declared parity."""
    results = check_reflection(table)
    details = []
    residual = '0'
    for r in results:
        shown = '+1' if r.parity == 1 else '-1' if r.parity == -1 else 'none'
        details.append((f"n={r.n}", shown))
        if residual == '0' and not r.consistent:
            residual = f"no parity at n={r.n}" if r.parity is None else f"parity {shown} at n={r.n}, declared {r.declared}"
    params = (('family', table.family.name), ('n_max', str(table.max_degree)))
    return DefectReport('appell_reflection', params, residual == '0', residual, details=tuple(details))


def egf_defect(table: AppellPolynomialTable) -> DefectReport:
    """w^n coefficient of A(w) exp(lambda w x) minus F_n(x)/n!."""
    family = table.family
    order = len(table)
    x = MultiPoly.variable('x', X)
    phi = family.prefactor(order) * TruncatedSeries.exponential(order, x * family.lam)
    first = None
    for n in range(order):
        residual = phi[n] - table[n] / factorial(n)
        if not residual.is_zero:
            first = residual
            break
    params = (('family', family.name), ('n_max', str(table.max_degree)))
    return DefectReport.exact('appell_egf', params, first if first is not None else 0)


FAMILIES: dict[str, AppellFamily] = {}


def register_family(family: AppellFamily) -> AppellFamily:
    FAMILIES[family.name] = family
    logging.info("Registered family %s", family.name)
    return family


def get_family(name) -> AppellFamily:
    # builtins register themselves on import
    from idlab.appell import builtins  # noqa: F401
    try:
        return FAMILIES[name]
    except KeyError:
        raise MalformedDocument(f"unknown family {name!r}; known: {', '.join(sorted(FAMILIES))}")


def _read_parity(value):
    match value:
        case None | 'alternating' | 'even':
            return value
        case list() if all(v in (1, -1) for v in value):
            return tuple(value)
    raise MalformedDocument(f"parity must be 'alternating', 'even' or a list of +1/-1, not {value!r}")


def load_family(document, register=True) -> AppellFamily:
    """
    Build a family from a descriptor: JSON text or an already decoded mapping
    with fields name, lambda and egf_coeffs (rational texts, a_m at index m).
    """
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise MalformedDocument(f"family descriptor is not JSON: {e}")
    if not isinstance(document, dict):
        raise MalformedDocument("family descriptor must be an object")
    raw = document.get('egf_coeffs')
    if not isinstance(raw, list) or not raw:
        raise MalformedDocument("egf_coeffs must be a nonempty list of rational texts")
    try:
        coeffs = tuple(rational(c) for c in raw)
        lam = rational(document.get('lambda', '1'))
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise MalformedDocument(f"bad rational in family descriptor: {e}")
    name = document.get('name', 'custom')
    if not isinstance(name, str):
        raise MalformedDocument("name must be text")
    family = AppellFamily(name, lam, coeffs, _read_parity(document.get('parity')))
    return register_family(family) if register else family


def load_family_file(path, register=True) -> AppellFamily:
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise MalformedDocument(f"cannot read {path}: {e}")
    return load_family(text, register)
