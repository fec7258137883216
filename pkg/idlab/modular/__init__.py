"""
Period polynomials for SL2(Z), exactly.

Conventions: S = (0,-1;1,0), T = (1,1;0,1), U = (0,1;-1,1) so that
z|U = 1/(1-z) and U^3 = -I. The weight-w right action is

    (P|g)(z) = (cz + d)^w P((az + b)/(cz + d)).

The period space {P : P|(1+S) = 0, P|(1+U+U^2) = 0} does not change when U
is replaced by U^2 or S by -S in even weight, since -I acts trivially there
and U^2 runs over the same cyclic group.

The three-term map as literally displayed uses z/(z-1) = (1,0;1,-1), which
has determinant -1, together with 1/(1-z) = U. It is kept next to the
standard map so both residuals can be compared.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

import sympy

from idlab.appell.builtins import bernoulli_number
from idlab.errors import NonUnimodular, UnsupportedWeight, WeightMismatch
from idlab.exact import MultiPoly, RationalFunction
from idlab.trace import log

Z = ('z',)
WEIGHT_CEILING = 40


@dataclass(frozen=True)
class GL2Mat:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.det not in (1, -1):
            raise NonUnimodular(f"determinant of {self} is {self.det}")

    def __str__(self):
        return f"({self.a},{self.b};{self.c},{self.d})"

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other):
        return GL2Mat(self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
                      self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d)

    def __neg__(self):
        return GL2Mat(-self.a, -self.b, -self.c, -self.d)

    def act(self, p, q):
        """Image of the projective point (p : q) under z -> (az + b)/(cz + d)."""
        return self.a * p + self.b * q, self.c * p + self.d * q


IDENTITY = GL2Mat(1, 0, 0, 1)
MINUS_IDENTITY = GL2Mat(-1, 0, 0, -1)
S = GL2Mat(0, -1, 1, 0)
T = GL2Mat(1, 1, 0, 1)
U = GL2Mat(0, 1, -1, 1)
U2 = U @ U
LITERAL_MAPS = (GL2Mat(1, 0, 1, -1), GL2Mat(0, 1, -1, 1))


def _is_exact(values):
    return all(isinstance(c, (int, Fraction)) for c in values)


@dataclass(frozen=True)
class PolyMod:
    """A polynomial of degree <= weight in z, as the coefficient vector c_0..c_w."""
    weight: int
    coefficients: tuple
    error_estimate: float = 0.0

    def __post_init__(self):
        if self.weight < 0:
            raise WeightMismatch("weight must be >= 0")
        coeffs = list(self.coefficients)
        exact = _is_exact(coeffs)
        zero = Fraction(0) if exact else 0j
        coeffs = [Fraction(c) for c in coeffs] if exact else [complex(c) for c in coeffs]
        if any(c != 0 for c in coeffs[self.weight + 1:]):
            raise WeightMismatch(f"degree {len(coeffs) - 1} exceeds weight {self.weight}")
        coeffs = coeffs[:self.weight + 1] + [zero] * (self.weight + 1 - len(coeffs))
        object.__setattr__(self, 'coefficients', tuple(coeffs))

    @classmethod
    def monomial(cls, weight, j):
        return cls(weight, [0] * j + [1])

    @classmethod
    def from_poly(cls, poly: MultiPoly, weight):
        if poly.variables != Z:
            raise WeightMismatch(f"expected a polynomial in z, got variables {poly.variables}")
        degree = poly.degree('z')
        if degree > weight:
            raise WeightMismatch(f"degree {degree} exceeds weight {weight}")
        coeffs = [Fraction(0)] * (weight + 1)
        for exps, c in poly.terms():
            coeffs[exps[0]] = c
        return cls(weight, coeffs)

    @property
    def is_exact(self) -> bool:
        return isinstance(self.coefficients[0], Fraction)

    @property
    def degree(self) -> int:
        return max((j for j, c in enumerate(self.coefficients) if c != 0), default=-1)

    @property
    def is_zero(self) -> bool:
        return self.degree < 0

    @property
    def max_norm(self) -> float:
        return max(abs(c) for c in self.coefficients)

    def to_poly(self) -> MultiPoly:
        return MultiPoly(Z, {(j,): c for j, c in enumerate(self.coefficients)})

    def render(self) -> str:
        if self.is_exact:
            return self.to_poly().render()
        return '[' + ', '.join(repr(c) for c in self.coefficients) + ']'

    def at_weight(self, weight):
        if self.degree > weight:
            raise WeightMismatch(f"degree {self.degree} exceeds weight {weight}")
        return PolyMod(weight, self.coefficients[:weight + 1], self.error_estimate)

    def even_part(self):
        return PolyMod(self.weight, [c if j % 2 == 0 else 0 for j, c in enumerate(self.coefficients)],
                       self.error_estimate)

    def odd_part(self):
        return PolyMod(self.weight, [c if j % 2 else 0 for j, c in enumerate(self.coefficients)],
                       self.error_estimate)

    def _check(self, other):
        if other.weight != self.weight:
            raise WeightMismatch(f"weights {self.weight} and {other.weight}")

    def __add__(self, other):
        self._check(other)
        return PolyMod(self.weight, [a + b for a, b in zip(self.coefficients, other.coefficients)],
                       self.error_estimate + other.error_estimate)

    def __sub__(self, other):
        self._check(other)
        return PolyMod(self.weight, [a - b for a, b in zip(self.coefficients, other.coefficients)],
                       self.error_estimate + other.error_estimate)

    def __mul__(self, scalar):
        return PolyMod(self.weight, [c * scalar for c in self.coefficients], self.error_estimate * abs(scalar))

    __rmul__ = __mul__


def as_polymod(P, weight) -> PolyMod:
    """Accept a PolyMod or a MultiPoly in z; re-tag it at `weight`."""
    if isinstance(P, MultiPoly):
        return PolyMod.from_poly(P, weight)
    return P.at_weight(weight)


def _poly_mul(f, g):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return out


def _linear_powers(u, v, n):
    """Ascending coefficient lists of (u z + v)^e for e = 0..n."""
    out = [[1]]
    for _ in range(n):
        out.append(_poly_mul(out[-1], [v, u]))
    return out


def slash(P: PolyMod, g: GL2Mat) -> PolyMod:
    """(cz + d)^w P((az + b)/(cz + d)), expanded."""
    w = P.weight
    num = _linear_powers(g.a, g.b, w)
    den = _linear_powers(g.c, g.d, w)
    result = [0] * (w + 1)
    for j, c in enumerate(P.coefficients):
        if c == 0:
            continue
        for i, t in enumerate(_poly_mul(num[j], den[w - j])):
            result[i] += c * t
    return PolyMod(w, result, P.error_estimate)


def three_term_paper(P, k) -> PolyMod:
    """P(z) + (z-1)^w P(z/(z-1)) + (1-z)^w P(1/(1-z)), w = k - 2."""
    P = as_polymod(P, k - 2)
    return P + slash(P, LITERAL_MAPS[0]) + slash(P, LITERAL_MAPS[1])


def three_term_standard(P, k) -> PolyMod:
    """P|(1 + U + U^2)."""
    P = as_polymod(P, k - 2)
    return P + slash(P, U) + slash(P, U2)


def s_relation(P) -> PolyMod:
    """P|(1 + S)."""
    if isinstance(P, MultiPoly):
        degree = max(P.degree('z'), 0)
        P = PolyMod.from_poly(P, degree + degree % 2)
    return P + slash(P, S)


def _to_sympy(c):
    return sympy.Rational(c.numerator, c.denominator)


def relation_nullspace(k, relations) -> tuple[PolyMod, ...]:
    """Exact basis of the joint kernel of linear maps on polynomials of degree <= k - 2."""
    w = k - 2
    rows = []
    for relation in relations:
        images = [relation(PolyMod.monomial(w, j)) for j in range(w + 1)]
        for i in range(len(images[0].coefficients)):
            rows.append([_to_sympy(images[j].coefficients[i]) for j in range(w + 1)])
    basis = sympy.Matrix(rows).nullspace()
    return tuple(PolyMod(w, [Fraction(int(e.p), int(e.q)) for e in vector]) for vector in basis)


@dataclass(frozen=True)
class PeriodSpace:
    weight: int
    basis: tuple[PolyMod, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def contains(self, P) -> bool:
        P = as_polymod(P, self.weight - 2)
        return s_relation(P).is_zero and three_term_standard(P, self.weight).is_zero


def _check_weight(k, ceiling):
    if k % 2 or k < 4 or k > ceiling:
        raise UnsupportedWeight(f"weight {k} must be even with 4 <= k <= {ceiling}")


@lru_cache(maxsize=None)
@log(lambda space: f"dimension {space.dimension}")
def period_space(k, ceiling=WEIGHT_CEILING) -> PeriodSpace:
    """The joint kernel of 1 + S and 1 + U + U^2 in weight k - 2."""
    _check_weight(k, ceiling)
    basis = relation_nullspace(k, (s_relation, lambda P: three_term_standard(P, k)))
    return PeriodSpace(k, basis)


@lru_cache(maxsize=None)
def even_period_space(k, ceiling=WEIGHT_CEILING) -> PeriodSpace:
    """The period space cut down to even polynomials."""
    _check_weight(k, ceiling)
    basis = relation_nullspace(k, (s_relation, lambda P: three_term_standard(P, k), PolyMod.odd_part))
    return PeriodSpace(k, basis)


def literal_nullspaces(k) -> tuple[tuple[PolyMod, ...], tuple[PolyMod, ...]]:
    """Kernel of the literal three-term map alone, and jointly with 1 + S."""
    literal = relation_nullspace(k, (lambda P: three_term_paper(P, k),))
    joint = relation_nullspace(k, (lambda P: three_term_paper(P, k), s_relation))
    return literal, joint


def cuspform_dim(k) -> int:
    """dim S_k(SL2(Z)) for even k >= 4."""
    if k % 2 or k < 4:
        raise UnsupportedWeight(f"weight {k} must be even and >= 4")
    return k // 12 - 1 if k % 12 == 2 else k // 12


CUSPS = {'0': (0, 1), '1': (1, 1), 'oo': (1, 0)}


def _cusp_name(p, q):
    if q == 0:
        return 'oo'
    return str(Fraction(p, q))


def cusp_permutation(g: GL2Mat) -> dict[str, str]:
    """Where g sends each of the cusps 0, 1 and oo."""
    return {name: _cusp_name(*g.act(p, q)) for name, (p, q) in CUSPS.items()}


@dataclass(frozen=True)
class QExpansion:
    name: str
    weight: int
    coefficients: tuple[Fraction, ...]

    @property
    def truncation(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_cuspidal(self) -> bool:
        return self.coefficients[0] == 0

    def __getitem__(self, n):
        return self.coefficients[n]


def divisor_sums(power, N) -> list[int]:
    """sigma_power(n) for n = 0..N (sigma(0) = 0)."""
    sig = [0] * (N + 1)
    for d in range(1, N + 1):
        dp = d ** power
        for m in range(d, N + 1, d):
            sig[m] += dp
    return sig


def eisenstein_qexp(k, N) -> QExpansion:
    """E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n through q^N."""
    if k % 2 or k < 4:
        raise UnsupportedWeight(f"weight {k} must be even and >= 4")
    if N < 1:
        raise ValueError("N must be >= 1")
    factor = -Fraction(2 * k) / bernoulli_number(k)
    sig = divisor_sums(k - 1, N)
    return QExpansion(f"E{k}", k, (Fraction(1),) + tuple(factor * sig[n] for n in range(1, N + 1)))


@lru_cache(maxsize=None)
def delta_qexp(N) -> QExpansion:
    """q prod (1 - q^n)^24 through q^N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    product = [1] + [0] * (N - 1)
    for n in range(1, N):
        for i in range(N - 1, n - 1, -1):
            product[i] -= product[i - n]
    power = [1] + [0] * (N - 1)
    for _ in range(24):
        power = _poly_mul(power, product)[:N]
    logging.debug("Expanded Delta through q^%d", N)
    return QExpansion('Delta', 12, (Fraction(0),) + tuple(Fraction(c) for c in power))


def bernoulli_period_function(k) -> RationalFunction:
    """sum_{n=0..k} B_n B_{k-n} / (n! (k-n)!) z^{n-1}."""
    if k % 2 or k < 4:
        raise UnsupportedWeight(f"weight {k} must be even and >= 4")
    terms = {(n,): bernoulli_number(n) * bernoulli_number(k - n) / (factorial(n) * factorial(k - n))
             for n in range(k + 1)}
    return RationalFunction(MultiPoly(Z, terms), MultiPoly.variable('z', Z))


def slash_rational(f: RationalFunction, g: GL2Mat, w) -> RationalFunction:
    """(cz + d)^w f((az + b)/(cz + d)) for a rational function of z."""
    z = RationalFunction.variable('z', Z)
    denominator = g.c * z + g.d
    return denominator ** w * f.substitute({'z': (g.a * z + g.b) / denominator})


def bernoulli_period_defects(k) -> tuple[RationalFunction, RationalFunction]:
    """Residuals of the Bernoulli period function under 1 + S and 1 + U + U^2."""
    f = bernoulli_period_function(k)
    w = k - 2
    return (f + slash_rational(f, S, w),
            f + slash_rational(f, U, w) + slash_rational(f, U2, w))
