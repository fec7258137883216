"""
Exact arithmetic: rationals, sparse multivariate polynomials and rational functions.

Polynomials live in sympy sparse rings over QQ with graded lexicographic order
over an explicitly declared variable list. Values are immutable; every
operation returns a new object.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from math import factorial

from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import ring

from idlab.errors import PoleAtOne, VariableMismatch, ZeroDenominator

Rational = Fraction

SCALARS = (int, Fraction)


def rational(value) -> Fraction:
    """Coerce an int, Fraction or "p/q" text to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip().replace('−', '-'))
    raise TypeError(f"cannot read {value!r} as a rational")


def format_rational(value) -> str:
    """Render a rational as "p/q", or "p" when the denominator is 1."""
    return str(rational(value))


@lru_cache(maxsize=None)
def _ring(variables):
    if not variables:
        raise VariableMismatch("a polynomial needs at least one declared variable")
    logging.debug("Creating polynomial ring over %s", variables)
    return ring(','.join(variables), QQ, grlex)[0]


def _to_qq(value):
    value = rational(value)
    return QQ(value.numerator, value.denominator)


def _from_qq(value) -> Fraction:
    return Fraction(int(QQ.numer(value)), int(QQ.denom(value)))


def _render_monomial(variables, exps):
    parts = []
    for name, e in zip(variables, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return '*'.join(parts)


def _evaluate_terms(items, images, one):
    """Sum c * prod(images[i] ** e) over (exps, c) pairs, caching powers."""
    powers = {}
    total = one * 0
    for exps, c in items:
        term = one * c
        for i, e in enumerate(exps):
            if e:
                if (i, e) not in powers:
                    powers[(i, e)] = images[i] ** e
                term = term * powers[(i, e)]
        total = total + term
    return total


class MultiPoly:
    """A sparse polynomial with exact rational coefficients over a declared variable list."""

    __slots__ = ('variables', '_p')

    def __init__(self, variables, terms=None):
        variables = tuple(variables)
        R = _ring(variables)
        element = R.zero
        if terms:
            element = R.from_dict({tuple(e): _to_qq(c) for e, c in terms.items() if c != 0})
        self.variables = variables
        self._p = element

    @classmethod
    def _wrap(cls, variables, element):
        obj = cls.__new__(cls)
        obj.variables = variables
        obj._p = element
        return obj

    @classmethod
    def constant(cls, value, variables):
        variables = tuple(variables)
        return cls._wrap(variables, _ring(variables).ground_new(_to_qq(value)))

    @classmethod
    def variable(cls, name, variables):
        variables = tuple(variables)
        if name not in variables:
            raise VariableMismatch(f"{name} is not among {variables}")
        return cls._wrap(variables, _ring(variables).gens[variables.index(name)])

    @classmethod
    def gens(cls, variables):
        """Return the generators of the ring over `variables`, in order."""
        variables = tuple(variables)
        return tuple(cls._wrap(variables, g) for g in _ring(variables).gens)

    def __repr__(self):
        return f"MultiPoly({self.render()!r}, variables={self.variables})"

    def __str__(self):
        return self.render()

    def render(self) -> str:
        """Canonical text: terms in grlex order, e.g. "x^2 - x + 1/6"."""
        if not self._p:
            return '0'
        out = []
        for exps, c in self._p.terms():
            c = _from_qq(c)
            mono = _render_monomial(self.variables, exps)
            magnitude = abs(c)
            if not mono:
                body = str(magnitude)
            elif magnitude == 1:
                body = mono
            else:
                body = f"{magnitude}*{mono}"
            if not out:
                out.append(f"-{body}" if c < 0 else body)
            else:
                out.append(f"- {body}" if c < 0 else f"+ {body}")
        return ' '.join(out)

    def terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Exponent vectors and coefficients in canonical (descending grlex) order."""
        return [(exps, _from_qq(c)) for exps, c in self._p.terms()]

    @property
    def is_zero(self) -> bool:
        return not self._p

    @property
    def is_constant(self) -> bool:
        return self._p.is_ground

    @property
    def constant_value(self) -> Fraction:
        return _from_qq(self._p.get((0,) * len(self.variables), QQ.zero))

    @property
    def leading_coefficient(self) -> Fraction:
        return _from_qq(self._p.LC)

    def coefficient(self, exps) -> Fraction:
        return _from_qq(self._p.get(tuple(exps), QQ.zero))

    def degree(self, name) -> int:
        """Degree in one variable; -1 for the zero polynomial."""
        i = self.variables.index(name)
        return max((exps[i] for exps in self._p), default=-1)

    def total_degree(self, names=None) -> int:
        """Total degree over a subset of the variables (all by default)."""
        idx = range(len(self.variables)) if names is None else [self.variables.index(n) for n in names]
        return max((sum(exps[i] for i in idx) for exps in self._p), default=-1)

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise VariableMismatch(f"{self.variables} vs {other.variables}")
            return other._p
        if isinstance(other, SCALARS):
            return _to_qq(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return MultiPoly._wrap(self.variables, self._p + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return MultiPoly._wrap(self.variables, self._p - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return MultiPoly._wrap(self.variables, -self._p + o)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return MultiPoly._wrap(self.variables, self._p * o)

    __rmul__ = __mul__

    def __neg__(self):
        return MultiPoly._wrap(self.variables, -self._p)

    def __truediv__(self, other):
        if not isinstance(other, SCALARS):
            return NotImplemented
        return MultiPoly._wrap(self.variables, self._p * _to_qq(1 / Fraction(other)))

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("MultiPoly powers must be nonnegative integers; use RationalFunction")
        return MultiPoly._wrap(self.variables, self._p ** exponent)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self._p == other._p
        if isinstance(other, SCALARS):
            return self.is_constant and self.constant_value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.variables, self._p))

    def diff(self, name):
        """Partial derivative with respect to a declared variable."""
        gen = _ring(self.variables).gens[self.variables.index(name)]
        return MultiPoly._wrap(self.variables, self._p.diff(gen))

    def embed(self, variables):
        """Re-express in a larger variable list containing all of ours."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        missing = [v for v in self.variables if v not in variables]
        if missing:
            raise VariableMismatch(f"cannot embed {self.variables} into {variables}")
        idx = [variables.index(v) for v in self.variables]
        terms = {}
        for exps, c in self._p.items():
            new = [0] * len(variables)
            for i, e in zip(idx, exps):
                new[i] = e
            terms[tuple(new)] = c
        return MultiPoly._wrap(variables, _ring(variables).from_dict(terms))

    def substitute(self, bindings, variables=None):
        """
        Substitute variables by scalars, MultiPolys or RationalFunctions.

        Bindings for variables we do not declare are ignored. The result is
        expressed over `variables` when given, else over the images' common
        variable list followed by our unbound variables. Returns a Fraction
        when no variables remain.
        """
        bindings = {k: v for k, v in bindings.items() if k in self.variables}
        target = _target_variables(self.variables, bindings, variables)
        if not target:
            point = [rational(bindings[name]) for name in self.variables]
            return _evaluate_terms(self.terms(), point, Fraction(1))

        if any(isinstance(v, RationalFunction) for v in bindings.values()):
            one = RationalFunction.constant(1, target)
            images = [_image(name, bindings, target, RationalFunction) for name in self.variables]
            return _evaluate_terms(self.terms(), images, one)

        R = _ring(target)
        images = []
        for name in self.variables:
            if name in bindings:
                value = bindings[name]
                if isinstance(value, MultiPoly):
                    images.append(value.embed(target)._p)
                else:
                    images.append(R.ground_new(_to_qq(value)))
            else:
                images.append(R.gens[target.index(name)])
        return MultiPoly._wrap(target, _evaluate_terms(self._p.items(), images, R.one))


def _target_variables(own, bindings, variables):
    if variables is not None:
        return tuple(variables)
    shared = None
    for value in bindings.values():
        if isinstance(value, (MultiPoly, RationalFunction)):
            if shared is None:
                shared = value.variables
            elif value.variables != shared:
                raise VariableMismatch(f"substitution images disagree: {shared} vs {value.variables}")
    target = shared or ()
    return target + tuple(v for v in own if v not in bindings and v not in target)


def _image(name, bindings, target, kind):
    if name not in bindings:
        return kind.variable(name, target)
    value = bindings[name]
    if isinstance(value, RationalFunction):
        return value.embed(target)
    if isinstance(value, MultiPoly):
        return RationalFunction(value.embed(target))
    return kind.constant(value, target)


class RationalFunction:
    """
    A quotient of MultiPolys over one variable list, kept in canonical form:
    numerator and denominator coprime, denominator leading coefficient 1.
    """

    __slots__ = ('numerator', 'denominator')

    def __init__(self, numerator, denominator=None):
        if denominator is None:
            denominator = MultiPoly.constant(1, numerator.variables)
        if numerator.variables != denominator.variables:
            raise VariableMismatch(f"{numerator.variables} vs {denominator.variables}")
        if denominator.is_zero:
            raise ZeroDenominator("rational function with zero denominator")
        p, q = numerator._p.cancel(denominator._p)
        lc = q.LC
        if lc != QQ.one:
            p = p.quo_ground(lc)
            q = q.quo_ground(lc)
        variables = numerator.variables
        self.numerator = MultiPoly._wrap(variables, p)
        self.denominator = MultiPoly._wrap(variables, q)

    @classmethod
    def constant(cls, value, variables):
        return cls(MultiPoly.constant(value, variables))

    @classmethod
    def variable(cls, name, variables):
        return cls(MultiPoly.variable(name, variables))

    @classmethod
    def gens(cls, variables):
        return tuple(cls(g) for g in MultiPoly.gens(variables))

    @property
    def variables(self):
        return self.numerator.variables

    def __repr__(self):
        return f"RationalFunction({self.render()!r}, variables={self.variables})"

    def __str__(self):
        return self.render()

    def render(self) -> str:
        if self.is_polynomial:
            return self.numerator.render()
        return f"({self.numerator.render()})/({self.denominator.render()})"

    @property
    def is_zero(self) -> bool:
        return self.numerator.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self.denominator.is_constant

    def as_poly(self) -> MultiPoly:
        if not self.is_polynomial:
            raise ValueError(f"{self.render()} is not a polynomial")
        return self.numerator

    def embed(self, variables):
        return RationalFunction(self.numerator.embed(variables), self.denominator.embed(variables))

    def _parts(self, other):
        if isinstance(other, RationalFunction):
            if other.variables != self.variables:
                raise VariableMismatch(f"{self.variables} vs {other.variables}")
            return other.numerator, other.denominator
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise VariableMismatch(f"{self.variables} vs {other.variables}")
            return other, MultiPoly.constant(1, self.variables)
        if isinstance(other, SCALARS):
            return MultiPoly.constant(other, self.variables), MultiPoly.constant(1, self.variables)
        return NotImplemented

    def __add__(self, other):
        parts = self._parts(other)
        if parts is NotImplemented:
            return parts
        n, d = parts
        if d == self.denominator:
            return RationalFunction(self.numerator + n, d)
        return RationalFunction(self.numerator * d + n * self.denominator, self.denominator * d)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.numerator, self.denominator)

    def __sub__(self, other):
        parts = self._parts(other)
        if parts is NotImplemented:
            return parts
        n, d = parts
        return self + RationalFunction(-n, d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        parts = self._parts(other)
        if parts is NotImplemented:
            return parts
        n, d = parts
        return RationalFunction(self.numerator * n, self.denominator * d)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero:
            raise ZeroDenominator("inverse of the zero rational function")
        return RationalFunction(self.denominator, self.numerator)

    def __truediv__(self, other):
        parts = self._parts(other)
        if parts is NotImplemented:
            return parts
        n, d = parts
        if n.is_zero:
            raise ZeroDenominator("division by zero")
        return RationalFunction(self.numerator * d, self.denominator * n)

    def __rtruediv__(self, other):
        parts = self._parts(other)
        if parts is NotImplemented:
            return parts
        n, d = parts
        return RationalFunction(n, d) / self

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            raise ValueError("RationalFunction powers must be integers")
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return RationalFunction(self.numerator ** exponent, self.denominator ** exponent)

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.numerator == other.numerator and self.denominator == other.denominator
        if isinstance(other, MultiPoly):
            return self.is_polynomial and self.numerator == other
        if isinstance(other, SCALARS):
            return self.is_polynomial and self.numerator == other
        return NotImplemented

    def __hash__(self):
        return hash((self.numerator, self.denominator))

    def substitute(self, bindings, variables=None):
        """Substitute into numerator and denominator; see MultiPoly.substitute."""
        bindings = {k: v for k, v in bindings.items() if k in self.variables}
        target = _target_variables(self.variables, bindings, variables)
        num = self.numerator.substitute(bindings, target)
        den = self.denominator.substitute(bindings, target)
        if den == 0:
            raise ZeroDenominator(f"denominator {self.denominator.render()} vanishes under {bindings}")
        if not target:
            return num / den
        if isinstance(num, MultiPoly):
            num = RationalFunction(num)
        return num / den


def generalized_binomial(u, k: int):
    """binom(u, k) = u(u-1)...(u-k+1)/k! for any ring element u."""
    if k < 0:
        raise ValueError("k must be >= 0")
    result = Fraction(1, factorial(k))
    for i in range(k):
        result = result * (u - i)
    return result


def poly_substitute(p, bindings, variables=None):
    """Ring homomorphism sending declared variables to the given images."""
    return p.substitute(bindings, variables)


def ratfunc_reduce(numerator, denominator=None) -> RationalFunction:
    """Canonical reduced form of numerator/denominator (or of a RationalFunction)."""
    if isinstance(numerator, RationalFunction):
        if denominator is not None:
            return numerator / denominator
        return RationalFunction(numerator.numerator, numerator.denominator)
    return RationalFunction(numerator, denominator)


def limit_at_one(f, var):
    """
    Evaluate the reduced form of f at var = 1.

    Returns a Fraction when no variables remain, a MultiPoly when the result
    is polynomial in the remaining variables, else a RationalFunction.
    """
    if isinstance(f, MultiPoly):
        f = RationalFunction(f)
    try:
        value = f.substitute({var: 1})
    except ZeroDenominator:
        raise PoleAtOne(f"{f.render()} has a pole at {var} = 1")
    if isinstance(value, RationalFunction) and value.is_polynomial:
        return value.numerator
    return value
