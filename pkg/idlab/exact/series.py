"""Truncated formal power series in one variable w."""

from fractions import Fraction
from math import factorial

from idlab.errors import NonInvertibleConstantTerm
from idlab.exact import MultiPoly, RationalFunction, rational


def _invert_coefficient(c):
    if isinstance(c, MultiPoly):
        if c.is_zero or not c.is_constant:
            raise NonInvertibleConstantTerm(f"constant term {c.render()} is not a unit")
        return MultiPoly.constant(1 / c.constant_value, c.variables)
    if isinstance(c, RationalFunction):
        if c.is_zero:
            raise NonInvertibleConstantTerm("constant term is zero")
        return c.inverse()
    if c == 0:
        raise NonInvertibleConstantTerm("constant term is zero")
    return 1 / rational(c)


class TruncatedSeries:
    """
    c_0 + c_1 w + ... + c_{N-1} w^{N-1} modulo w^N.

    Coefficients are Fractions, MultiPolys or RationalFunctions; arithmetic
    between series of different orders keeps the smaller order.
    """

    __slots__ = ('coefficients', 'order')

    def __init__(self, coefficients, order=None):
        coefficients = list(coefficients)
        if not coefficients:
            raise ValueError("a series needs at least its constant term")
        order = len(coefficients) if order is None else order
        if order < 1:
            raise ValueError("series order must be >= 1")
        coefficients = [rational(c) if isinstance(c, int) else c for c in coefficients[:order]]
        zero = coefficients[0] * 0
        coefficients += [zero] * (order - len(coefficients))
        self.coefficients = tuple(coefficients)
        self.order = order

    @classmethod
    def exponential(cls, order, scale=1):
        """Sum of (scale * w)^n / n! for n < order."""
        return cls([Fraction(1, factorial(n)) * scale ** n for n in range(order)], order)

    @property
    def ring(self) -> str:
        c = self.coefficients[0]
        if isinstance(c, MultiPoly):
            return 'multipoly'
        if isinstance(c, RationalFunction):
            return 'ratfunc'
        return 'rational'

    def __repr__(self):
        return f"TruncatedSeries({list(self.coefficients)!r}, order={self.order})"

    def __getitem__(self, n):
        return self.coefficients[n]

    def __len__(self):
        return self.order

    def truncate(self, order):
        return TruncatedSeries(self.coefficients[:order], min(order, self.order))

    def _binary(self, other):
        if isinstance(other, TruncatedSeries):
            order = min(self.order, other.order)
            return self.coefficients[:order], other.coefficients[:order], order
        return None

    def __add__(self, other):
        pair = self._binary(other)
        if pair is None:
            return TruncatedSeries((self.coefficients[0] + other,) + self.coefficients[1:], self.order)
        a, b, order = pair
        return TruncatedSeries([x + y for x, y in zip(a, b)], order)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coefficients], self.order)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        pair = self._binary(other)
        if pair is None:
            return TruncatedSeries([c * other for c in self.coefficients], self.order)
        a, b, order = pair
        out = []
        for n in range(order):
            total = a[0] * b[n]
            for i in range(1, n + 1):
                total = total + a[i] * b[n - i]
            out.append(total)
        return TruncatedSeries(out, order)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and all(x == y for x, y in zip(self.coefficients, other.coefficients))

    def __hash__(self):
        return hash((self.order, self.coefficients))

    def invert(self):
        """The series b with self * b = 1 mod w^N."""
        inv0 = _invert_coefficient(self.coefficients[0])
        a = self.coefficients
        b = [inv0]
        for n in range(1, self.order):
            total = a[1] * b[n - 1]
            for i in range(2, n + 1):
                total = total + a[i] * b[n - i]
            b.append(-(inv0 * total))
        return TruncatedSeries(b, self.order)

    def shift_down(self, k=1):
        """Divide by w^k; the first k coefficients must vanish."""
        if any(c != 0 for c in self.coefficients[:k]):
            raise ValueError(f"series is not divisible by w^{k}")
        if self.order <= k:
            raise ValueError("nothing left after the shift")
        return TruncatedSeries(self.coefficients[k:], self.order - k)

    def scale_variable(self, factor):
        """Substitute w -> factor * w."""
        return TruncatedSeries([c * factor ** n for n, c in enumerate(self.coefficients)], self.order)


def series_invert(a: TruncatedSeries) -> TruncatedSeries:
    return a.invert()


def exp_series(order, scale=1) -> TruncatedSeries:
    return TruncatedSeries.exponential(order, scale)
