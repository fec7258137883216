"""Exceptions raised by idlab."""


class IdlabError(ValueError):
    """Base class for every error idlab raises on bad input or degenerate math."""


class VariableMismatch(IdlabError):
    """Two polynomials declared over different variable lists were combined."""


class NonInvertibleConstantTerm(IdlabError):
    """A truncated series with a non-invertible constant term was inverted."""


class ZeroDenominator(IdlabError, ZeroDivisionError):
    """A rational function was built with the zero polynomial as denominator."""


class PoleAtOne(IdlabError):
    """The reduced denominator vanishes at the evaluation point 1."""


class ZeroPrefactorConstant(IdlabError):
    """An Appell prefactor has a_0 = 0."""


class ZeroLambda(IdlabError):
    """An Appell family has ladder constant 0."""


class MalformedDocument(IdlabError):
    """A family descriptor document could not be read."""


class TableTooShort(IdlabError):
    """A polynomial table does not cover the degrees a computation needs."""


class NonUnimodular(IdlabError):
    """A matrix with determinant other than +1 or -1 was used in a slash action."""


class WeightMismatch(IdlabError):
    """A polynomial has degree larger than the weight allows."""


class UnsupportedWeight(IdlabError):
    """A weight outside the supported range was requested."""


class NotCuspidal(IdlabError):
    """A q-expansion with nonzero constant term was used where a cusp form is required."""


class NearPole(IdlabError):
    """An analytic function was evaluated inside its rejected near-pole band."""


class OutOfDomain(IdlabError):
    """A numeric function was called outside the arguments it supports."""


class ConfigError(IdlabError):
    """The audit configuration is invalid."""


class UnknownVariable(IdlabError):
    """A parsed polynomial mentions a variable outside the declared set."""


class PolySyntaxError(IdlabError):
    """Polynomial text does not follow the grammar."""

    def __init__(self, message, position):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class NumericError(IdlabError):
    """A numeric computation could not reach its accuracy target."""


class NonConvergent(NumericError):
    """Asymptotic correction terms stopped decreasing."""


class AccuracyUnreachable(NumericError):
    """The requested accuracy needs more terms than the configured ceiling."""

    def __init__(self, message, achievable):
        super().__init__(f"{message} (achievable bound {achievable:.3e})")
        self.achievable = achievable


class InsufficientTruncation(NumericError):
    """A q-expansion tail bound exceeds the accuracy target."""
