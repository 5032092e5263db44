"""Exception hierarchy shared by all modules."""


class SeriesError(ValueError):
    """Base class for invalid series input."""


class DivisionByZeroSeries(SeriesError, ZeroDivisionError):
    """Reduced denominator of a series quotient has (numerically) zero constant term."""


class NonzeroConstantTerm(SeriesError):
    pass


class NonunitConstantTerm(SeriesError):
    pass


class NotNormalized(SeriesError):
    """Series is not of the form z + a_2 z^2 + ..."""


class PowerBranchError(SeriesError):
    pass


class SpecError(ValueError):
    """Operator parameters outside their admissible range."""


class BadDominantInput(SeriesError):
    pass


class UnknownExample(KeyError):
    pass


class DenominatorVanishes(ArithmeticError):
    """A denominator is (numerically) zero at a sampled point.

    The offending point is kept in ``point``.
    """

    def __init__(self, point, value=0j):
        self.point = complex(point)
        self.value = complex(value)
        super().__init__(
            f"denominator vanishes at z = {self.point!r} (|value| = {abs(self.value):.3e})"
        )
