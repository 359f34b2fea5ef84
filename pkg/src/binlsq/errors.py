"""Exception hierarchy shared by all binlsq modules."""


class BinLsqError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(BinLsqError, ValueError):
    pass


class NonFiniteEntries(BinLsqError, ValueError):
    pass


class RankDeficient(BinLsqError):
    """A matrix failed the full-column-rank test.

    ``magnitude`` is the offending singular value (or pivot) relative to the
    largest one.
    """

    def __init__(self, message, magnitude=float("nan")):
        super().__init__(message)
        self.magnitude = magnitude


class InvalidProblem(BinLsqError, ValueError):
    pass


class DegenerateColumn(BinLsqError, ValueError):
    pass


class InvalidSpec(BinLsqError, ValueError):
    pass


class TooLarge(BinLsqError):
    pass
