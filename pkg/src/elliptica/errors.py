"""Exception hierarchy shared by every elliptica module."""


class EllipticaError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParams(EllipticaError, ValueError):
    pass


class NotApplicable(EllipticaError):
    """The requested quantity is not defined for this input (e.g. wrong variety kind)."""


class NonConvergent(EllipticaError):
    pass


class DenominatorNearZero(EllipticaError):
    """A theta value used as a denominator is too small relative to its basis."""

    def __init__(self, index, value, where=None):
        self.index = index
        self.value = value
        self.where = where
        loc = f" at {where}" if where is not None else ""
        super().__init__(f"theta_{index}{loc} = {value:.3e} is below the denominator guard")


class RankAmbiguous(EllipticaError):
    def __init__(self, rank, gap):
        self.rank = rank
        self.gap = gap
        super().__init__(f"numerical rank {rank} has spectral gap {gap:.3g} < 10")


class CalibrationFailed(EllipticaError):
    def __init__(self, best, residual):
        self.best = best
        self.residual = residual
        super().__init__(f"best characteristic {best} only reaches residual {residual:.3e}")


class IndexOutOfRange(EllipticaError, IndexError):
    pass


class DegreeZero(EllipticaError):
    pass
