"""Exception hierarchy shared by every package of the project."""

from typing import Optional


class InfoMeasureError(ValueError):
    """Base class for all validation and domain errors raised here."""


class DistributionError(InfoMeasureError):
    """A weight vector is not a point of the probability simplex."""

    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index


class AbsoluteContinuityError(DistributionError):
    """A pair (p, r) has p_i > 0 where r_i = 0."""


class ShapeMismatchError(InfoMeasureError):
    """Lengths or counts of the operands do not fit together."""


class MeasureDomainError(InfoMeasureError):
    """A function was evaluated outside of its domain."""

    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index


class KindMismatchError(InfoMeasureError):
    """An entropy-type object was used where a divergence-type one is needed, or vice versa."""
