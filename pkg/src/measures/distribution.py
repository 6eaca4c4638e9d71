"""Points of the probability simplex, absolutely continuous pairs and the q parameter.

All three types are immutable after construction and validated eagerly; no
weight vector is ever renormalized unless :meth:`Distribution.normalize` is
called explicitly.
"""

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Tuple

import numpy as np

from utils.utils import kahan_sum
from .errors import AbsoluteContinuityError, DistributionError, ShapeMismatchError

SUM_TOLERANCE = 1e-9
UNIT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Distribution:
    """A probability distribution on {0, ..., n-1}, stored exactly as given."""
    weights: Tuple[float, ...]

    def __init__(self, weights: Iterable[float]):
        values = tuple(float(w) for w in weights)
        object.__setattr__(self, "weights", values)
        self._validate()

    def _validate(self):
        if not self.weights:
            raise DistributionError("distribution must have at least one weight")
        for i, w in enumerate(self.weights):
            if not math.isfinite(w):
                raise DistributionError(f"weight at index {i} is not finite ({w})", index=i)
            if w < 0.0:
                raise DistributionError(f"weight at index {i} is negative ({w})", index=i)
        total = kahan_sum(self.weights)
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise DistributionError(f"weights sum to {total!r}, not 1 (tolerance {SUM_TOLERANCE:g})")
        # Nonempty support follows from the sum, kept explicit for clarity of errors.
        if not any(w > 0.0 for w in self.weights):
            raise DistributionError("distribution has empty support")

    @classmethod
    def normalize(cls, weights: Iterable[float]) -> "Distribution":
        """Rescale nonnegative weights with positive total onto the simplex."""
        values = [float(w) for w in weights]
        for i, w in enumerate(values):
            if not math.isfinite(w) or w < 0.0:
                raise DistributionError(f"cannot normalize weight {w} at index {i}", index=i)
        total = kahan_sum(values)
        if not total > 0.0:
            raise DistributionError("cannot normalize weights with zero total")
        return cls(w / total for w in values)

    @classmethod
    def point_mass(cls, n: int = 1, at: int = 0) -> "Distribution":
        if not 0 <= at < n:
            raise ShapeMismatchError(f"point mass position {at} outside 0..{n - 1}")
        return cls(1.0 if i == at else 0.0 for i in range(n))

    @classmethod
    def uniform(cls, n: int) -> "Distribution":
        return cls([1.0 / n] * n)

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def support(self) -> Tuple[int, ...]:
        """Indices carrying positive weight, in index order."""
        return tuple(i for i, w in enumerate(self.weights) if w > 0.0)

    @property
    def has_full_support(self) -> bool:
        return all(w > 0.0 for w in self.weights)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)

    def to_list(self):
        return list(self.weights)

    def __len__(self):
        return len(self.weights)

    def __getitem__(self, i):
        return self.weights[i]

    def __iter__(self):
        return iter(self.weights)


@dataclass(frozen=True)
class AbsolutelyContinuousPair:
    """A pair (p, r) of equal length with p_i = 0 whenever r_i = 0."""
    p: Distribution
    r: Distribution

    def __post_init__(self):
        if not isinstance(self.p, Distribution):
            object.__setattr__(self, "p", Distribution(self.p))
        if not isinstance(self.r, Distribution):
            object.__setattr__(self, "r", Distribution(self.r))
        if self.p.n != self.r.n:
            raise ShapeMismatchError(f"p has length {self.p.n} but r has length {self.r.n}")
        index = first_continuity_violation(self.p, self.r)
        if index is not None:
            raise AbsoluteContinuityError(
                f"p is not absolutely continuous with respect to r: "
                f"p_i = {self.p[index]!r} > 0 but r_i = 0 at index {index}",
                index=index,
            )

    @classmethod
    def of(cls, p: Sequence[float], r: Sequence[float]) -> "AbsolutelyContinuousPair":
        return cls(Distribution(p), Distribution(r))

    @classmethod
    def diagonal(cls, p: Distribution) -> "AbsolutelyContinuousPair":
        return cls(p, p)

    @property
    def n(self) -> int:
        return self.p.n

    def to_dict(self):
        return {"p": self.p.to_list(), "r": self.r.to_list()}


def first_continuity_violation(p: Distribution, r: Distribution):
    """Index of the first i with p_i > 0 and r_i = 0, or None."""
    for i, (pi, ri) in enumerate(zip(p.weights, r.weights)):
        if pi > 0.0 and ri == 0.0:
            return i
    return None


@dataclass(frozen=True)
class QParameter:
    """The deformation parameter q of the q-logarithm."""
    q: float = field(default=1.0)

    def __post_init__(self):
        value = float(self.q)
        if not math.isfinite(value):
            raise DistributionError(f"q must be a finite real, got {self.q!r}")
        object.__setattr__(self, "q", value)

    @property
    def is_unit(self) -> bool:
        """True on the logarithmic branch |q - 1| <= 1e-12."""
        return abs(self.q - 1.0) <= UNIT_TOLERANCE

    def __float__(self):
        return self.q


def as_q(q) -> QParameter:
    """Accept a QParameter, a plain real or None (meaning q = 1)."""
    if q is None:
        return QParameter(1.0)
    if isinstance(q, QParameter):
        return q
    return QParameter(q)
