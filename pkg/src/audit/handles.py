"""Measure handles: named families of functions the audit and characterization engines evaluate."""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Union

from measures.core import q_entropy, q_relative_entropy, relative_entropy, shannon_entropy
from measures.distribution import AbsolutelyContinuousPair, Distribution, as_q
from measures.errors import KindMismatchError
from utils.utils import kahan_sum


class MeasureKind(str, Enum):
    ENTROPY = "entropy"
    DIVERGENCE = "divergence"

    @classmethod
    def parse(cls, value: Union[str, "MeasureKind"]) -> "MeasureKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise KindMismatchError(f"unknown measure kind {value!r}; expected 'entropy' or 'divergence'")


@dataclass(frozen=True)
class MeasureHandle:
    """A measure defined for every n >= 1.

    Entropy-type handles take a Distribution, divergence-type handles take an
    AbsolutelyContinuousPair.
    """
    kind: MeasureKind
    evaluator: Callable
    label: str

    def __call__(self, x) -> float:
        if self.kind is MeasureKind.ENTROPY and not isinstance(x, Distribution):
            raise KindMismatchError(f"entropy-type measure {self.label!r} needs a Distribution")
        if self.kind is MeasureKind.DIVERGENCE and not isinstance(x, AbsolutelyContinuousPair):
            raise KindMismatchError(f"divergence-type measure {self.label!r} needs an AbsolutelyContinuousPair")
        return float(self.evaluator(x))

    @property
    def is_entropy(self) -> bool:
        return self.kind is MeasureKind.ENTROPY

    @property
    def is_divergence(self) -> bool:
        return self.kind is MeasureKind.DIVERGENCE

    def scaled(self, c: float) -> "MeasureHandle":
        """The handle for c times this measure."""
        c = float(c)
        inner = self.evaluator
        return MeasureHandle(self.kind, lambda x: c * inner(x), f"{c:g}*{self.label}")

    def require(self, kind: MeasureKind, what: str) -> "MeasureHandle":
        if self.kind is not kind:
            raise KindMismatchError(f"{what} needs a {kind.value}-type measure, "
                                    f"but {self.label!r} is {self.kind.value}-type")
        return self


def shannon_handle() -> MeasureHandle:
    return MeasureHandle(MeasureKind.ENTROPY, shannon_entropy, "shannon")


def relative_entropy_handle() -> MeasureHandle:
    return MeasureHandle(MeasureKind.DIVERGENCE, relative_entropy, "kl")


def q_entropy_handle(q) -> MeasureHandle:
    qp = as_q(q)
    return MeasureHandle(MeasureKind.ENTROPY, lambda p: q_entropy(p, qp), f"q-entropy[q={qp.q:g}]")


def q_relative_entropy_handle(q) -> MeasureHandle:
    qp = as_q(q)
    return MeasureHandle(MeasureKind.DIVERGENCE, lambda pair: q_relative_entropy(pair, qp), f"q-kl[q={qp.q:g}]")


def zero_handle(kind=MeasureKind.DIVERGENCE) -> MeasureHandle:
    return MeasureHandle(MeasureKind.parse(kind), lambda x: 0.0, "zero")


def index_weighted_handle() -> MeasureHandle:
    """sum_i (i+1) p_i: an entropy-type measure that is deliberately not symmetric."""
    return MeasureHandle(MeasureKind.ENTROPY,
                         lambda p: kahan_sum((i + 1) * w for i, w in enumerate(p.weights)),
                         "index-weighted")


BUILTIN_MEASURES = ("shannon", "kl", "q-entropy", "q-kl")


def builtin_handle(name: str, q=None) -> MeasureHandle:
    """Look up a built-in measure by its CLI name."""
    name = name.lower()
    if name == "shannon":
        return shannon_handle()
    if name == "kl":
        return relative_entropy_handle()
    if name in ("q-entropy", "q-kl"):
        if q is None:
            raise KindMismatchError(f"measure {name!r} needs a q parameter")
        return q_entropy_handle(q) if name == "q-entropy" else q_relative_entropy_handle(q)
    if name == "zero":
        return zero_handle()
    raise KindMismatchError(f"unknown measure {name!r}; expected one of {', '.join(BUILTIN_MEASURES)}")
