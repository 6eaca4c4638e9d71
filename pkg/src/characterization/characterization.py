"""Numerical versions of the constructions behind the uniqueness theorems.

A divergence-type measure satisfying symmetry, vanishing and the chain rule
is c times relative entropy; the constant is read off the function
L(alpha) = m((1, 0) || (alpha, 1 - alpha)), which must be -c log(alpha).
For q != 1, symmetry plus q-multiplicativity pin an entropy to c S_q and a
divergence to c D_q, with c read off a single evaluation.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from audit.handles import (
    MeasureHandle,
    MeasureKind,
    q_entropy_handle,
    q_relative_entropy_handle,
    relative_entropy_handle,
)
from audit.sampling import Q_SAMPLE_MIX, sample_pair, sample_size, sample_sparse_distribution, trial_rng
from measures.composition import decompose_zeros
from measures.distribution import AbsolutelyContinuousPair, Distribution, as_q
from measures.errors import InfoMeasureError, KindMismatchError, MeasureDomainError

logger = logging.getLogger(__name__)

DEFAULT_GRID = tuple(k / 32 for k in range(1, 33))

THM3_SIGN_NOTE = ("constant uses the prefactor (q-1)/(2^(q-1)-1); a (1-q) prefactor "
                  "would return -1 for D_q itself")

METHODS = ("fit", "thm2", "thm3")


class CharacterizationError(InfoMeasureError):
    """A characterization could not be carried out for the given inputs."""


@dataclass
class LogFitResult:
    """Least-squares constant c with L(alpha) ~ -c log(alpha) over a grid."""
    c: float
    max_residual: float
    grid: List[float] = field(default_factory=list)


@dataclass
class BFInstance:
    """The 2n-element pair whose two evaluations pin m on full-support pairs."""
    alpha: float
    big_pair: AbsolutelyContinuousPair


@dataclass
class CharacterizationResult:
    c: float
    max_residual: float
    method: str
    sign_note: Optional[str] = None

    def to_dict(self):
        return {"c": self.c, "max_residual": self.max_residual,
                "method": self.method, "sign_note": self.sign_note}


def _check_alpha(alpha: float, name: str = "alpha") -> float:
    alpha = float(alpha)
    if not 0.0 < alpha <= 1.0:
        raise MeasureDomainError(f"{name} must lie in (0, 1], got {alpha!r}")
    return alpha


def _require_off_unit(q) -> float:
    qp = as_q(q)
    if qp.is_unit:
        raise MeasureDomainError(f"q must differ from 1 by more than 1e-12, got {qp.q!r}")
    return qp.q


def ell(m: MeasureHandle, alpha: float) -> float:
    """L(alpha) = m((1, 0) || (alpha, 1 - alpha))."""
    m.require(MeasureKind.DIVERGENCE, "L")
    alpha = _check_alpha(alpha)
    return m(AbsolutelyContinuousPair.of([1.0, 0.0], [alpha, 1.0 - alpha]))


def check_multiplicativity(m: MeasureHandle, alpha: float, beta: float) -> float:
    """|L(alpha beta) - L(alpha) - L(beta)|."""
    alpha = _check_alpha(alpha)
    beta = _check_alpha(beta, "beta")
    return abs(ell(m, alpha * beta) - ell(m, alpha) - ell(m, beta))


def check_two_add_instance(m: MeasureHandle, alpha: float, beta: float) -> float:
    """Evaluate x = m((1,0,0) || (ab, a(1-b), 1-a)) in the two ways of the additivity argument.

    Returns |x - L(ab)| + |x - L(a) - L(b)|, which vanishes when the zero-block
    identity holds with k = 1 and with k = 2.
    """
    alpha = _check_alpha(alpha)
    beta = _check_alpha(beta, "beta")
    m.require(MeasureKind.DIVERGENCE, "two-add instance")
    x = m(AbsolutelyContinuousPair.of([1.0, 0.0, 0.0],
                                      [alpha * beta, alpha * (1.0 - beta), 1.0 - alpha]))
    return abs(x - ell(m, alpha * beta)) + abs(x - ell(m, alpha) - ell(m, beta))


def check_zeros_lemma(m: MeasureHandle, pair: AbsolutelyContinuousPair) -> float:
    """|m(p || r) - L(R) - m(p' || r')| for the support block of p."""
    m.require(MeasureKind.DIVERGENCE, "zero-block identity")
    block = decompose_zeros(pair)
    return abs(m(pair) - ell(m, block.R) - m(block.reduced))


def fit_log_constant(m: MeasureHandle, grid: Optional[Sequence[float]] = None) -> LogFitResult:
    """Fit L(alpha) = -c log(alpha) by least squares through the origin.

    Points with log(alpha) = 0 carry no information about c and only enter the
    reported residual.
    """
    m.require(MeasureKind.DIVERGENCE, "log fit")
    grid = [_check_alpha(a) for a in (DEFAULT_GRID if grid is None else grid)]
    if not grid:
        raise CharacterizationError("log fit needs a nonempty grid")
    x = np.array([-math.log(a) for a in grid])
    y = np.array([ell(m, a) for a in grid])
    usable = x != 0.0
    if not usable.any():
        raise CharacterizationError("log fit grid has no point with alpha < 1")
    solution, *_ = np.linalg.lstsq(x[usable, None], y[usable], rcond=None)
    c = float(solution[0])
    max_residual = float(np.max(np.abs(y - c * x)))
    logger.debug("log fit of %s: c=%r max residual %.3e over %d points", m.label, c, max_residual, len(grid))
    return LogFitResult(c=c, max_residual=max_residual, grid=list(grid))


def _halving_factor(t: float) -> float:
    """t / (2^t - 1), without overflow for large t."""
    a = t * math.log(2.0)
    if a < 709.0:
        return t / math.expm1(a)
    return math.exp(math.log(t) - a)


def extract_constant_q(m: MeasureHandle, q) -> float:
    """c = (1 - q) / (2^(1-q) - 1) * m(1/2, 1/2)."""
    m.require(MeasureKind.ENTROPY, "q-entropy constant")
    q = _require_off_unit(q)
    return _halving_factor(1.0 - q) * m(Distribution([0.5, 0.5]))


def extract_constant_q_rel(m: MeasureHandle, q) -> float:
    """c = (q - 1) / (2^(q-1) - 1) * m((1, 0) || (1/2, 1/2))."""
    m.require(MeasureKind.DIVERGENCE, "q-relative-entropy constant")
    q = _require_off_unit(q)
    return _halving_factor(q - 1.0) * m(AbsolutelyContinuousPair.of([1.0, 0.0], [0.5, 0.5]))


def build_bf_instance(pair: AbsolutelyContinuousPair) -> BFInstance:
    """Pair (p, 0 || alpha p, r - alpha p) with the largest admissible alpha."""
    p, r = pair.p, pair.r
    if not p.has_full_support:
        zero = next(i for i in range(p.n) if p[i] == 0.0)
        raise MeasureDomainError(f"p must have full support, but p_i = 0 at index {zero}", index=zero)
    alpha = min(1.0, min(ri / pi for pi, ri in zip(p.weights, r.weights)))
    big_p = list(p.weights) + [0.0] * p.n
    # r_i - alpha p_i can round below zero at the minimizing index.
    big_r = [alpha * pi for pi in p.weights] + [max(0.0, ri - alpha * pi) for pi, ri in zip(p.weights, r.weights)]
    return BFInstance(alpha=alpha, big_pair=AbsolutelyContinuousPair.of(big_p, big_r))


def _sample_instance(kind: MeasureKind, rng, max_n: int, zero_prob: float, mix: float):
    n = sample_size(rng, 1, max_n)
    if kind is MeasureKind.ENTROPY:
        return sample_sparse_distribution(n, zero_prob, rng, mix)
    return sample_pair(n, zero_prob, rng, mix)


def verify_scaling(m: MeasureHandle, c: float, reference: MeasureHandle, trials: int = 500,
                   seed: int = 0, max_n: int = 8, zero_prob: float = 0.25, mix: float = 0.0) -> float:
    """Max over seeded instances of |m(x) - c reference(x)|; ``mix`` as in :func:`sample_pair`."""
    if m.kind is not reference.kind:
        raise KindMismatchError(f"cannot compare {m.kind.value}-type {m.label!r} "
                                f"with {reference.kind.value}-type {reference.label!r}")
    if trials < 1:
        raise CharacterizationError(f"trials must be >= 1, got {trials}")
    deviation = 0.0
    for i in range(trials):
        rng = trial_rng(seed, "verify-scaling", i)
        x = _sample_instance(m.kind, rng, max_n, zero_prob, mix)
        d = abs(m(x) - c * reference(x))
        if math.isnan(d):
            return math.inf
        deviation = max(deviation, d)
    return deviation


def characterize(m: MeasureHandle, method: str, q=None, trials: int = 500, seed: int = 0,
                 max_n: int = 8, zero_prob: float = 0.25) -> CharacterizationResult:
    """Recover the constant of ``m`` and measure how far m is from c times the reference.

    ``fit`` compares against relative entropy, ``thm2`` against S_q and
    ``thm3`` against D_q. The reported residual is the larger of the method's
    own residual and the scaling deviation over ``trials`` instances.
    """
    method = method.lower()
    if method == "fit":
        fit = fit_log_constant(m)
        deviation = verify_scaling(m, fit.c, relative_entropy_handle(), trials, seed, max_n, zero_prob)
        return CharacterizationResult(fit.c, max(fit.max_residual, deviation), "fit")
    if method == "thm2":
        c = extract_constant_q(m, q)
        deviation = verify_scaling(m, c, q_entropy_handle(q), trials, seed, max_n, zero_prob, Q_SAMPLE_MIX)
        return CharacterizationResult(c, deviation, "thm2")
    if method == "thm3":
        c = extract_constant_q_rel(m, q)
        deviation = verify_scaling(m, c, q_relative_entropy_handle(q), trials, seed, max_n, zero_prob,
                                   Q_SAMPLE_MIX)
        return CharacterizationResult(c, deviation, "thm3", THM3_SIGN_NOTE)
    raise CharacterizationError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")
