"""Shannon entropy, relative entropy and their q-logarithmic deformations.

Every sum runs over the support of p in index order with compensated
accumulation; zero-weight terms are never evaluated. Logarithms of ratios are
taken as differences of logarithms whenever the ratio itself would leave the
normal float range.
"""

import math
import sys

from utils.utils import KahanSummation
from .distribution import AbsolutelyContinuousPair, Distribution, as_q, first_continuity_violation
from .errors import MeasureDomainError, ShapeMismatchError

# exp() overflows just above 709.78.
_EXP_LIMIT = 709.0


def _log_ratio(a: float, b: float) -> float:
    ratio = a / b
    if sys.float_info.min <= ratio < math.inf:
        return math.log(ratio)
    return math.log(a) - math.log(b)


def _weighted_q_log(w: float, log_x: float, one_minus_q: float, index=None) -> float:
    """w * ln_q(x) for w > 0, given log x, without forming x^(1-q) when it would overflow."""
    a = one_minus_q * log_x
    if a < _EXP_LIMIT:
        value = w * math.expm1(a) / one_minus_q
    else:
        # w * (x^(1-q) - 1) = exp(log w + a) - w
        try:
            value = (math.exp(math.log(w) + a) - w) / one_minus_q
        except OverflowError:
            value = math.inf
    if not math.isfinite(value):
        raise MeasureDomainError("q-logarithmic term exceeds the float range", index=index)
    return value


def q_logarithm(x, q=None):
    """The q-logarithm, the integral of t^(-q) from 1 to x.

    Off the unit branch this is expm1((1 - q) log x) / (1 - q), which stays
    accurate as q approaches 1 where (x^(1-q) - 1) / (1 - q) cancels.
    """
    qp = as_q(q)
    x = float(x)
    if not x > 0.0:
        raise MeasureDomainError(f"q-logarithm needs a positive argument, got {x!r}")
    if qp.is_unit:
        return math.log(x)
    return _weighted_q_log(1.0, math.log(x), 1.0 - qp.q)


def shannon_entropy(p: Distribution) -> float:
    """H(p), the sum over the support of p_i log(1/p_i)."""
    acc = KahanSummation()
    for i in p.support:
        pi = p[i]
        acc.add(-pi * math.log(pi))
    return acc.sum


def relative_entropy(pair: AbsolutelyContinuousPair) -> float:
    """D(p || r), the sum over the support of p of p_i log(p_i / r_i)."""
    p, r = pair.p, pair.r
    acc = KahanSummation()
    for i in p.support:
        acc.add(p[i] * _log_ratio(p[i], r[i]))
    return acc.sum


def relative_entropy_extended(p: Distribution, r: Distribution) -> float:
    """D(p || r) on all of the simplex squared, +inf outside of A_n."""
    if p.n != r.n:
        raise ShapeMismatchError(f"p has length {p.n} but r has length {r.n}")
    if first_continuity_violation(p, r) is not None:
        return math.inf
    return relative_entropy(AbsolutelyContinuousPair(p, r))


def q_entropy(p: Distribution, q=None) -> float:
    """S_q(p), the sum over the support of p_i ln_q(1/p_i)."""
    qp = as_q(q)
    if qp.is_unit:
        return shannon_entropy(p)
    one_minus_q = 1.0 - qp.q
    acc = KahanSummation()
    for i in p.support:
        pi = p[i]
        acc.add(_weighted_q_log(pi, -math.log(pi), one_minus_q, index=i))
    return _finite(acc.sum)


def q_relative_entropy(pair: AbsolutelyContinuousPair, q=None) -> float:
    """D_q(p || r) = -sum over the support of p of p_i ln_q(r_i / p_i)."""
    qp = as_q(q)
    if qp.is_unit:
        return relative_entropy(pair)
    p, r = pair.p, pair.r
    one_minus_q = 1.0 - qp.q
    acc = KahanSummation()
    for i in p.support:
        acc.add(-_weighted_q_log(p[i], _log_ratio(r[i], p[i]), one_minus_q, index=i))
    return _finite(acc.sum)


def _finite(total: float) -> float:
    if not math.isfinite(total):
        raise MeasureDomainError("sum of q-logarithmic terms exceeds the float range")
    return total
