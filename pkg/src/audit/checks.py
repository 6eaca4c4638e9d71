"""Residuals of the axioms and identities a candidate measure may satisfy.

Each check evaluates both sides of one identity on one concrete instance and
returns the absolute difference. Residuals are absolute, never relative.
"""

from typing import Optional, Sequence

from measures.composition import (
    Permutation,
    compose,
    pair_compose,
    pair_direct_sum,
    pair_tensor,
    permute,
    permute_pair,
    tensor,
)
from measures.distribution import AbsolutelyContinuousPair, Distribution, as_q
from measures.errors import KindMismatchError, ShapeMismatchError
from utils.utils import kahan_sum
from .handles import MeasureHandle, MeasureKind

UNIT_PAIR = AbsolutelyContinuousPair.of([1.0], [1.0])


def pair_weight(pw: float, rw: float, q=None) -> float:
    """Chain-rule weight of one block: p-mass, or p^q r^(1-q) off the unit branch.

    Blocks without p-mass weigh nothing.
    """
    if pw == 0.0:
        return 0.0
    qp = as_q(q)
    if qp.is_unit:
        return pw
    return pw ** qp.q * rw ** (1.0 - qp.q)


def entropy_weight(w: float, q=None) -> float:
    if w == 0.0:
        return 0.0
    qp = as_q(q)
    return w if qp.is_unit else w ** qp.q


def _expect_pair(x, what: str) -> AbsolutelyContinuousPair:
    if not isinstance(x, AbsolutelyContinuousPair):
        raise KindMismatchError(f"{what} needs an AbsolutelyContinuousPair, got {type(x).__name__}")
    return x


def _expect_distribution(x, what: str) -> Distribution:
    if not isinstance(x, Distribution):
        raise KindMismatchError(f"{what} needs a Distribution, got {type(x).__name__}")
    return x


def check_symmetry(m: MeasureHandle, instance, sigma: Permutation) -> float:
    """|m(x) - m(x sigma)|, applied to both coordinates for divergences."""
    if m.is_entropy:
        p = _expect_distribution(instance, "entropy symmetry")
        return abs(m(p) - m(permute(p, sigma)))
    pair = _expect_pair(instance, "divergence symmetry")
    return abs(m(pair) - m(permute_pair(pair, sigma)))


def check_vanishing(m: MeasureHandle, p: Distribution) -> float:
    """|m(p || p)|."""
    m.require(MeasureKind.DIVERGENCE, "vanishing")
    return abs(m(AbsolutelyContinuousPair.diagonal(p)))


def signed_chain_gap(m: MeasureHandle, wpair: AbsolutelyContinuousPair,
                     partpairs: Sequence[AbsolutelyContinuousPair], q=None) -> float:
    """m(composite) - m(wpair) - sum of weighted m(partpair_i), with sign."""
    m.require(MeasureKind.DIVERGENCE, "chain rule")
    composite = pair_compose(wpair, partpairs)
    weighted = kahan_sum(
        pair_weight(wpair.p[i], wpair.r[i], q) * m(pp)
        for i, pp in enumerate(partpairs) if wpair.p[i] > 0.0
    )
    return m(composite) - m(wpair) - weighted


def check_chain_rule(m: MeasureHandle, wpair: AbsolutelyContinuousPair,
                     partpairs: Sequence[AbsolutelyContinuousPair], q=None) -> float:
    """Residual of the chain rule; with q given the weights are w_i^q w~_i^(1-q)."""
    return abs(signed_chain_gap(m, wpair, partpairs, q))


def split_pair_at(pair: AbsolutelyContinuousPair, position: int,
                  binary: AbsolutelyContinuousPair) -> AbsolutelyContinuousPair:
    """Replace entry ``position`` of both coordinates by its split along a pair over 2."""
    if binary.n != 2:
        raise ShapeMismatchError(f"recursivity splits along a pair over 2, got length {binary.n}")
    if not 0 <= position < pair.n:
        raise ShapeMismatchError(f"split position {position} outside 0..{pair.n - 1}")

    def split(d: Distribution, b: Distribution) -> Distribution:
        x = d[position]
        w = list(d.weights)
        return Distribution(w[:position] + [b[0] * x, b[1] * x] + w[position + 1:])

    return AbsolutelyContinuousPair(split(pair.p, binary.p), split(pair.r, binary.r))


def check_recursivity(m: MeasureHandle, wpair: AbsolutelyContinuousPair,
                      ppair: AbsolutelyContinuousPair, q=None, position: int = 0) -> float:
    """|m(split of w at position along ppair) - m(w) - weight_position * m(ppair)|."""
    m.require(MeasureKind.DIVERGENCE, "recursivity")
    split = split_pair_at(wpair, position, ppair)
    weight = pair_weight(wpair.p[position], wpair.r[position], q)
    return abs(m(split) - m(wpair) - weight * m(ppair))


def check_two_block(m: MeasureHandle, wpair: AbsolutelyContinuousPair,
                    ppair: AbsolutelyContinuousPair, rpair: AbsolutelyContinuousPair, q=None) -> float:
    """The n = 2 chain rule written with direct sums."""
    m.require(MeasureKind.DIVERGENCE, "two-block chain rule")
    composite = pair_direct_sum(wpair, ppair, rpair)
    rhs = kahan_sum([
        m(wpair),
        pair_weight(wpair.p[0], wpair.r[0], q) * m(ppair) if wpair.p[0] > 0.0 else 0.0,
        pair_weight(wpair.p[1], wpair.r[1], q) * m(rpair) if wpair.p[1] > 0.0 else 0.0,
    ])
    return abs(m(composite) - rhs)


def check_q_chain(m: MeasureHandle, q, w: Distribution, parts: Sequence[Distribution]) -> float:
    """|m(w o parts) - m(w) - sum over w_i > 0 of w_i^q m(part_i)|."""
    m.require(MeasureKind.ENTROPY, "q-chain rule")
    composite = compose(w, parts)
    weighted = kahan_sum(entropy_weight(w[i], q) * m(part) for i, part in enumerate(parts) if w[i] > 0.0)
    return abs(m(composite) - m(w) - weighted)


def check_q_mult(m: MeasureHandle, q, w: Distribution, p: Distribution) -> float:
    """|m(w (x) p) - m(w) - (sum over w_i > 0 of w_i^q) m(p)|."""
    m.require(MeasureKind.ENTROPY, "q-multiplicativity")
    power_sum = kahan_sum(entropy_weight(wi, q) for wi in w.weights if wi > 0.0)
    return abs(m(tensor(w, p)) - m(w) - power_sum * m(p))


def check_q_rel_mult(m: MeasureHandle, q, wpair: AbsolutelyContinuousPair,
                     ppair: AbsolutelyContinuousPair) -> float:
    """|m(w(x)p || w~(x)p~) - m(w || w~) - (sum over w_i > 0 of w_i^q w~_i^(1-q)) m(p || p~)|."""
    m.require(MeasureKind.DIVERGENCE, "q-multiplicativity of relative measures")
    power_sum = kahan_sum(pair_weight(pw, rw, q) for pw, rw in zip(wpair.p.weights, wpair.r.weights) if pw > 0.0)
    return abs(m(pair_tensor(wpair, ppair)) - m(wpair) - power_sum * m(ppair))


def check_q_recursivity(m: MeasureHandle, q, w: Distribution, a: Distribution, position: int = 0) -> float:
    """|m(.., a_0 w_j, a_1 w_j, ..) - m(w) - w_j^q m(a)|, the simplified q-chain rule."""
    m.require(MeasureKind.ENTROPY, "q-recursivity")
    if a.n != 2:
        raise ShapeMismatchError(f"q-recursivity splits along a distribution over 2, got length {a.n}")
    if not 0 <= position < w.n:
        raise ShapeMismatchError(f"split position {position} outside 0..{w.n - 1}")
    x = w[position]
    values = list(w.weights)
    split = Distribution(values[:position] + [a[0] * x, a[1] * x] + values[position + 1:])
    return abs(m(split) - m(w) - entropy_weight(x, q) * m(a))


def check_tensor_exchange(m: MeasureHandle, x, y) -> float:
    """|m(x (x) y) - m(y (x) x)|, on distributions or on pairs according to kind."""
    if m.is_entropy:
        x = _expect_distribution(x, "tensor exchange")
        y = _expect_distribution(y, "tensor exchange")
        return abs(m(tensor(x, y)) - m(tensor(y, x)))
    x = _expect_pair(x, "tensor exchange")
    y = _expect_pair(y, "tensor exchange")
    return abs(m(pair_tensor(x, y)) - m(pair_tensor(y, x)))


def _suffix_sums(values):
    tails = [0.0] * (len(values) + 1)
    for j in range(len(values) - 1, -1, -1):
        tails[j] = kahan_sum(values[j:])
    tails[0] = 1.0
    return tails


def _binary_split(p_head: float, p_tail: float, r_head: float, r_tail: float) -> AbsolutelyContinuousPair:
    """The pair over 2 that splits a tail entry into (head, rest of tail)."""
    if r_tail == 0.0:
        return AbsolutelyContinuousPair.of([1.0, 0.0], [1.0, 0.0])
    b = min(1.0, r_head / r_tail)
    if p_tail == 0.0:
        return AbsolutelyContinuousPair.of([b, 1.0 - b], [b, 1.0 - b])
    a = min(1.0, p_head / p_tail)
    return AbsolutelyContinuousPair.of([a, 1.0 - a], [b, 1.0 - b])


def telescoped_chain_residual(m: MeasureHandle, wpair: AbsolutelyContinuousPair,
                              partpairs: Sequence[AbsolutelyContinuousPair], q=None) -> float:
    """The chain-rule gap rebuilt from single recursivity steps.

    The composite is grown from wpair one binary split at a time, and every
    part pair is grown from ((1), (1)) by the same splits. The signed
    residuals of the global steps, minus the weighted residuals of the
    per-part steps, minus the weighted values m((1) || (1)), telescope to
    :func:`signed_chain_gap` for any measure whatsoever.
    """
    m.require(MeasureKind.DIVERGENCE, "chain rule telescoping")
    if len(partpairs) != wpair.n:
        raise ShapeMismatchError(f"composition needs {wpair.n} part pairs, got {len(partpairs)}")
    n = wpair.n
    w, wt = wpair.p.weights, wpair.r.weights
    # Current global state: expanded blocks, then the block in progress, then untouched weights.
    global_steps = []
    part_steps = [[] for _ in range(n)]
    expanded_p, expanded_r = [], []
    for i, pp in enumerate(partpairs):
        p, r = pp.p.weights, pp.r.weights
        tp, tr = _suffix_sums(p), _suffix_sums(r)
        rest_p, rest_r = list(w[i + 1:]), list(wt[i + 1:])
        for s in range(len(p) - 1):
            binary = _binary_split(p[s], tp[s], r[s], tr[s])
            before_local = AbsolutelyContinuousPair.of(list(p[:s]) + [tp[s]], list(r[:s]) + [tr[s]])
            after_local = AbsolutelyContinuousPair.of(list(p[:s + 1]) + [tp[s + 1]], list(r[:s + 1]) + [tr[s + 1]])
            part_steps[i].append(m(after_local) - m(before_local)
                                 - pair_weight(tp[s], tr[s], q) * m(binary))

            before = AbsolutelyContinuousPair.of(
                expanded_p + [w[i] * x for x in p[:s]] + [w[i] * tp[s]] + rest_p,
                expanded_r + [wt[i] * x for x in r[:s]] + [wt[i] * tr[s]] + rest_r)
            after = AbsolutelyContinuousPair.of(
                expanded_p + [w[i] * x for x in p[:s + 1]] + [w[i] * tp[s + 1]] + rest_p,
                expanded_r + [wt[i] * x for x in r[:s + 1]] + [wt[i] * tr[s + 1]] + rest_r)
            global_steps.append(m(after) - m(before)
                                - pair_weight(w[i] * tp[s], wt[i] * tr[s], q) * m(binary))
        expanded_p.extend(w[i] * x for x in p)
        expanded_r.extend(wt[i] * x for x in r)

    unit_value = m(UNIT_PAIR)
    terms = list(global_steps)
    for i in range(n):
        if w[i] > 0.0:
            omega = pair_weight(w[i], wt[i], q)
            terms.extend(-omega * step for step in part_steps[i])
            terms.append(-omega * unit_value)
    return kahan_sum(terms)


