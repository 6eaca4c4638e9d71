"""Seeded samplers for the simplex and for absolutely continuous pairs.

Uniform points of the simplex come from normalized unit-rate exponential
variates. Every audit trial draws from its own generator, seeded by
(seed, axiom, trial), so the order trials run in never changes the draws.
"""

import zlib

import numpy as np

from measures.distribution import AbsolutelyContinuousPair, Distribution


# Uniform blend weight for samples drawn at q != 1, where the q-measures of
# points with tiny weights grow like a power of 1/p_i.
Q_SAMPLE_MIX = 0.5


def trial_rng(seed: int, stream: str, trial: int) -> np.random.Generator:
    """Independent generator for one trial of one named stream."""
    key = zlib.crc32(stream.encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence([int(seed), key, int(trial)]))


def _exponential_simplex(n: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.exponential(scale=1.0, size=n)
    return g / g.sum()


def sample_distribution(n: int, rng: np.random.Generator) -> Distribution:
    """Approximately uniform point of the n-simplex."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return Distribution([1.0])
    return Distribution(_exponential_simplex(n, rng))


def _zero_pattern(n: int, zero_prob: float, rng: np.random.Generator) -> np.ndarray:
    """Boolean mask of entries to keep; with probability zero_prob a random proper subset is zeroed."""
    keep = np.ones(n, dtype=bool)
    if n >= 2 and rng.random() < zero_prob:
        n_zero = int(rng.integers(1, n))
        keep[rng.choice(n, size=n_zero, replace=False)] = False
    return keep


def _blend_uniform(weights: np.ndarray, mix: float) -> np.ndarray:
    """(1 - mix) * weights + mix * uniform on the support of weights."""
    if mix <= 0.0:
        return weights
    support = weights > 0.0
    return (1.0 - mix) * weights + mix * support / support.sum()


def sample_sparse_distribution(n: int, zero_prob: float, rng: np.random.Generator,
                               mix: float = 0.0) -> Distribution:
    """Like sample_distribution, but sometimes with zero weights (never all zero).

    With ``mix`` > 0 every nonzero weight is at least mix / n.
    """
    if n == 1:
        return Distribution([1.0])
    keep = _zero_pattern(n, zero_prob, rng)
    g = rng.exponential(scale=1.0, size=n) * keep
    return Distribution(_blend_uniform(g / g.sum(), mix))


def sample_pair(n: int, zero_prob: float, rng: np.random.Generator,
                mix: float = 0.0) -> AbsolutelyContinuousPair:
    """A pair in A_n whose r is positive on a random superset of the support of p.

    With ``mix`` > 0 both p and r are blended with the uniform distribution on
    their supports, so r_i / p_i stays within [mix / n, n / mix] on supp(p).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return AbsolutelyContinuousPair.of([1.0], [1.0])
    p = sample_sparse_distribution(n, zero_prob, rng, mix)
    r_support = p.as_array() > 0.0
    extra = rng.random(n) < 0.5
    r_support = r_support | extra
    g = rng.exponential(scale=1.0, size=n) * r_support
    return AbsolutelyContinuousPair(p, Distribution(_blend_uniform(g / g.sum(), mix)))


def sample_size(rng: np.random.Generator, low: int, high: int) -> int:
    """Uniform integer in [low, high]."""
    return int(rng.integers(low, max(low, high) + 1))
