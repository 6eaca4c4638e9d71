"""Structural operations on distributions and pairs.

Composition w o (p^1, ..., p^n), the tensor product, the binary direct sum,
the permutation action, and the splitting of a pair into the block carrying
p and the block where p vanishes.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from utils.utils import kahan_sum
from .distribution import AbsolutelyContinuousPair, Distribution
from .errors import DistributionError, ShapeMismatchError


@dataclass(frozen=True)
class Permutation:
    """A bijection of {0, ..., n-1}; ``mapping[i]`` is the image sigma(i)."""
    mapping: Tuple[int, ...]

    def __post_init__(self):
        mapping = tuple(int(i) for i in self.mapping)
        object.__setattr__(self, "mapping", mapping)
        if sorted(mapping) != list(range(len(mapping))):
            raise ShapeMismatchError(f"{list(mapping)} is not a permutation of 0..{len(mapping) - 1}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        mapping = list(range(n))
        mapping[i], mapping[j] = mapping[j], mapping[i]
        return cls(tuple(mapping))

    @classmethod
    def from_one_based(cls, images: Sequence[int]) -> "Permutation":
        """Build from the 1-based image list (sigma(1), ..., sigma(n))."""
        return cls(tuple(int(i) - 1 for i in images))

    @property
    def n(self) -> int:
        return len(self.mapping)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return Permutation(tuple(inv))


@dataclass(frozen=True)
class ZeroBlockDecomposition:
    """Mass R of r on the support of p, and the pair restricted to that support.

    ``permutation`` moves the support of p to the front, stably; ``k`` is the
    support size.
    """
    R: float
    reduced: AbsolutelyContinuousPair
    k: int
    permutation: Optional[Permutation] = None


def compose(w: Distribution, parts: Sequence[Distribution]) -> Distribution:
    """w o (p^1, ..., p^n): the blocks w_i p^i laid end to end."""
    if len(parts) != w.n:
        raise ShapeMismatchError(f"composition needs {w.n} parts, got {len(parts)}")
    weights = []
    for wi, part in zip(w.weights, parts):
        weights.extend(wi * x for x in part.weights)
    return Distribution(weights)


def tensor(w: Distribution, p: Distribution) -> Distribution:
    """w (x) p = w o (p, ..., p)."""
    return compose(w, [p] * w.n)


def direct_sum(w: float, p: Distribution, r: Distribution) -> Distribution:
    """w p (+) (1 - w) r = (w p_1, ..., w p_k, (1 - w) r_1, ..., (1 - w) r_l)."""
    w = float(w)
    if not 0.0 <= w <= 1.0:
        raise DistributionError(f"direct sum weight must lie in [0, 1], got {w}")
    return Distribution([w * x for x in p.weights] + [(1.0 - w) * x for x in r.weights])


def permute(p: Distribution, sigma: Permutation) -> Distribution:
    """p sigma = (p_sigma(0), ..., p_sigma(n-1))."""
    if sigma.n != p.n:
        raise ShapeMismatchError(f"permutation has length {sigma.n}, distribution has length {p.n}")
    return Distribution(p[j] for j in sigma.mapping)


def permute_pair(pair: AbsolutelyContinuousPair, sigma: Permutation) -> AbsolutelyContinuousPair:
    return AbsolutelyContinuousPair(permute(pair.p, sigma), permute(pair.r, sigma))


def pair_compose(wpair: AbsolutelyContinuousPair,
                 partpairs: Sequence[AbsolutelyContinuousPair]) -> AbsolutelyContinuousPair:
    """Compose both coordinates; the result is certified to lie in A again."""
    if len(partpairs) != wpair.n:
        raise ShapeMismatchError(f"composition needs {wpair.n} part pairs, got {len(partpairs)}")
    p = compose(wpair.p, [pp.p for pp in partpairs])
    r = compose(wpair.r, [pp.r for pp in partpairs])
    return AbsolutelyContinuousPair(p, r)


def pair_tensor(wpair: AbsolutelyContinuousPair, ppair: AbsolutelyContinuousPair) -> AbsolutelyContinuousPair:
    return pair_compose(wpair, [ppair] * wpair.n)


def pair_direct_sum(wpair: AbsolutelyContinuousPair, ppair: AbsolutelyContinuousPair,
                    rpair: AbsolutelyContinuousPair) -> AbsolutelyContinuousPair:
    """Direct sums of both coordinates, weights taken from a pair over 2."""
    if wpair.n != 2:
        raise ShapeMismatchError(f"direct sum weights must be a pair over 2, got length {wpair.n}")
    return AbsolutelyContinuousPair(direct_sum(wpair.p[0], ppair.p, rpair.p),
                                    direct_sum(wpair.r[0], ppair.r, rpair.r))


def support_first_permutation(p: Distribution) -> Permutation:
    """Stable permutation listing the support of p first, then its zeros."""
    support = p.support
    zeros = tuple(i for i in range(p.n) if p[i] == 0.0)
    return Permutation(support + zeros)


def decompose_zeros(pair: AbsolutelyContinuousPair) -> ZeroBlockDecomposition:
    """Split (p, r) into R = mass of r on supp(p) and the normalized restriction.

    With full support p the input comes back unchanged with R = 1.
    """
    sigma = support_first_permutation(pair.p)
    k = len(pair.p.support)
    if k == pair.n:
        return ZeroBlockDecomposition(R=1.0, reduced=pair, k=k, permutation=sigma)
    support = sigma.mapping[:k]
    if all(pair.r[i] == 0.0 for i in sigma.mapping[k:]):
        # No r-mass off the support: R is exactly 1 however r rounds.
        reduced = AbsolutelyContinuousPair(Distribution(pair.p[i] for i in support),
                                           Distribution(pair.r[i] for i in support))
        return ZeroBlockDecomposition(R=1.0, reduced=reduced, k=k, permutation=sigma)
    # R > 0 because r_i > 0 wherever p_i > 0.
    R = min(1.0, kahan_sum(pair.r[i] for i in support))
    reduced = AbsolutelyContinuousPair(
        Distribution(pair.p[i] for i in support),
        Distribution(pair.r[i] / R for i in support),
    )
    return ZeroBlockDecomposition(R=R, reduced=reduced, k=k, permutation=sigma)
