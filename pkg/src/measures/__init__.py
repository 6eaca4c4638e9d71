from .errors import (
    InfoMeasureError,
    DistributionError,
    AbsoluteContinuityError,
    ShapeMismatchError,
    MeasureDomainError,
    KindMismatchError,
)
from .distribution import Distribution, AbsolutelyContinuousPair, QParameter
from .core import (
    q_logarithm,
    shannon_entropy,
    relative_entropy,
    relative_entropy_extended,
    q_entropy,
    q_relative_entropy,
)
from .composition import (
    Permutation,
    ZeroBlockDecomposition,
    compose,
    tensor,
    direct_sum,
    permute,
    pair_compose,
    pair_tensor,
    pair_direct_sum,
    permute_pair,
    support_first_permutation,
    decompose_zeros,
)
