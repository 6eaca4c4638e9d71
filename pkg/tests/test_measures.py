import math

import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from audit.sampling import Q_SAMPLE_MIX, sample_pair, sample_sparse_distribution, trial_rng
from measures import (
    AbsoluteContinuityError,
    AbsolutelyContinuousPair,
    Distribution,
    DistributionError,
    MeasureDomainError,
    QParameter,
    ShapeMismatchError,
    q_entropy,
    q_logarithm,
    q_relative_entropy,
    relative_entropy,
    relative_entropy_extended,
    shannon_entropy,
)


@st.composite
def distributions(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    weight = st.one_of(st.just(0.0), st.floats(1e-6, 1.0))
    raw = draw(st.lists(weight, min_size=n, max_size=n).filter(lambda xs: sum(xs) > 1e-3))
    return Distribution.normalize(raw)


@st.composite
def pairs(draw, max_n=8):
    p = draw(distributions(max_n))
    raw = draw(st.lists(st.floats(1e-3, 1.0), min_size=p.n, max_size=p.n))
    # r may vanish only where p does.
    keep = draw(st.lists(st.booleans(), min_size=p.n, max_size=p.n))
    raw = [x if (p[i] > 0.0 or keep[i]) else 0.0 for i, x in enumerate(raw)]
    return AbsolutelyContinuousPair(p, Distribution.normalize(raw))


# --- validation ---

def test_distribution_rejects_negative_weight_with_index():
    with pytest.raises(DistributionError) as excinfo:
        Distribution([0.5, -0.1, 0.6])
    assert excinfo.value.index == 1


def test_distribution_rejects_bad_sum_and_nan():
    with pytest.raises(DistributionError):
        Distribution([0.5, 0.4])
    with pytest.raises(DistributionError):
        Distribution([float("nan"), 1.0])
    with pytest.raises(DistributionError):
        Distribution([])


def test_distribution_accepts_sum_within_tolerance():
    p = Distribution([0.5, 0.5 + 5e-10])
    assert p.n == 2
    assert p.weights == (0.5, 0.5 + 5e-10)


def test_pair_rejects_continuity_violation_with_index():
    with pytest.raises(AbsoluteContinuityError) as excinfo:
        AbsolutelyContinuousPair.of([0.5, 0.5, 0.0], [1.0, 0.0, 0.0])
    assert excinfo.value.index == 1


def test_pair_rejects_length_mismatch():
    with pytest.raises(ShapeMismatchError):
        AbsolutelyContinuousPair.of([1.0], [0.5, 0.5])


def test_q_parameter_unit_branch():
    assert QParameter(1.0 + 1e-13).is_unit
    assert not QParameter(1.0 + 1e-11).is_unit
    with pytest.raises(DistributionError):
        QParameter(float("inf"))


# --- q-logarithm ---

@pytest.mark.parametrize("x, q, expected", [
    (1.0, 0.3, 0.0),
    (2.0, 2.0, 0.5),
    (3.0, 0.0, 2.0),
    (math.e, 1.0, 1.0),
])
def test_q_logarithm_examples(x, q, expected):
    npt.assert_allclose(q_logarithm(x, q), expected, rtol=0, atol=1e-15)


@pytest.mark.parametrize("x", [0.1, 0.5, 2.0, 7.5])
@pytest.mark.parametrize("q", [-1.0, 0.0, 0.5, 0.999, 2.0, 3.0])
def test_q_logarithm_matches_quadrature(x, q):
    integral, _ = quad(lambda t: t ** (-q), 1.0, x, epsabs=1e-14, epsrel=1e-13)
    npt.assert_allclose(q_logarithm(x, q), integral, rtol=1e-11, atol=1e-13)


def test_q_logarithm_domain():
    with pytest.raises(MeasureDomainError):
        q_logarithm(0.0, 2.0)
    with pytest.raises(MeasureDomainError):
        q_logarithm(-1.0, 1.0)


def test_q_logarithm_out_of_float_range():
    with pytest.raises(MeasureDomainError):
        q_logarithm(1e300, -2.0)
    npt.assert_allclose(q_logarithm(1e-300, -2.0), -1 / 3, rtol=1e-15)


def test_subnormal_weights_stay_finite():
    h = shannon_entropy(Distribution([5e-324, 1.0]))
    assert math.isfinite(h) and 0.0 <= h < 1e-300
    # 5e-324 is 2^-1074.
    d = relative_entropy(AbsolutelyContinuousPair.of([1.0, 0.0], [5e-324, 1.0]))
    npt.assert_allclose(d, 1074 * math.log(2.0), rtol=1e-14)


def test_large_q_terms_do_not_overflow_early():
    # S_-1(p) = sum (1/p_i - p_i) / 2; here x^(1-q) alone would overflow.
    npt.assert_allclose(q_entropy(Distribution([1e-160, 1.0]), -1.0), 5e159, rtol=1e-11)
    # D_3 term p^3 r^-2 / 2 with (r / p)^-2 = 1e320 out of range.
    pair = AbsolutelyContinuousPair.of([1e-160, 1.0], [1e-320, 1.0])
    expected = math.exp(3 * math.log(1e-160) - 2 * math.log(pair.r[0])) / 2
    npt.assert_allclose(q_relative_entropy(pair, 3.0), expected, rtol=1e-11)
    with pytest.raises(MeasureDomainError) as excinfo:
        q_entropy(Distribution([1e-310, 1.0]), -1.0)
    assert excinfo.value.index == 0


def test_q_logarithm_is_continuous_across_the_unit_branch():
    for x in (0.01, 0.3, 4.0, 100.0):
        assert q_logarithm(x, 1.0 + 1e-13) == math.log(x)
        log_x = math.log(x)
        for eps in (1e-6, -1e-6, 1e-11, -1e-11):
            # ln_q(x) - ln(x) = (1 - q) (ln x)^2 / 2 + O((1 - q)^2)
            bound = abs(eps) * log_x ** 2 / 2 + eps ** 2 * abs(log_x) ** 3 + 1e-13
            assert abs(q_logarithm(x, 1.0 + eps) - log_x) <= bound
            if abs(log_x) <= 4.0:
                assert abs(q_logarithm(x, 1.0 + eps) - log_x) <= 1e-5


# --- entropies ---

@pytest.mark.parametrize("weights, expected", [
    ([1.0, 0.0], 0.0),
    ([0.5, 0.5], math.log(2.0)),
    ([0.25, 0.75], 0.5623351446188083),
])
def test_shannon_entropy_examples(weights, expected):
    npt.assert_allclose(shannon_entropy(Distribution(weights)), expected, rtol=0, atol=1e-12)


@pytest.mark.parametrize("p, r, expected", [
    ([0.3, 0.7], [0.3, 0.7], 0.0),
    ([1.0, 0.0], [0.5, 0.5], math.log(2.0)),
    ([0.5, 0.5], [0.25, 0.75], 0.14384103622589045),
])
def test_relative_entropy_examples(p, r, expected):
    npt.assert_allclose(relative_entropy(AbsolutelyContinuousPair.of(p, r)), expected, rtol=0, atol=1e-12)


def test_relative_entropy_extended():
    assert relative_entropy_extended(Distribution([1.0, 0.0]), Distribution([0.0, 1.0])) == math.inf
    npt.assert_allclose(relative_entropy_extended(Distribution([1.0, 0.0]), Distribution([0.5, 0.5])),
                        math.log(2.0), atol=1e-15)
    assert relative_entropy_extended(Distribution([0.0, 1.0]), Distribution([0.0, 1.0])) == 0.0
    with pytest.raises(ShapeMismatchError):
        relative_entropy_extended(Distribution([1.0]), Distribution([0.5, 0.5]))


@pytest.mark.parametrize("q", [-1.0, 0.0, 0.5, 2.0, 3.0])
def test_q_entropy_of_point_mass_is_zero(q):
    assert q_entropy(Distribution([1.0]), q) == 0.0
    assert q_entropy(Distribution([0.0, 1.0, 0.0]), q) == 0.0


def test_q_entropy_examples():
    npt.assert_allclose(q_entropy(Distribution([0.5, 0.5]), 2.0), 0.5, atol=1e-15)
    # q = 0 counts the support minus one.
    npt.assert_allclose(q_entropy(Distribution([0.3, 0.7]), 0.0), 1.0, atol=1e-15)
    npt.assert_allclose(q_entropy(Distribution([0.3, 0.0, 0.7]), 0.0), 1.0, atol=1e-15)


def test_q_relative_entropy_examples():
    p = Distribution([0.2, 0.3, 0.5])
    assert q_relative_entropy(AbsolutelyContinuousPair.diagonal(p), 2.5) == 0.0
    npt.assert_allclose(q_relative_entropy(AbsolutelyContinuousPair.of([0.5, 0.5], [0.25, 0.75]), 2.0),
                        1.0 / 3.0, atol=1e-15)
    npt.assert_allclose(q_relative_entropy(AbsolutelyContinuousPair.of([1.0, 0.0], [0.5, 0.5]), 2.0),
                        1.0, atol=1e-15)


def test_unit_q_reduces_to_shannon_and_kl():
    pair = AbsolutelyContinuousPair.of([0.1, 0.6, 0.3], [0.2, 0.2, 0.6])
    assert q_entropy(pair.p, 1.0) == shannon_entropy(pair.p)
    assert q_entropy(pair.p, None) == shannon_entropy(pair.p)
    assert q_relative_entropy(pair, 1.0) == relative_entropy(pair)


@settings(max_examples=200, deadline=None)
@given(pairs())
def test_relative_entropy_is_nonnegative(pair):
    assert relative_entropy(pair) >= -1e-12


@settings(max_examples=200, deadline=None)
@given(pairs(), st.integers(1, 3))
def test_zero_weights_do_not_contribute(pair, padding):
    padded = AbsolutelyContinuousPair.of(pair.p.to_list() + [0.0] * padding,
                                         pair.r.to_list() + [0.0] * padding)
    assert relative_entropy(padded) == relative_entropy(pair)
    assert shannon_entropy(padded.p) == shannon_entropy(pair.p)
    assert q_entropy(padded.p, 2.5) == q_entropy(pair.p, 2.5)
    assert q_relative_entropy(padded, 0.5) == q_relative_entropy(pair, 0.5)


@pytest.mark.parametrize("eps", [1e-6, -1e-6])
def test_q_measures_approach_shannon_and_kl(eps):
    for i in range(200):
        rng = trial_rng(11, "q-coherence", i)
        p = sample_sparse_distribution(int(rng.integers(1, 9)), 0.25, rng, Q_SAMPLE_MIX)
        pair = sample_pair(int(rng.integers(1, 6)), 0.25, rng, Q_SAMPLE_MIX)
        assert abs(q_entropy(p, 1.0 + eps) - shannon_entropy(p)) <= 1e-5
        assert abs(q_relative_entropy(pair, 1.0 + eps) - relative_entropy(pair)) <= 1e-5


def _second_order_gap(weights, logs, eps):
    """|1 - q| / 2 times the sum of p_i (log term)^2, slightly widened."""
    return 1.01 * abs(eps) / 2 * sum(w * t * t for w, t in zip(weights, logs)) + 1e-12


@pytest.mark.parametrize("eps", [1e-6, -1e-6])
def test_q_measures_near_one_are_within_the_second_order_term(eps):
    for i in range(200):
        rng = trial_rng(11, "q-coherence-unbounded", i)
        p = sample_sparse_distribution(int(rng.integers(1, 9)), 0.25, rng)
        pair = sample_pair(int(rng.integers(1, 6)), 0.25, rng)
        support = p.support
        bound = _second_order_gap([p[j] for j in support], [math.log(p[j]) for j in support], eps)
        assert abs(q_entropy(p, 1.0 + eps) - shannon_entropy(p)) <= bound
        support = pair.p.support
        bound = _second_order_gap([pair.p[j] for j in support],
                                  [math.log(pair.p[j] / pair.r[j]) for j in support], eps)
        assert abs(q_relative_entropy(pair, 1.0 + eps) - relative_entropy(pair)) <= bound


def test_measures_are_order_deterministic():
    weights = np.random.default_rng(3).exponential(size=8)
    p = Distribution.normalize(weights)
    assert shannon_entropy(p) == shannon_entropy(Distribution(p.weights))
    assert q_entropy(p, 0.5) == q_entropy(Distribution(list(p.weights)), 0.5)
