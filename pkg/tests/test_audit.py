import json
import math

import numpy.testing as npt
import pytest

from audit import (
    AxiomAuditor,
    check_chain_rule,
    check_q_chain,
    check_q_mult,
    check_q_recursivity,
    check_q_rel_mult,
    check_recursivity,
    check_symmetry,
    check_tensor_exchange,
    check_two_block,
    check_vanishing,
    default_axioms,
    index_weighted_handle,
    parse_axioms,
    q_entropy_handle,
    q_relative_entropy_handle,
    run_audit,
    sample_distribution,
    sample_pair,
    shannon_handle,
    signed_chain_gap,
    telescoped_chain_residual,
    trial_rng,
)
from audit.handles import MeasureHandle, MeasureKind, builtin_handle, zero_handle
from audit.sampling import Q_SAMPLE_MIX, sample_size
from measures import (
    AbsolutelyContinuousPair,
    Distribution,
    InfoMeasureError,
    KindMismatchError,
    MeasureDomainError,
    Permutation,
    shannon_entropy,
)
from utils.config import AuditConfig
from utils.utils import dumps_json, write_json

UNIT = AbsolutelyContinuousPair.of([1.0], [1.0])
WPAIR = AbsolutelyContinuousPair.of([0.5, 0.5], [0.25, 0.75])
PARTS = [AbsolutelyContinuousPair.of([1.0, 0.0], [0.5, 0.5]), UNIT]


def random_pair(seed, n, zero_prob=0.25):
    return sample_pair(n, zero_prob, trial_rng(seed, "fixture", n))


# --- individual checks ---

def test_symmetry_examples(kl):
    pair = random_pair(1, 5)
    assert check_symmetry(kl, pair, Permutation.identity(5)) == 0.0
    swap = Permutation.transposition(2, 0, 1)
    assert check_symmetry(q_entropy_handle(2.0), Distribution([0.2, 0.8]), swap) <= 1e-15
    npt.assert_allclose(check_symmetry(index_weighted_handle(), Distribution([0.2, 0.8]), swap), 0.6, atol=1e-12)


def test_vanishing_examples(kl, counterexample):
    p = sample_distribution(6, trial_rng(2, "fixture", 0))
    assert check_vanishing(kl, p) == 0.0
    assert check_vanishing(q_relative_entropy_handle(2.0), p) == 0.0
    npt.assert_allclose(check_vanishing(counterexample, Distribution([0.5, 0.5])), math.log(2.0), atol=1e-15)


def test_vanishing_needs_a_divergence():
    with pytest.raises(KindMismatchError):
        check_vanishing(shannon_handle(), Distribution([0.5, 0.5]))


def test_chain_rule_examples(kl, squared_kl):
    wpair = AbsolutelyContinuousPair.of([0.3, 0.7, 0.0], [0.2, 0.3, 0.5])
    trivial = [UNIT] * 3
    for m in (kl, squared_kl, index_free_divergence()):
        assert check_chain_rule(m, wpair, trivial) <= 1e-15
    assert check_chain_rule(kl, WPAIR, PARTS) <= 1e-12
    assert check_chain_rule(squared_kl, WPAIR, PARTS) > 1e-3


def index_free_divergence():
    # Vanishes on ((1) || (1)), otherwise arbitrary.
    return MeasureHandle(MeasureKind.DIVERGENCE, lambda pair: float(pair.n - 1) * pair.r[0], "arbitrary")


def test_recursivity_examples(kl):
    certain = AbsolutelyContinuousPair.of([1.0, 0.0], [1.0, 0.0])
    w = AbsolutelyContinuousPair.of([0.4, 0.6], [0.4, 0.6])
    assert check_recursivity(kl, w, certain) <= 1e-15
    for seed in range(20):
        wpair, ppair = random_pair(seed, 4), random_pair(seed + 100, 2)
        assert check_recursivity(kl, wpair, ppair) <= 1e-12
        assert check_recursivity(q_relative_entropy_handle(2.0), wpair, ppair, q=2.0) <= 1e-9


def test_recursivity_at_any_position(kl):
    wpair = AbsolutelyContinuousPair.of([0.2, 0.5, 0.3], [0.4, 0.4, 0.2])
    ppair = AbsolutelyContinuousPair.of([0.25, 0.75], [0.5, 0.5])
    for position in range(3):
        assert check_recursivity(kl, wpair, ppair, position=position) <= 1e-12
        assert check_recursivity(q_relative_entropy_handle(0.5), wpair, ppair, q=0.5, position=position) <= 1e-12


def test_two_block_examples(kl):
    certain = AbsolutelyContinuousPair.of([1.0, 0.0], [1.0, 0.0])
    ppair = random_pair(3, 3)
    assert check_two_block(kl, certain, ppair, random_pair(4, 2)) <= 1e-15
    for seed in range(20):
        w, p, r = random_pair(seed, 2), random_pair(seed + 1, 3), random_pair(seed + 2, 4)
        assert check_two_block(kl, w, p, r) <= 1e-12
        assert check_two_block(q_relative_entropy_handle(3.0), w, p, r, q=3.0) <= 1e-9


def test_q_chain_examples():
    s2 = q_entropy_handle(2.0)
    w = Distribution([0.5, 0.5])
    points = [Distribution([1.0]), Distribution([1.0])]
    assert check_q_chain(s2, 2.0, w, points) <= 1e-15
    assert check_q_chain(s2, 2.0, w, [Distribution([0.5, 0.5]), Distribution([1.0, 0.0])]) <= 1e-12
    assert check_q_chain(shannon_handle(), 2.0, w, [Distribution([0.5, 0.5]), Distribution([0.5, 0.5])]) > 1e-3


def test_q_mult_examples():
    s2 = q_entropy_handle(2.0)
    w = Distribution([0.5, 0.5])
    assert check_q_mult(s2, 2.0, w, Distribution([1.0])) <= 1e-15
    assert check_q_mult(s2, 2.0, w, Distribution([1 / 3, 2 / 3])) <= 1e-12
    assert check_q_mult(s2, 3.0, w, Distribution([1 / 3, 2 / 3])) > 1e-3


def test_q_rel_mult_examples(kl):
    d2 = q_relative_entropy_handle(2.0)
    wpair = random_pair(5, 3)
    assert check_q_rel_mult(d2, 2.0, wpair, UNIT) <= 1e-15
    assert check_q_rel_mult(d2, 2.0, wpair, random_pair(6, 4)) <= 1e-9
    assert check_q_rel_mult(kl, 2.0, WPAIR, AbsolutelyContinuousPair.of([0.5, 0.5], [0.2, 0.8])) > 1e-3


def test_q_recursivity_and_tensor_exchange(kl):
    s3 = q_entropy_handle(3.0)
    w = Distribution([0.2, 0.3, 0.5])
    a = Distribution([0.4, 0.6])
    for position in range(3):
        assert check_q_recursivity(s3, 3.0, w, a, position) <= 1e-12
    assert check_tensor_exchange(s3, w, a) <= 1e-12
    assert check_tensor_exchange(kl, WPAIR, random_pair(7, 3)) <= 1e-12
    assert check_tensor_exchange(index_weighted_handle(), w, a) > 1e-3


# --- telescoping ---

@pytest.mark.parametrize("name", ["kl", "kl^2", "p*log(1/r)", "q-kl", "arbitrary"])
def test_telescoped_chain_matches_signed_gap(name, kl, squared_kl, counterexample):
    handles = {"kl": (kl, None), "kl^2": (squared_kl, None), "p*log(1/r)": (counterexample, None),
               "q-kl": (q_relative_entropy_handle(2.0), 2.0), "arbitrary": (index_free_divergence(), None)}
    m, q = handles[name]
    for i in range(200):
        rng = trial_rng(17, "telescope", i)
        blocks = sample_size(rng, 1, 4)
        wpair = sample_pair(blocks, 0.25, rng)
        parts = [sample_pair(sample_size(rng, 1, 3), 0.25, rng) for _ in range(blocks)]
        assert abs(telescoped_chain_residual(m, wpair, parts, q) - signed_chain_gap(m, wpair, parts, q)) <= 1e-9


# --- audits ---

def test_kl_passes_the_divergence_audit(kl):
    report = run_audit(kl, trials=1000, max_n=8, tol=1e-9, seed=0)
    assert [r.name for r in report.axioms] == ["symmetry", "vanishing", "chain", "recursivity", "two-block"]
    assert report.passed
    for record in report.axioms:
        assert record.trials == 1000
        assert record.max_residual <= 1e-9


@pytest.mark.parametrize("q", [-1.0, 0.0, 0.5, 2.0, 3.0])
def test_q_measures_pass_their_audits(q):
    entropy = run_audit(q_entropy_handle(q), ["symmetry", "q-chain", "q-mult"], trials=1000, seed=0, q=q)
    assert entropy.passed, entropy.to_dict()
    divergence = run_audit(q_relative_entropy_handle(q), trials=1000, seed=0, q=q)
    assert [r.name for r in divergence.axioms] == ["symmetry", "vanishing", "chain", "recursivity",
                                                   "two-block", "q-rel-mult"]
    assert divergence.passed, divergence.to_dict()


def test_q_audits_draw_bounded_ratios():
    config = AuditConfig(trials=1, seed=0)
    assert AxiomAuditor(q_relative_entropy_handle(3.0), config, q=3.0).config.mix == Q_SAMPLE_MIX
    assert AxiomAuditor(q_relative_entropy_handle(1.0), config, q=1.0).config.mix == 0.0
    for i in range(200):
        rng = trial_rng(6, "bounded", i)
        n = sample_size(rng, 2, 8)
        pair = sample_pair(n, 0.25, rng, Q_SAMPLE_MIX)
        for j in pair.p.support:
            ratio = pair.r[j] / pair.p[j]
            assert Q_SAMPLE_MIX / n * (1 - 1e-12) <= ratio <= n / Q_SAMPLE_MIX * (1 + 1e-12)


def test_counterexample_fails_only_vanishing(counterexample):
    report = run_audit(counterexample, ["symmetry", "chain", "vanishing"], trials=500, seed=1)
    assert report.record("symmetry").passed
    assert report.record("chain").passed
    vanishing = report.record("vanishing")
    assert not vanishing.passed
    worst = vanishing.worst_instance
    npt.assert_allclose(worst["residual"], shannon_entropy(Distribution(worst["p"])), atol=1e-9)
    for i in range(500):
        p = sample_distribution(sample_size(trial_rng(1, "vanishing-sweep", i), 1, 8),
                                trial_rng(1, "vanishing-sweep", i))
        assert abs(check_vanishing(counterexample, p) - shannon_entropy(p)) <= 1e-9


def test_length_one_instances_have_zero_residuals(kl, counterexample):
    point = Distribution([1.0])
    for m in (kl, counterexample):
        assert check_symmetry(m, UNIT, Permutation.identity(1)) == 0.0
        assert check_vanishing(m, point) == 0.0
        assert check_chain_rule(m, UNIT, [UNIT]) == 0.0


def test_default_axioms_follow_kind_and_q(kl):
    assert default_axioms(shannon_handle()) == ("symmetry", "q-chain", "q-mult")
    assert default_axioms(kl) == ("symmetry", "vanishing", "chain", "recursivity", "two-block")
    assert default_axioms(q_relative_entropy_handle(2.0), 2.0)[-1] == "q-rel-mult"


def test_axiom_kind_mismatch_is_rejected():
    with pytest.raises(KindMismatchError):
        run_audit(shannon_handle(), ["vanishing"], trials=5)
    with pytest.raises(InfoMeasureError):
        parse_axioms("symmetry,measurability")
    assert parse_axioms(" chain, symmetry ,chain") == ("chain", "symmetry")


def test_audit_is_deterministic(counterexample):
    first = run_audit(counterexample, ["vanishing", "chain"], trials=100, seed=42)
    second = run_audit(counterexample, ["vanishing", "chain"], trials=100, seed=42)
    assert json.dumps(first.to_dict()) == json.dumps(second.to_dict())
    other = run_audit(counterexample, ["vanishing"], trials=100, seed=43)
    assert other.record("vanishing").worst_instance != first.record("vanishing").worst_instance


def test_threaded_audit_matches_serial(counterexample):
    serial = AxiomAuditor(counterexample, AuditConfig(trials=200, seed=9)).run(["vanishing", "symmetry"])
    threaded = AxiomAuditor(counterexample, AuditConfig(trials=200, seed=9, workers=4)).run(["vanishing", "symmetry"])
    assert serial.to_dict() == threaded.to_dict()


def test_failing_candidate_records_infinite_residual():
    def fragile(pair):
        if pair.n > 2:
            raise MeasureDomainError("undefined beyond two outcomes")
        return 0.0

    m = MeasureHandle(MeasureKind.DIVERGENCE, fragile, "fragile")
    record = run_audit(m, ["symmetry"], trials=50, seed=0).record("symmetry")
    assert record.max_residual == math.inf
    assert record.mean_residual == math.inf
    assert not record.passed
    assert "MeasureDomainError" in record.worst_instance["error"]


def test_infinite_residuals_are_written_as_strict_json(tmp_path):
    def fragile(pair):
        raise ArithmeticError("no value")

    report = run_audit(MeasureHandle(MeasureKind.DIVERGENCE, fragile, "fragile"), ["symmetry"], trials=5, seed=0)
    path = write_json(report.to_dict(), tmp_path / "report.json")

    def reject(token):
        raise ValueError(f"non-standard JSON constant {token}")

    record = json.loads(path.read_text(), parse_constant=reject)["axioms"][0]
    assert record["max_residual"] == "inf"
    assert record["mean_residual"] == "inf"
    assert record["pass"] is False


def test_json_output_sorts_keys_and_spells_out_non_finite_values():
    text = dumps_json({"b": math.inf, "a": [math.nan, -math.inf, 0.5]})
    assert text == '{\n  "a": [\n    "nan",\n    "-inf",\n    0.5\n  ],\n  "b": "inf"\n}'


def test_zero_measure_satisfies_everything():
    report = run_audit(zero_handle(), ["symmetry", "vanishing", "chain", "recursivity", "two-block",
                                       "tensor-exchange"], trials=50, seed=0)
    assert all(record.max_residual == 0.0 for record in report.axioms)


def test_report_schema(kl):
    payload = run_audit(kl, ["symmetry"], trials=10, seed=3).to_dict()
    assert set(payload) == {"measure", "seed", "tol", "axioms", "not_checked"}
    assert payload["not_checked"] == ["measurability"]
    record = payload["axioms"][0]
    assert set(record) == {"name", "trials", "max_residual", "mean_residual", "worst_instance", "pass"}
    assert set(record["worst_instance"]) >= {"instance", "sigma", "trial", "residual"}
    json.dumps(payload)


def test_builtin_handles():
    assert builtin_handle("KL").kind is MeasureKind.DIVERGENCE
    assert builtin_handle("q-entropy", 2.0)(Distribution([0.5, 0.5])) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(KindMismatchError):
        builtin_handle("q-kl")
    assert shannon_handle().scaled(2.0)(Distribution([0.5, 0.5])) == pytest.approx(2 * math.log(2.0), abs=1e-15)
