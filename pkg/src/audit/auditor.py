"""Randomized axiom audits of a candidate measure."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Tuple

from tqdm import tqdm

from measures.composition import Permutation
from measures.distribution import as_q
from measures.errors import InfoMeasureError, KindMismatchError
from utils.config import AuditConfig
from utils.utils import kahan_sum
from . import checks
from .handles import MeasureHandle, MeasureKind
from .report import AuditInstance, AuditReport, AxiomRecord
from .sampling import Q_SAMPLE_MIX, sample_pair, sample_size, sample_sparse_distribution, trial_rng

logger = logging.getLogger(__name__)

ENTROPY = (MeasureKind.ENTROPY,)
DIVERGENCE = (MeasureKind.DIVERGENCE,)
BOTH = (MeasureKind.ENTROPY, MeasureKind.DIVERGENCE)


@dataclass(frozen=True)
class Axiom:
    """How to draw instances of one identity and how to measure its residual."""
    name: str
    kinds: Tuple[MeasureKind, ...]
    sample: Callable
    residual: Callable


def _sample_point(kind, n, cfg, rng):
    if kind is MeasureKind.ENTROPY:
        return sample_sparse_distribution(n, cfg.zero_prob, rng, cfg.mix)
    return sample_pair(n, cfg.zero_prob, rng, cfg.mix)


def _sample_symmetry(kind, cfg, rng):
    n = sample_size(rng, 1, cfg.max_n)
    return {"instance": _sample_point(kind, n, cfg, rng),
            "sigma": Permutation(tuple(int(i) for i in rng.permutation(n)))}


def _sample_vanishing(kind, cfg, rng):
    n = sample_size(rng, 1, cfg.max_n)
    return {"p": sample_sparse_distribution(n, cfg.zero_prob, rng, cfg.mix)}


def _block_sizes(cfg, rng):
    blocks = sample_size(rng, 1, min(cfg.max_blocks, cfg.max_n))
    per_block = max(1, cfg.max_n // blocks)
    return blocks, [sample_size(rng, 1, per_block) for _ in range(blocks)]


def _sample_chain(kind, cfg, rng):
    blocks, sizes = _block_sizes(cfg, rng)
    return {"wpair": sample_pair(blocks, cfg.zero_prob, rng, cfg.mix),
            "partpairs": [sample_pair(k, cfg.zero_prob, rng, cfg.mix) for k in sizes]}


def _sample_recursivity(kind, cfg, rng):
    n = sample_size(rng, 1, cfg.max_n - 1)
    return {"wpair": sample_pair(n, cfg.zero_prob, rng, cfg.mix),
            "ppair": sample_pair(2, cfg.zero_prob, rng, cfg.mix)}


def _sample_two_block(kind, cfg, rng):
    k = sample_size(rng, 1, cfg.max_n - 1)
    l = sample_size(rng, 1, cfg.max_n - k)
    return {"wpair": sample_pair(2, cfg.zero_prob, rng, cfg.mix),
            "ppair": sample_pair(k, cfg.zero_prob, rng, cfg.mix),
            "rpair": sample_pair(l, cfg.zero_prob, rng, cfg.mix)}


def _sample_q_chain(kind, cfg, rng):
    blocks, sizes = _block_sizes(cfg, rng)
    return {"w": sample_sparse_distribution(blocks, cfg.zero_prob, rng, cfg.mix),
            "parts": [sample_sparse_distribution(k, cfg.zero_prob, rng, cfg.mix) for k in sizes]}


def _sample_q_mult(kind, cfg, rng):
    n = sample_size(rng, 1, cfg.max_n)
    k = sample_size(rng, 1, cfg.max_n)
    return {"w": sample_sparse_distribution(n, cfg.zero_prob, rng, cfg.mix),
            "p": sample_sparse_distribution(k, cfg.zero_prob, rng, cfg.mix)}


def _sample_q_recursivity(kind, cfg, rng):
    n = sample_size(rng, 1, cfg.max_n - 1)
    return {"w": sample_sparse_distribution(n, cfg.zero_prob, rng, cfg.mix),
            "a": sample_sparse_distribution(2, cfg.zero_prob, rng, cfg.mix)}


def _sample_q_rel_mult(kind, cfg, rng):
    n = sample_size(rng, 1, cfg.max_n)
    k = sample_size(rng, 1, cfg.max_n)
    return {"wpair": sample_pair(n, cfg.zero_prob, rng, cfg.mix),
            "ppair": sample_pair(k, cfg.zero_prob, rng, cfg.mix)}


def _sample_tensor_exchange(kind, cfg, rng):
    n = sample_size(rng, 1, cfg.max_n)
    k = sample_size(rng, 1, cfg.max_n)
    return {"x": _sample_point(kind, n, cfg, rng), "y": _sample_point(kind, k, cfg, rng)}


AXIOMS = {
    "symmetry": Axiom("symmetry", BOTH, _sample_symmetry,
                      lambda m, a, q: checks.check_symmetry(m, a["instance"], a["sigma"])),
    "vanishing": Axiom("vanishing", DIVERGENCE, _sample_vanishing,
                       lambda m, a, q: checks.check_vanishing(m, a["p"])),
    "chain": Axiom("chain", DIVERGENCE, _sample_chain,
                   lambda m, a, q: checks.check_chain_rule(m, a["wpair"], a["partpairs"], q)),
    "recursivity": Axiom("recursivity", DIVERGENCE, _sample_recursivity,
                         lambda m, a, q: checks.check_recursivity(m, a["wpair"], a["ppair"], q)),
    "two-block": Axiom("two-block", DIVERGENCE, _sample_two_block,
                       lambda m, a, q: checks.check_two_block(m, a["wpair"], a["ppair"], a["rpair"], q)),
    "q-chain": Axiom("q-chain", ENTROPY, _sample_q_chain,
                     lambda m, a, q: checks.check_q_chain(m, q, a["w"], a["parts"])),
    "q-mult": Axiom("q-mult", ENTROPY, _sample_q_mult,
                    lambda m, a, q: checks.check_q_mult(m, q, a["w"], a["p"])),
    "q-recursivity": Axiom("q-recursivity", ENTROPY, _sample_q_recursivity,
                           lambda m, a, q: checks.check_q_recursivity(m, q, a["w"], a["a"])),
    "q-rel-mult": Axiom("q-rel-mult", DIVERGENCE, _sample_q_rel_mult,
                        lambda m, a, q: checks.check_q_rel_mult(m, q, a["wpair"], a["ppair"])),
    "tensor-exchange": Axiom("tensor-exchange", BOTH, _sample_tensor_exchange,
                             lambda m, a, q: checks.check_tensor_exchange(m, a["x"], a["y"])),
}


def default_axioms(m: MeasureHandle, q=None) -> Tuple[str, ...]:
    """Axioms audited when none are requested."""
    if m.is_entropy:
        return ("symmetry", "q-chain", "q-mult")
    if as_q(q).is_unit:
        return ("symmetry", "vanishing", "chain", "recursivity", "two-block")
    return ("symmetry", "vanishing", "chain", "recursivity", "two-block", "q-rel-mult")


def parse_axioms(names) -> Tuple[str, ...]:
    """Accept a comma-separated string or an iterable of axiom names."""
    if isinstance(names, str):
        names = names.split(",")
    parsed = tuple(dict.fromkeys(n.strip().lower() for n in names if n.strip()))
    for name in parsed:
        if name not in AXIOMS:
            raise InfoMeasureError(f"unknown axiom {name!r}; expected one of {', '.join(AXIOMS)}")
    return parsed


class AxiomAuditor:
    """Runs the requested axioms of one measure over seeded random instances."""

    def __init__(self, measure: MeasureHandle, config: AuditConfig, q=None):
        self.measure = measure
        self.q = as_q(q) if q is not None else None
        if self.q is not None and not self.q.is_unit and config.mix == 0.0:
            config = config.replace(mix=Q_SAMPLE_MIX)
        self.config = config.validate()

    def _trial(self, axiom: Axiom, i: int):
        rng = trial_rng(self.config.seed, axiom.name, i)
        instance = AuditInstance(axiom.name, axiom.sample(self.measure.kind, self.config, rng))
        error = None
        try:
            residual = float(axiom.residual(self.measure, instance.members, self.q))
        except (ValueError, ArithmeticError) as e:
            if isinstance(e, KindMismatchError):
                raise
            residual, error = math.inf, f"{type(e).__name__}: {e}"
            logger.warning("%s on %s, trial %d: %s", self.measure.label, axiom.name, i, error)
        if math.isnan(residual):
            residual = math.inf
        return residual, instance, error

    def audit_axiom(self, name: str) -> AxiomRecord:
        axiom = AXIOMS[name]
        if self.measure.kind not in axiom.kinds:
            raise KindMismatchError(f"axiom {name!r} does not apply to the "
                                    f"{self.measure.kind.value}-type measure {self.measure.label!r}")
        trials = range(self.config.trials)
        progress = dict(desc=name, total=self.config.trials, disable=not self.config.progress, leave=False)
        if self.config.workers > 1:
            with ThreadPoolExecutor(max_workers=self.config.workers) as pool:
                results = list(tqdm(pool.map(lambda i: self._trial(axiom, i), trials), **progress))
        else:
            results = [self._trial(axiom, i) for i in tqdm(trials, **progress)]

        # Earliest trial wins ties, so the worst instance does not depend on scheduling.
        worst_index = 0
        for i, (residual, _, _) in enumerate(results):
            if residual > results[worst_index][0]:
                worst_index = i
        residuals = [r for r, _, _ in results]
        max_residual = results[worst_index][0]
        mean_residual = math.inf if math.isinf(max_residual) else kahan_sum(residuals) / len(residuals)
        worst = results[worst_index][1].to_dict()
        worst["trial"] = worst_index
        worst["residual"] = max_residual
        if results[worst_index][2] is not None:
            worst["error"] = results[worst_index][2]
        record = AxiomRecord(name=name, trials=len(results), max_residual=max_residual,
                             mean_residual=mean_residual, worst_instance=worst,
                             passed=max_residual <= self.config.tol)
        logger.info("%s: %s trials=%d max=%.3e", self.measure.label, name, record.trials, max_residual)
        return record

    def run(self, axioms: Optional[Iterable[str]] = None) -> AuditReport:
        names = parse_axioms(axioms) if axioms else default_axioms(self.measure, self.q)
        for name in names:
            if self.measure.kind not in AXIOMS[name].kinds:
                raise KindMismatchError(f"axiom {name!r} does not apply to the "
                                        f"{self.measure.kind.value}-type measure {self.measure.label!r}")
        report = AuditReport(measure=self.measure.label, seed=self.config.seed, tol=self.config.tol)
        for name in names:
            report.axioms.append(self.audit_axiom(name))
        return report


def run_audit(m: MeasureHandle, axioms=None, trials: int = 1000, max_n: int = 8, tol: float = 1e-9,
              seed: int = 0, q=None, **options) -> AuditReport:
    """Audit ``m`` on ``trials`` seeded instances per axiom; see :class:`AxiomAuditor`."""
    config = AuditConfig(trials=trials, max_n=max_n, tol=tol, seed=seed, **options)
    return AxiomAuditor(m, config, q=q).run(axioms)
