"""Orchestration of the compute, audit, characterize and profile commands."""

import logging
import math
import sys
from pathlib import Path
from typing import Optional

import numpy as np
import pandas as pd

from audit.auditor import AxiomAuditor, parse_axioms
from audit.handles import BUILTIN_MEASURES, MeasureHandle, MeasureKind, builtin_handle, zero_handle
from characterization.characterization import characterize
from data_ops.data_loader import DataLoader, load_expression
from dsl.evaluator import as_measure, infer_kind
from dsl.parser import parse
from measures.core import q_entropy, q_relative_entropy, relative_entropy_extended, shannon_entropy
from measures.distribution import QParameter
from measures.errors import InfoMeasureError, KindMismatchError
from utils.config import AuditConfig
from utils.utils import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, dumps_json, format_value, print_audit_summary, write_json

logger = logging.getLogger(__name__)

METHOD_KINDS = {"fit": MeasureKind.DIVERGENCE, "thm2": MeasureKind.ENTROPY, "thm3": MeasureKind.DIVERGENCE}


class Runner:
    """Coordinates one CLI command from loaded inputs to printed output and exit code.

    Responsibilities:
    - Resolve built-in or expression-backed measures
    - Load and validate distribution files
    - Run audits and characterizations with the configured seed
    - Write reports and profiles
    """

    def __init__(self, config: Optional[AuditConfig] = None):
        self.config = config or AuditConfig()

    def resolve_measure(self, name=None, dsl=None, dsl_file=None, kind=None, q=None) -> MeasureHandle:
        """A handle for a built-in name or for an expression given inline or in a file."""
        if dsl is not None or dsl_file is not None:
            expr = parse(load_expression(dsl, dsl_file))
            resolved = MeasureKind.parse(kind) if kind is not None else infer_kind(expr)
            return as_measure(expr, resolved, q)
        if name is None:
            raise InfoMeasureError(f"give a measure name ({', '.join(BUILTIN_MEASURES)}) or --dsl")
        if name.lower() == "zero":
            return zero_handle(kind or MeasureKind.DIVERGENCE)
        handle = builtin_handle(name, q)
        if kind is not None and MeasureKind.parse(kind) is not handle.kind:
            raise KindMismatchError(f"measure {name!r} is {handle.kind.value}-type, not {kind}")
        return handle

    def compute(self, measure: str, input_path, q=None) -> int:
        measure = measure.lower()
        if measure not in BUILTIN_MEASURES:
            raise InfoMeasureError(f"unknown measure {measure!r}; expected one of {', '.join(BUILTIN_MEASURES)}")
        if measure.startswith("q-") and q is None:
            raise InfoMeasureError(f"measure {measure!r} needs --q")
        data = DataLoader(input_path)
        if measure == "shannon":
            value = shannon_entropy(data.p)
        elif measure == "q-entropy":
            value = q_entropy(data.p, QParameter(q))
        elif measure == "kl":
            value = relative_entropy_extended(data.p, data.pair_r())
            if math.isinf(value):
                index = data.infinite_index()
                print(f"infinite: p_i>0, r_i=0 at index {index}", file=sys.stderr)
                return EXIT_USAGE
        else:
            value = q_relative_entropy(data.pair, QParameter(q))
        print(format_value(value))
        return EXIT_OK

    def audit(self, handle: MeasureHandle, axioms=None, q=None, report_path=None) -> int:
        names = parse_axioms(axioms) if axioms else None
        report = AxiomAuditor(handle, self.config, q=q).run(names)
        if report_path is not None:
            write_json(report.to_dict(), report_path)
        print_audit_summary(report)
        return EXIT_OK if report.passed else EXIT_FAILURE

    def characterize(self, handle: MeasureHandle, method: str, q=None, trials: Optional[int] = None) -> int:
        result = characterize(handle, method, q=q,
                              trials=trials if trials is not None else self.config.trials,
                              seed=self.config.seed, max_n=self.config.max_n,
                              zero_prob=self.config.zero_prob)
        print(dumps_json(result.to_dict()))
        return EXIT_OK if result.max_residual <= self.config.tol else EXIT_FAILURE

    def profile(self, input_path, q_from: float, q_to: float, steps: int, out_path=None) -> int:
        if steps < 2:
            raise InfoMeasureError(f"--steps must be >= 2, got {steps}")
        if not q_from < q_to:
            raise InfoMeasureError(f"--q-from must be smaller than --q-to, got {q_from} and {q_to}")
        data = DataLoader(input_path)
        qs = np.linspace(q_from, q_to, steps)
        if data.has_r:
            pair = data.pair
            values = [q_relative_entropy(pair, QParameter(q)) for q in qs]
        else:
            p = data.p
            values = [q_entropy(p, QParameter(q)) for q in qs]
        table = pd.DataFrame({"q": qs, "value": values})
        text = table.to_csv(index=False, float_format="%.15g", lineterminator="\n")
        if out_path is None:
            sys.stdout.write(text)
        else:
            path = Path(out_path)
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w", newline="") as f:
                f.write(text)
            logger.info("Wrote %d profile rows to %s", len(table), path)
        return EXIT_OK
