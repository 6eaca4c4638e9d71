"""Utility helpers for summation, formatting and report IO."""

import json
import logging
import math
import os
from pathlib import Path

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class KahanSummation:
    """Incremental compensated summation.

    Keeps a running sum together with the carry lost to rounding, so that
    sums taken in the same order give the same bits on every platform.
    """

    def __init__(self):
        self.sum = 0.0
        self.carry = 0.0

    def add(self, value):
        value = float(value) - self.carry
        previous_sum = self.sum
        self.sum = previous_sum + value
        # What was lost when value was folded into the sum.
        self.carry = (self.sum - previous_sum) - value
        return self

    def __float__(self):
        return self.sum


def kahan_sum(values):
    """Compensated sum of an iterable, taken in iteration order."""
    acc = KahanSummation()
    for v in values:
        acc.add(v)
    return acc.sum


def format_value(value):
    """Format a real with 15 significant digits, as printed and written to CSV."""
    return f"{value:.15g}"


def _finite_json(value):
    """Replace non-finite floats by the strings "inf", "-inf" and "nan"."""
    if isinstance(value, float) and not math.isfinite(value):
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, dict):
        return {k: _finite_json(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite_json(v) for v in value]
    return value


def dumps_json(payload):
    """Strict JSON with sorted keys; non-finite reals are written as strings."""
    return json.dumps(_finite_json(payload), indent=2, sort_keys=True, allow_nan=False)


def write_json(payload, path):
    """Write a payload as :func:`dumps_json` does, with a trailing newline."""
    path = Path(path)
    if path.parent and not path.parent.exists():
        os.makedirs(path.parent, exist_ok=True)
    with open(path, "w", newline="\n") as f:
        f.write(dumps_json(payload))
        f.write("\n")
    logger.info("Wrote %s", path)
    return path


def print_audit_summary(report):
    """Print one line per audited axiom.

    Format: ``<name>: PASS|FAIL max=<max residual> mean=<mean residual> trials=<n>``.
    """
    print(f"=== AXIOM AUDIT ({report.measure}) seed={report.seed} tol={report.tol:g} ===")
    for record in report.axioms:
        status = "PASS" if record.passed else "FAIL"
        print(f"{record.name}: {status} max={record.max_residual:.3e} "
              f"mean={record.mean_residual:.3e} trials={record.trials}")
    for name in report.not_checked:
        print(f"not checked: {name}")
