import json

import numpy as np
import pytest

from audit.handles import MeasureHandle, MeasureKind, relative_entropy_handle
from dsl.evaluator import as_measure
from measures.core import relative_entropy


@pytest.fixture
def kl():
    return relative_entropy_handle()


@pytest.fixture
def counterexample():
    """sum p_i log(1/r_i): symmetric and chain-additive, but m(p || p) = H(p)."""
    return as_measure("p*log(1/r)", MeasureKind.DIVERGENCE)


@pytest.fixture
def squared_kl():
    return MeasureHandle(MeasureKind.DIVERGENCE, lambda pair: relative_entropy(pair) ** 2, "kl^2")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def distribution_file(tmp_path):
    """Write {"p": ..., "r": ...} to a fresh file and return its path."""
    counter = iter(range(1000))

    def write(p, r=None):
        payload = {"p": p} if r is None else {"p": p, "r": r}
        path = tmp_path / f"input_{next(counter)}.json"
        path.write_text(json.dumps(payload))
        return path

    return write
