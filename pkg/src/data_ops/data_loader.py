"""Loading of distribution files and expression sources."""

import json
import logging
from pathlib import Path
from typing import Optional

from measures.distribution import AbsolutelyContinuousPair, Distribution, first_continuity_violation
from measures.errors import DistributionError, InfoMeasureError

logger = logging.getLogger(__name__)


def _weights(payload, key: str, path: Path):
    values = payload.get(key)
    if not isinstance(values, list) or not values:
        raise DistributionError(f"{path}: '{key}' must be a nonempty array of numbers")
    weights = []
    for i, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise DistributionError(f"{path}: '{key}' entry at index {i} is not a number ({v!r})", index=i)
        try:
            weights.append(float(v))
        except OverflowError:
            raise DistributionError(f"{path}: '{key}' entry at index {i} is out of float range", index=i)
    return weights


class DataLoader:
    """Load a JSON distribution file ``{"p": [...], "r": [...]}``; r is optional.

    Both arrays are validated as distributions on load and, when r is
    present, the pair is validated for absolute continuity. The raw weights
    stay available for the infinite-divergence diagnostic.
    """
    input_path: Path

    def __init__(self, input_path):
        self.input_path = Path(input_path)
        self.p_weights = None
        self.r_weights = None
        self._load_dataset()

    def _load_dataset(self):
        try:
            with open(self.input_path, "r") as f:
                payload = json.load(f)
        except OSError as e:
            raise InfoMeasureError(f"cannot read {self.input_path}: {e.strerror or e}")
        except json.JSONDecodeError as e:
            raise InfoMeasureError(f"{self.input_path}: invalid JSON ({e.msg} at line {e.lineno})")
        if not isinstance(payload, dict):
            raise InfoMeasureError(f"{self.input_path}: expected a JSON object with key 'p'")
        self.p_weights = _weights(payload, "p", self.input_path)
        if "r" in payload:
            self.r_weights = _weights(payload, "r", self.input_path)
        logger.debug("Loaded %s (n=%d, r %s)", self.input_path, len(self.p_weights),
                     "present" if self.has_r else "absent")

    @property
    def has_r(self) -> bool:
        return self.r_weights is not None

    @property
    def p(self) -> Distribution:
        return Distribution(self.p_weights)

    @property
    def r(self) -> Optional[Distribution]:
        if self.r_weights is None:
            return None
        if len(self.r_weights) != len(self.p_weights):
            raise DistributionError(f"{self.input_path}: 'p' has length {len(self.p_weights)} "
                                    f"but 'r' has length {len(self.r_weights)}")
        return Distribution(self.r_weights)

    @property
    def pair(self) -> AbsolutelyContinuousPair:
        return AbsolutelyContinuousPair(self.p, self.pair_r())

    def infinite_index(self) -> Optional[int]:
        """First index with p_i > 0 and r_i = 0, when both arrays are valid distributions."""
        return first_continuity_violation(self.p, self.pair_r())

    def pair_r(self) -> Distribution:
        if not self.has_r:
            raise DistributionError(f"{self.input_path}: divergence measures need an 'r' array")
        return self.r


def load_expression(source: Optional[str] = None, path=None) -> str:
    """Expression text from a flag value or from a file (surrounding whitespace removed)."""
    if path is not None:
        try:
            with open(path, "r") as f:
                return f.read().strip()
        except OSError as e:
            raise InfoMeasureError(f"cannot read expression file {path}: {e.strerror or e}")
    if source is None:
        raise InfoMeasureError("no expression given")
    return source
