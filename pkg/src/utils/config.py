"""Run configuration for audits and characterizations."""

import os
from dataclasses import dataclass, field
from typing import Optional

from measures.errors import InfoMeasureError

SEED_ENV_VAR = "INFOMEASURE_SEED"


def default_seed() -> int:
    """Seed from the INFOMEASURE_SEED environment variable, or 0."""
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None or raw.strip() == "":
        return 0
    try:
        seed = int(raw)
    except ValueError:
        raise InfoMeasureError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}")
    if seed < 0:
        raise InfoMeasureError(f"{SEED_ENV_VAR} must be nonnegative, got {seed}")
    return seed


@dataclass
class AuditConfig:
    """Sampling and acceptance settings shared by audits and scaling checks."""
    trials: int = 1000
    max_n: int = 8
    max_blocks: int = 4
    tol: float = 1e-9
    seed: int = field(default_factory=default_seed)
    zero_prob: float = 0.25
    # Weight of the uniform blend in sampled points; see audit.sampling.
    mix: float = 0.0
    workers: int = 1
    progress: bool = False

    def validate(self) -> "AuditConfig":
        if self.trials < 1:
            raise InfoMeasureError(f"trials must be >= 1, got {self.trials}")
        if self.max_n < 2:
            raise InfoMeasureError(f"max-n must be >= 2, got {self.max_n}")
        if self.max_blocks < 1:
            raise InfoMeasureError(f"max-blocks must be >= 1, got {self.max_blocks}")
        if not 0.0 <= self.zero_prob < 1.0:
            raise InfoMeasureError(f"zero-pattern probability must lie in [0, 1), got {self.zero_prob}")
        if not 0.0 <= self.mix < 1.0:
            raise InfoMeasureError(f"uniform blend weight must lie in [0, 1), got {self.mix}")
        if not self.tol >= 0.0:
            raise InfoMeasureError(f"tolerance must be >= 0, got {self.tol}")
        if self.seed < 0:
            raise InfoMeasureError(f"seed must be nonnegative, got {self.seed}")
        if self.workers < 1:
            raise InfoMeasureError(f"workers must be >= 1, got {self.workers}")
        return self

    def replace(self, **changes: Optional[object]) -> "AuditConfig":
        """Copy with the given fields overridden; None values are ignored."""
        values = dict(self.__dict__)
        values.update({k: v for k, v in changes.items() if v is not None})
        return AuditConfig(**values)
