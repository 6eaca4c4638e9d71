"""Audit instances and reports, with their stable JSON form."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

from measures.composition import Permutation
from measures.distribution import AbsolutelyContinuousPair, Distribution, QParameter

NOT_CHECKED = ("measurability",)


def to_jsonable(value: Any) -> Any:
    """Convert the members of an audit instance into plain JSON values."""
    if isinstance(value, Distribution):
        return value.to_list()
    if isinstance(value, AbsolutelyContinuousPair):
        return value.to_dict()
    if isinstance(value, Permutation):
        return list(value.mapping)
    if isinstance(value, QParameter):
        return value.q
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, float):
        return value
    if hasattr(value, "item"):
        return value.item()
    return value


@dataclass
class AuditInstance:
    """The arguments one check consumes, keyed by parameter name."""
    axiom: str
    members: Dict[str, Any]

    def to_dict(self) -> Dict[str, Any]:
        return {k: to_jsonable(v) for k, v in self.members.items()}


@dataclass
class AxiomRecord:
    name: str
    trials: int
    max_residual: float
    mean_residual: float
    worst_instance: Dict[str, Any]
    passed: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "trials": self.trials,
            "max_residual": self.max_residual,
            "mean_residual": self.mean_residual,
            "worst_instance": self.worst_instance,
            "pass": self.passed,
        }


@dataclass
class AuditReport:
    measure: str
    seed: int
    tol: float
    axioms: List[AxiomRecord] = field(default_factory=list)
    not_checked: Tuple[str, ...] = NOT_CHECKED

    @property
    def passed(self) -> bool:
        return all(record.passed for record in self.axioms)

    def record(self, name: str) -> AxiomRecord:
        for record in self.axioms:
            if record.name == name:
                return record
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "measure": self.measure,
            "seed": self.seed,
            "tol": self.tol,
            "axioms": [record.to_dict() for record in self.axioms],
            "not_checked": list(self.not_checked),
        }
