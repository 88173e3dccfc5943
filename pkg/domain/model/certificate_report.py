"""Report model shared by every command."""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from domain.core.errors import NumericalOverflowError

SCHEMA_VERSION = 1
TOOL_VERSION = "1.0.0"
META_FIELDS = ("tool_version", "wall_time")
SECTION_FIELDS = (
    "first_order", "critical_cone", "second_order", "sufficiency",
    "isolation", "oracle", "derivative", "polar",
)


def _check_finite(value: Any, path: str):
    if isinstance(value, float) and not math.isfinite(value):
        raise NumericalOverflowError(f"report field {path} is not finite ({value})")
    if isinstance(value, dict):
        for key, item in value.items():
            _check_finite(item, f"{path}.{key}")
    elif isinstance(value, (list, tuple)):
        for index, item in enumerate(value):
            _check_finite(item, f"{path}[{index}]")


@dataclass
class CertificateReport:
    """Everything computed for one invocation, in JSON-ready form.

    Section fields hold plain dictionaries produced by the domain objects'
    ``to_dict`` methods and stay ``None`` when a command does not compute them.
    """

    command: str
    candidate: Optional[List[float]] = None
    feasible: Optional[bool] = None
    verdict: Optional[str] = None
    problem_digest: Optional[str] = None
    first_order: Optional[Dict[str, Any]] = None
    critical_cone: Optional[Dict[str, Any]] = None
    second_order: Optional[Dict[str, Any]] = None
    sufficiency: Optional[Dict[str, Any]] = None
    isolation: Optional[Dict[str, Any]] = None
    oracle: Optional[Dict[str, Any]] = None
    derivative: Optional[Dict[str, Any]] = None
    polar: Optional[Dict[str, Any]] = None
    flags: List[str] = field(default_factory=list)
    tolerances: Dict[str, float] = field(default_factory=dict)
    seed: Optional[int] = None
    tool_version: str = TOOL_VERSION
    wall_time: Optional[float] = None
    schema: int = SCHEMA_VERSION

    def to_dict(self, include_meta: bool = True) -> Dict[str, Any]:
        """Serialisable form; ``include_meta=False`` drops version and timing.

        Raises:
            NumericalOverflowError: a numeric field is NaN or infinite
        """
        data: Dict[str, Any] = {
            "schema": self.schema,
            "command": self.command,
            "candidate": self.candidate,
            "feasible": self.feasible,
            "verdict": self.verdict,
            "problem_digest": self.problem_digest,
            "flags": list(self.flags),
            "tolerances": dict(self.tolerances),
            "seed": self.seed,
        }
        for name in SECTION_FIELDS:
            value = getattr(self, name)
            if value is not None:
                data[name] = value
        if include_meta:
            data["tool_version"] = self.tool_version
            data["wall_time"] = self.wall_time
        _check_finite(data, "report")
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CertificateReport":
        known = {name: data[name] for name in cls.__dataclass_fields__ if name in data}
        return cls(**known)
