"""Numerical tolerances used throughout the engine."""
from dataclasses import dataclass, fields, replace, asdict
from typing import Dict, Optional

from domain.core.errors import ScheduleError


# problem-file option key -> Tolerances field
OPTION_KEYS: Dict[str, str] = {
    "tol_membership": "membership",
    "tol_strict": "strict",
    "tol_stationarity": "stationarity",
    "tol_slackness": "slackness",
    "tol_ray_activity": "ray_activity",
    "margin": "margin",
}


@dataclass(frozen=True)
class Tolerances:
    """Single set of knobs controlling every comparison against zero.

    Attributes:
        membership: slack allowed in ``h·x >= 0`` cone membership tests
        strict: threshold for strict ``h·x > 0`` interior tests
        stationarity: max allowed ``‖λ∇f + μ∇g‖∞`` of a certificate
        slackness: max allowed ``|μ·g(x̄)|`` of a certificate
        ray_activity: a polar ray q is active at x̄ when ``q·g(x̄) >= -ray_activity``
        margin: δ separating strict positivity from roundoff in sufficiency checks
    """

    membership: float = 1e-9
    strict: float = 1e-9
    stationarity: float = 1e-8
    slackness: float = 1e-8
    ray_activity: float = 1e-9
    margin: float = 1e-4

    def __post_init__(self):
        for field in fields(self):
            value = getattr(self, field.name)
            if not value >= 0.0 or value == float("inf"):
                raise ScheduleError(f"tolerance '{field.name}' must be a finite non-negative number, got {value}")

    def merged(self, **overrides: Optional[float]) -> "Tolerances":
        """Return a copy with every non-``None`` override applied."""
        changes = {key: float(value) for key, value in overrides.items() if value is not None}
        return replace(self, **changes) if changes else self

    def merged_options(self, options: Dict[str, float]) -> "Tolerances":
        """Apply problem-file ``options`` (keys as in :data:`OPTION_KEYS`)."""
        return self.merged(**{OPTION_KEYS[key]: value for key, value in options.items()})

    def to_options(self) -> Dict[str, float]:
        """Inverse of :meth:`merged_options`."""
        values = asdict(self)
        return {key: values[name] for key, name in OPTION_KEYS.items()}

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


DEFAULT_TOLERANCES = Tolerances()
