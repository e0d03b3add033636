"""
Estimator Configuration

Centralized configuration for the FisherS and k-nearest-neighbor estimators.
Every field that influences an estimate is serialized into reports via ``to_dict``.
"""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np

from ..errors import ConfigError


def default_alpha_grid() -> Tuple[float, ...]:
    """0.60, 0.62, ..., 0.98"""
    return tuple(float(a) for a in np.round(0.60 + 0.02 * np.arange(20), 2))


def parse_alpha_grid(text: str) -> Tuple[float, ...]:
    """Parse ``a:b:step`` into an inclusive, strictly increasing grid."""
    try:
        start, stop, step = (float(part) for part in text.split(":"))
    except ValueError as exc:
        raise ConfigError(f"alpha grid must look like a:b:step, got {text!r}") from exc
    if step <= 0 or stop < start:
        raise ConfigError(f"alpha grid {text!r} must have step > 0 and b >= a")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return tuple(float(v) for v in np.round(start + step * np.arange(count), 10))


@dataclass
class FisherSConfig:
    """Configuration for the Fisher separability estimator"""

    # Eigenvalue-ratio cutoff for major principal components
    conditional_number: float = 10.0
    alpha_grid: Tuple[float, ...] = field(default_factory=default_alpha_grid)
    # α* is the valid α closest to selection_factor * max(valid α)
    selection_factor: float = 0.9
    min_samples: int = 10
    dedupe: bool = False

    def __post_init__(self):
        self.alpha_grid = tuple(float(a) for a in self.alpha_grid)
        errors = self.validate()
        if errors:
            raise ConfigError("; ".join(errors), stage="config")

    @classmethod
    def default(cls) -> "FisherSConfig":
        return cls()

    def validate(self) -> List[str]:
        errors = []
        if not self.conditional_number > 1:
            errors.append("conditional_number must be > 1")
        if not self.alpha_grid:
            errors.append("alpha_grid must not be empty")
        elif any(not 0 < a < 1 for a in self.alpha_grid):
            errors.append("alpha_grid values must lie in (0, 1)")
        elif any(b <= a for a, b in zip(self.alpha_grid, self.alpha_grid[1:])):
            errors.append("alpha_grid must be strictly increasing")
        if not 0 < self.selection_factor <= 1:
            errors.append("selection_factor must be in (0, 1]")
        if self.min_samples < 2:
            errors.append("min_samples must be >= 2")
        return errors

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["alpha_grid"] = list(self.alpha_grid)
        return data


TLE_AGGREGATIONS = ("harmonic", "mean", "median")


@dataclass
class KnnConfig:
    """Configuration for the MLE and TLE nearest-neighbor estimators"""

    k: int = 20
    metric: str = "euclidean"
    # MacKay-Ghahramani: average inverse estimates before inverting
    apply_correction: bool = True
    # relative to the neighborhood radius
    tle_epsilon: float = 1e-4
    tle_aggregation: str = "harmonic"

    def __post_init__(self):
        errors = self.validate()
        if errors:
            raise ConfigError("; ".join(errors), stage="config")

    @classmethod
    def default(cls) -> "KnnConfig":
        return cls()

    @property
    def min_samples(self) -> int:
        return self.k + 1

    def validate(self) -> List[str]:
        errors = []
        if self.k < 2:
            errors.append("k must be >= 2")
        if self.metric != "euclidean":
            errors.append("only the euclidean metric is supported")
        if not self.tle_epsilon > 0:
            errors.append("tle_epsilon must be > 0")
        if self.tle_aggregation not in TLE_AGGREGATIONS:
            errors.append(f"tle_aggregation must be one of {', '.join(TLE_AGGREGATIONS)}")
        return errors

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
