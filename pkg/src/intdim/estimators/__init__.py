"""
Estimator registry.

An ``EstimatorSpec`` pairs an estimator name with its configuration; it is the
"estimator selector" handed to class-wise estimation and echoed into reports.
"""

from dataclasses import dataclass
from typing import Any, Callable, Dict, Tuple, Union

import numpy as np

from ..config import FisherSConfig, KnnConfig
from ..errors import ConfigError
from ..models import IdEstimate
from .fishers import estimate_fishers
from .knn import estimate_mle, estimate_tle, knn_distances

EstimatorConfig = Union[FisherSConfig, KnnConfig]

_REGISTRY: Dict[str, Tuple[Callable[..., IdEstimate], type]] = {
    "fishers": (estimate_fishers, FisherSConfig),
    "mle": (estimate_mle, KnnConfig),
    "tle": (estimate_tle, KnnConfig),
}


def available_estimators() -> Tuple[str, ...]:
    return tuple(_REGISTRY)


@dataclass
class EstimatorSpec:
    name: str
    config: EstimatorConfig

    def __post_init__(self):
        if self.name not in _REGISTRY:
            raise ConfigError(
                f"unknown estimator {self.name!r}; choose from {', '.join(_REGISTRY)}"
            )
        expected = _REGISTRY[self.name][1]
        if not isinstance(self.config, expected):
            raise ConfigError(f"estimator {self.name!r} expects a {expected.__name__}")

    @classmethod
    def default(cls, name: str) -> "EstimatorSpec":
        if name not in _REGISTRY:
            raise ConfigError(f"unknown estimator {name!r}; choose from {', '.join(_REGISTRY)}")
        return cls(name=name, config=_REGISTRY[name][1]())

    @property
    def min_samples(self) -> int:
        return self.config.min_samples

    def estimate(self, data: np.ndarray) -> IdEstimate:
        func = _REGISTRY[self.name][0]
        return func(data, self.config)

    def tag(self) -> Dict[str, Any]:
        return {"name": self.name, "config": self.config.to_dict()}

    @classmethod
    def from_tag(cls, tag: Dict[str, Any]) -> "EstimatorSpec":
        name = tag["name"]
        if name not in _REGISTRY:
            raise ConfigError(f"unknown estimator {name!r}")
        config_cls = _REGISTRY[name][1]
        return cls(name=name, config=config_cls(**tag["config"]))


__all__ = [
    'EstimatorSpec',
    'available_estimators',
    'estimate_fishers',
    'estimate_mle',
    'estimate_tle',
    'knn_distances',
]
