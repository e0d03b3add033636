"""Estimator configuration module"""

from .estimator_config import (
    FisherSConfig, KnnConfig, TLE_AGGREGATIONS, default_alpha_grid, parse_alpha_grid
)

__all__ = [
    'FisherSConfig',
    'KnnConfig',
    'TLE_AGGREGATIONS',
    'default_alpha_grid',
    'parse_alpha_grid',
]
