"""Synthetic point clouds with known intrinsic dimension"""

from .generators import (
    COVARIANCE_KINDS,
    CovarianceKind,
    GaussianSpec,
    LongTailSpec,
    NoiseSpec,
    add_noise,
    derive_seed,
    embed_and_rotate,
    longtail_counts,
    make_covariance,
    make_labeled_synthetic,
    minmax_scale,
    sample_gaussian,
    sample_uniform_cube,
    subsample_longtail,
)

__all__ = [
    'COVARIANCE_KINDS',
    'CovarianceKind',
    'GaussianSpec',
    'LongTailSpec',
    'NoiseSpec',
    'add_noise',
    'derive_seed',
    'embed_and_rotate',
    'longtail_counts',
    'make_covariance',
    'make_labeled_synthetic',
    'minmax_scale',
    'sample_gaussian',
    'sample_uniform_cube',
    'subsample_longtail',
]
