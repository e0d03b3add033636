"""Numerical kernels: PCA preprocessing, sphere projection, plane rotations, Lambert W"""

from .linalg import (
    center, pca_spectrum, select_major_components, whiten_columns,
    project_to_sphere, givens_matrix, givens_rotate_consecutive,
)
from .special import lambert_w0

__all__ = [
    'center',
    'pca_spectrum',
    'select_major_components',
    'whiten_columns',
    'project_to_sphere',
    'givens_matrix',
    'givens_rotate_consecutive',
    'lambert_w0',
]
