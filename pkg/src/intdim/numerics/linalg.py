"""
Linear-algebra kernels shared by the estimators and generators.

All functions are pure; none mutates its input.
"""

import logging
from typing import Optional, Sequence

import numpy as np

from ..errors import DegenerateInput, DegenerateVariance, ShapeMismatch, ZeroVector
from ..models import Spectrum, as_sample_matrix

logger = logging.getLogger(__name__)

# eigenvalues below this fraction of λ_max are round-off
EIGENVALUE_CLAMP = 1e-12
# relative floor on whitened column standard deviations
VARIANCE_FLOOR = 1e-12
ZERO_NORM = 1e-30


def center(data: np.ndarray) -> np.ndarray:
    """Subtract column means."""
    data = as_sample_matrix(data)
    return data - data.mean(axis=0, keepdims=True)


def pca_spectrum(data: np.ndarray) -> Spectrum:
    """
    PCA of an already-centered cloud via SVD.

    Eigenvalues are squared singular values over (n - 1), so they equal the sample
    variances of the projection columns.
    """
    data = as_sample_matrix(data)
    n = data.shape[0]
    if n < 2:
        raise DegenerateInput(f"PCA needs at least 2 samples, got {n}")

    u, singular, vt = np.linalg.svd(data, full_matrices=False)
    eigenvalues = singular ** 2 / (n - 1)
    if eigenvalues.size and eigenvalues[0] > 0:
        eigenvalues = np.where(eigenvalues < EIGENVALUE_CLAMP * eigenvalues[0], 0.0, eigenvalues)
    return Spectrum(
        eigenvalues=eigenvalues,
        components=vt.T,
        projections=u * singular,
    )


def select_major_components(spectrum: Spectrum, conditional_number: float) -> int:
    """Largest k with λ_1 / λ_k < C (k >= 1)."""
    eigenvalues = np.asarray(spectrum.eigenvalues, dtype=np.float64)
    if eigenvalues.size == 0 or eigenvalues[0] <= 0:
        return 1
    with np.errstate(divide="ignore"):
        ratios = eigenvalues[0] / eigenvalues
    k = max(1, int(np.count_nonzero(ratios < conditional_number)))
    logger.debug("retained %d of %d components at C=%s", k, eigenvalues.size, conditional_number)
    return k


def whiten_columns(projections: np.ndarray, eigenvalues: Optional[Sequence[float]] = None) -> np.ndarray:
    """
    Scale each column to unit sample standard deviation.

    When ``eigenvalues`` are given (one per column) their square roots are used as the
    column standard deviations; otherwise they are measured with ddof=1.
    """
    projections = as_sample_matrix(projections, name="projections")
    if eigenvalues is not None:
        eigenvalues = np.asarray(eigenvalues, dtype=np.float64)
        if eigenvalues.shape != (projections.shape[1],):
            raise ShapeMismatch(
                f"{eigenvalues.size} eigenvalues for {projections.shape[1]} columns"
            )
        stds = np.sqrt(np.clip(eigenvalues, 0.0, None))
    else:
        if projections.shape[0] < 2:
            raise DegenerateInput("whitening needs at least 2 samples")
        stds = projections.std(axis=0, ddof=1)

    largest = stds.max()
    if largest <= 0 or np.any(stds <= VARIANCE_FLOOR * largest):
        raise DegenerateVariance(
            f"column standard deviations {stds.tolist()} fall below {VARIANCE_FLOOR} x max"
        )
    return projections / stds


def project_to_sphere(data: np.ndarray) -> np.ndarray:
    """Scale every row to unit Euclidean norm."""
    data = as_sample_matrix(data)
    norms = np.linalg.norm(data, axis=1)
    zero_rows = np.flatnonzero(norms < ZERO_NORM)
    if zero_rows.size:
        raise ZeroVector(f"rows {zero_rows[:10].tolist()} have zero norm")
    return data / norms[:, None]


def givens_matrix(dimension: int, angles: Sequence[float]) -> np.ndarray:
    """
    Orthogonal matrix R such that ``data @ R`` applies the rotations of the consecutive
    coordinate pairs (0,1), (1,2), ..., (D-2, D-1) in that order.
    """
    angles = np.asarray(angles, dtype=np.float64).reshape(-1)
    if angles.size != max(dimension - 1, 0):
        raise ShapeMismatch(f"{angles.size} angles for dimension {dimension}; need {dimension - 1}")
    rotation = np.eye(dimension)
    for i, theta in enumerate(angles):
        c, s = np.cos(theta), np.sin(theta)
        col_i = rotation[:, i].copy()
        col_j = rotation[:, i + 1].copy()
        # x_i' = c x_i - s x_j ; x_j' = s x_i + c x_j
        rotation[:, i] = c * col_i - s * col_j
        rotation[:, i + 1] = s * col_i + c * col_j
    return rotation


def givens_rotate_consecutive(data: np.ndarray, angles: Sequence[float]) -> np.ndarray:
    """Apply one pass of consecutive-pair plane rotations to every row."""
    data = as_sample_matrix(data)
    return data @ givens_matrix(data.shape[1], angles)
