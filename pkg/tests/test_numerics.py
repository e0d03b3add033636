"""
Tests for the linear-algebra and special-function kernels.
"""

import numpy as np
import pytest
from scipy.special import lambertw

from intdim.errors import (
    DegenerateInput, DegenerateVariance, DomainError, InvalidSampleMatrix, ShapeMismatch, ZeroVector
)
from intdim.models import Spectrum, as_sample_matrix
from intdim.numerics import (
    center, givens_matrix, givens_rotate_consecutive, lambert_w0, pca_spectrum,
    project_to_sphere, select_major_components, whiten_columns
)


def _spectrum(eigenvalues):
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    return Spectrum(eigenvalues=eigenvalues, components=np.eye(eigenvalues.size),
                    projections=np.zeros((2, eigenvalues.size)))


def test_as_sample_matrix_rejects_non_finite():
    with pytest.raises(InvalidSampleMatrix):
        as_sample_matrix([[1.0, np.nan]])
    with pytest.raises(InvalidSampleMatrix):
        as_sample_matrix(np.zeros((0, 3)))


def test_center_examples(rng):
    assert np.array_equal(center([[1, 3], [3, 5]]), [[-1, -1], [1, 1]])
    assert np.array_equal(center([[7, 7]]), [[0, 0]])
    centered = center(rng.normal(5.0, 3.0, size=(100, 10)))
    assert np.all(np.abs(centered.mean(axis=0)) < 1e-10)


def test_pca_spectrum_line_is_rank_one():
    t = np.linspace(-1, 1, 50)
    spectrum = pca_spectrum(center(np.column_stack([t, 2 * t])))
    assert spectrum.eigenvalues[1] < 1e-10


def test_pca_spectrum_axis_aligned_variances(rng):
    data = rng.standard_normal((4000, 2)) * np.array([2.0, 1.0])
    centered = center(data)
    spectrum = pca_spectrum(centered)
    assert spectrum.eigenvalues == pytest.approx([4.0, 1.0], rel=0.1)
    assert spectrum.eigenvalues.sum() == pytest.approx(centered.var(axis=0, ddof=1).sum(), rel=1e-10)


def test_pca_spectrum_reconstructs_and_orthonormal(rng):
    centered = center(rng.standard_normal((300, 6)) @ rng.standard_normal((6, 6)))
    spectrum = pca_spectrum(centered)
    reconstructed = spectrum.projections @ spectrum.components.T
    assert np.linalg.norm(reconstructed - centered) / np.linalg.norm(centered) < 1e-8
    gram = spectrum.components.T @ spectrum.components
    assert np.allclose(gram, np.eye(6), atol=1e-8)
    assert np.allclose(spectrum.projections.var(axis=0, ddof=1), spectrum.eigenvalues, rtol=1e-8)
    assert np.all(np.diff(spectrum.eigenvalues) <= 0)


def test_pca_spectrum_isotropic_eigenvalues_close(rng):
    spectrum = pca_spectrum(center(rng.standard_normal((5000, 3))))
    assert spectrum.eigenvalues.max() / spectrum.eigenvalues.min() < 1.1


def test_pca_spectrum_needs_two_samples():
    with pytest.raises(DegenerateInput):
        pca_spectrum([[1.0, 2.0]])


@pytest.mark.parametrize("eigenvalues, expected", [
    ((10, 2, 0.5), 2),
    ((5, 5, 5), 3),
    ((10, 1 + 1e-12), 2),
])
def test_select_major_components(eigenvalues, expected):
    assert select_major_components(_spectrum(eigenvalues), 10) == expected


def test_select_major_components_monotone_in_c(rng):
    spectrum = _spectrum(np.sort(rng.uniform(0.01, 10, size=20))[::-1])
    ks = [select_major_components(spectrum, c) for c in (1.5, 2, 5, 10, 50, 1000)]
    assert ks == sorted(ks)


def test_whiten_columns_examples(rng):
    column = rng.standard_normal((200, 1))
    column = column / column.std(ddof=1) * 2
    assert np.allclose(whiten_columns(column), column / 2)

    already = whiten_columns(rng.standard_normal((200, 3)))
    assert np.allclose(whiten_columns(already), already, atol=1e-10)

    whitened = whiten_columns(rng.standard_normal((1000, 3)) * [1, 5, 0.1])
    assert np.allclose(whitened.std(axis=0, ddof=1), 1.0, atol=1e-8)
    cov = np.cov(whitened, rowvar=False)
    assert np.all(np.abs(cov - np.diag(np.diag(cov))) < 0.1)


def test_whiten_columns_rejects_flat_column(rng):
    data = np.column_stack([rng.standard_normal(50), np.zeros(50)])
    with pytest.raises(DegenerateVariance):
        whiten_columns(data)


def test_project_to_sphere(rng):
    assert np.allclose(project_to_sphere([[3.0, 4.0]]), [[0.6, 0.8]])
    assert np.allclose(project_to_sphere([[0.0, 1.0]]), [[0.0, 1.0]])
    norms = np.linalg.norm(project_to_sphere(rng.standard_normal((500, 7))), axis=1)
    assert np.all(np.abs(norms - 1) <= 1e-12)
    with pytest.raises(ZeroVector):
        project_to_sphere([[0.0, 0.0], [1.0, 0.0]])


def test_lambert_w0_known_values():
    assert lambert_w0(0.0) == 0.0
    assert lambert_w0(np.e) == pytest.approx(1.0, abs=1e-13)
    assert lambert_w0(1.0) == pytest.approx(0.5671432904097838, abs=1e-13)


def test_lambert_w0_inverse_identity_random():
    x = np.random.default_rng(7).uniform(0, 1e6, size=10_000)
    w = lambert_w0(x)
    assert np.all(np.abs(w * np.exp(w) - x) / np.maximum(x, 1) < 1e-12)
    assert np.allclose(w, lambertw(x).real, rtol=1e-12)


def test_lambert_w0_huge_argument():
    x = 1e300
    w = lambert_w0(x)
    assert w + np.log(w) == pytest.approx(np.log(x), rel=1e-14)


def test_lambert_w0_domain():
    with pytest.raises(DomainError):
        lambert_w0(-1e-3)
    with pytest.raises(DomainError):
        lambert_w0(np.nan)


def test_givens_zero_angles_identity(rng):
    data = rng.standard_normal((10, 4))
    assert np.allclose(givens_rotate_consecutive(data, [0, 0, 0]), data, rtol=0, atol=1e-15)


def test_givens_quarter_turn():
    rotated = givens_rotate_consecutive([[1.0, 0.0]], [np.pi / 2])
    assert np.allclose(rotated, [[0.0, 1.0]], atol=1e-12)


def test_givens_preserves_norms_and_orthogonal(rng):
    data = rng.standard_normal((50, 6))
    angles = rng.uniform(0, 2 * np.pi, size=5)
    rotated = givens_rotate_consecutive(data, angles)
    assert np.allclose(np.linalg.norm(rotated, axis=1), np.linalg.norm(data, axis=1), atol=1e-10)
    basis = givens_rotate_consecutive(np.eye(6), angles)
    assert np.allclose(basis @ basis.T, np.eye(6), atol=1e-10)
    assert np.allclose(givens_matrix(6, angles).T @ givens_matrix(6, angles), np.eye(6), atol=1e-10)


def test_givens_angle_count_checked(rng):
    with pytest.raises(ShapeMismatch):
        givens_rotate_consecutive(rng.standard_normal((3, 4)), [0.1, 0.2])
