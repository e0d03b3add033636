"""
Tests for the FisherS estimator.
"""

import numpy as np
import pytest

from intdim.config import FisherSConfig, default_alpha_grid, parse_alpha_grid
from intdim.errors import ConfigError, DomainError, InvalidInseparability, NoValidAlpha, TooFewSamples
from intdim.estimators.fishers import (
    estimate_fishers, mean_inseparability, n_alpha_from_p, p_alpha_theoretical, preprocess,
    select_alpha, separability_curve
)
from intdim.models import CurveEntry, SeparabilityCurve


def _curve(valid_alphas, invalid_alphas=()):
    entries = [CurveEntry(alpha=a, p_bar=0.1, n_alpha=5.0) for a in valid_alphas]
    entries += [CurveEntry(alpha=a, p_bar=0.0, n_alpha=None) for a in invalid_alphas]
    return SeparabilityCurve(entries=sorted(entries, key=lambda e: e.alpha))


def _sphere_points(rng, n, dim):
    points = rng.standard_normal((n, dim))
    return points / np.linalg.norm(points, axis=1, keepdims=True)


def test_default_alpha_grid():
    grid = default_alpha_grid()
    assert len(grid) == 20
    assert grid[0] == 0.6 and grid[-1] == 0.98
    assert parse_alpha_grid("0.6:0.98:0.02") == grid


@pytest.mark.parametrize("kwargs", [
    {"conditional_number": 1.0},
    {"alpha_grid": ()},
    {"alpha_grid": (0.5, 0.4)},
    {"alpha_grid": (0.5, 1.0)},
    {"selection_factor": 0.0},
    {"min_samples": 1},
])
def test_config_validation(kwargs):
    with pytest.raises(ConfigError):
        FisherSConfig(**kwargs)


def test_preprocess_isotropic_keeps_all_components(rng):
    cloud, k = preprocess(rng.standard_normal((2000, 5)), FisherSConfig())
    assert k == 5
    assert cloud.shape == (2000, 5)
    assert np.allclose(np.linalg.norm(cloud, axis=1), 1.0, atol=1e-12)


def test_preprocess_scale_invariant(rng):
    data = rng.standard_normal((300, 4)) @ rng.standard_normal((4, 4))
    cloud, k = preprocess(data, FisherSConfig())
    scaled, k_scaled = preprocess(10 * data, FisherSConfig())
    assert k == k_scaled
    # compare Gram matrices; component signs are arbitrary
    assert np.allclose(cloud @ cloud.T, scaled @ scaled.T, atol=1e-9)


def test_preprocess_too_few_samples(rng):
    with pytest.raises(TooFewSamples):
        preprocess(rng.standard_normal((5, 3)), FisherSConfig())


def test_mean_inseparability_orthonormal_rows():
    assert mean_inseparability(np.eye(3), 0.5) == 0.0


def test_mean_inseparability_duplicates():
    assert mean_inseparability(np.array([[0.6, 0.8], [0.6, 0.8]]), 0.9) == 1.0


def test_mean_inseparability_matches_brute_force(rng):
    cloud = _sphere_points(rng, 200, 3)
    alpha = 0.8
    violations = 0
    for i in range(200):
        for j in range(200):
            if i != j and np.dot(cloud[i], cloud[j]) > alpha:
                violations += 1
    assert mean_inseparability(cloud, alpha) == violations / (200 * 199)


def test_mean_inseparability_rejects_bad_alpha(rng):
    with pytest.raises(DomainError):
        mean_inseparability(_sphere_points(rng, 10, 3), 1.0)
    with pytest.raises(TooFewSamples):
        mean_inseparability(np.array([[1.0, 0.0]]), 0.5)


def test_p_alpha_theoretical_values():
    assert p_alpha_theoretical(1, 0.5) == pytest.approx(1 / (0.5 * np.sqrt(2 * np.pi)), rel=1e-15)
    assert p_alpha_theoretical(1, 0.5) == pytest.approx(0.7978845608, rel=1e-9)
    assert p_alpha_theoretical(10, 0.8) == pytest.approx(1.589e-3, rel=2e-3)
    assert p_alpha_theoretical(5, 0.7) > p_alpha_theoretical(6, 0.7)
    with pytest.raises(DomainError):
        p_alpha_theoretical(5, 0.0)


def test_inversion_round_trip_over_grid():
    worst = 0.0
    for n in range(1, 201):
        for alpha in default_alpha_grid():
            back = n_alpha_from_p(p_alpha_theoretical(n, alpha), alpha)
            worst = max(worst, abs(back - n))
    assert worst < 1e-6


def test_n_alpha_from_p_full_inseparability():
    alpha = 0.5
    n = n_alpha_from_p(1.0, alpha)
    assert n > 0
    forward = (1 - alpha ** 2) ** ((n - 1) / 2) / (alpha * np.sqrt(2 * np.pi * n))
    assert forward == pytest.approx(1.0, rel=1e-10)


def test_n_alpha_from_p_invalid():
    with pytest.raises(InvalidInseparability):
        n_alpha_from_p(0.0, 0.8)


@pytest.mark.parametrize("valid, expected", [
    ((0.6, 0.7, 0.8, 0.9), 0.8),
    ((0.76,), 0.76),
    ((0.4, 0.5), 0.4),
])
def test_select_alpha(valid, expected):
    assert select_alpha(_curve(valid, invalid_alphas=(0.95,)), 0.9) == expected


def test_select_alpha_no_valid_entries():
    with pytest.raises(NoValidAlpha):
        select_alpha(_curve((), invalid_alphas=(0.6, 0.7)))


def test_separability_curve_marks_empty_alphas_invalid():
    curve = separability_curve(np.eye(4), [0.5, 0.9])
    assert [entry.valid for entry in curve.entries] == [False, False]
    assert all(entry.p_bar == 0.0 for entry in curve.entries)


def test_estimate_fishers_isotropic_gaussian(rng):
    estimate = estimate_fishers(rng.standard_normal((2000, 5)))
    assert estimate.value == pytest.approx(5.0, rel=0.25)
    assert estimate.retained_k == 5
    assert not estimate.degenerate
    assert estimate.value == estimate.curve.n_alpha_at(estimate.alpha_star)
    assert len(estimate.curve.entries) == 20
    assert all(0.0 <= entry.p_bar <= 1.0 for entry in estimate.curve.entries)


def test_estimate_fishers_rank_one_is_degenerate(rng):
    t = rng.standard_normal(500)
    data = np.column_stack([t, 2 * t, -t]) + 1e-4 * rng.standard_normal((500, 3))
    estimate = estimate_fishers(data)
    assert estimate.degenerate
    assert estimate.retained_k == 1
    assert estimate.value == 1.0
    assert estimate.curve.entries == []


def test_estimate_fishers_scale_invariant(rng):
    data = rng.standard_normal((800, 6))
    assert estimate_fishers(data).value == pytest.approx(estimate_fishers(1e3 * data).value, rel=1e-9)


def test_estimate_fishers_dedupe(rng):
    data = rng.standard_normal((300, 4))
    doubled = np.vstack([data, data[:50]])
    plain = estimate_fishers(doubled)
    deduped = estimate_fishers(doubled, FisherSConfig(dedupe=True))
    assert plain.diagnostics["duplicate_rows"] == 50
    assert deduped.diagnostics["deduplicated"] is True
    assert deduped.sample_count == 300


def test_estimate_fishers_increasing_in_dimension(rng):
    values = [estimate_fishers(rng.standard_normal((1000, d))).value for d in (2, 5, 10)]
    assert values == sorted(values)
