"""
Estimator-level robustness checks on synthetic data with known intrinsic dimension.

These run the same sweep points as ``intdim bench`` and assert the stability properties
FisherS is expected to have. The CIFAR-10 check at the end only runs when
``INTDIM_CIFAR_DIR`` points at the binary batches.
"""

import os
from pathlib import Path

import numpy as np
import pytest
from scipy.stats import spearmanr

from intdim.bench import evaluate_point, suite_points
from intdim.errors import NoValidAlpha
from intdim.estimators import EstimatorSpec, estimate_fishers
from intdim.io import read_cifar10_bin
from intdim.models import LabeledDataset
from intdim.synth import GaussianSpec, NoiseSpec, add_noise, sample_gaussian, subsample_longtail

FISHERS = EstimatorSpec.default("fishers")

# mean class IDs at 100 samples per class
REFERENCE_CIFAR_IDS = {
    0: 8.82, 1: 10.83, 2: 6.59, 3: 10.65, 4: 8.75,
    5: 11.56, 6: 9.06, 7: 11.74, 8: 9.78, 9: 13.57,
}


def _rows(suite, seed=0, repeats=1):
    return [evaluate_point(point) for point in suite_points(suite, seed=seed, repeats=repeats, estimator=FISHERS)]


def _spread(values):
    values = np.asarray(values, dtype=float)
    return (values.max() - values.min()) / values.mean()


def test_sample_count_robustness():
    rows = _rows("sample_count")
    by_d = {}
    for row in rows:
        assert row["estimate"] == pytest.approx(row["true_id"], rel=0.25)
        by_d.setdefault(row["true_id"], {})[row["n"]] = row["estimate"]
    for estimates in by_d.values():
        assert _spread(list(estimates.values())) < 0.20
    for n in (500, 1000, 5000):
        column = [by_d[d][n] for d in sorted(by_d)]
        assert all(a < b for a, b in zip(column, column[1:]))


def test_extrinsic_dimension_robustness():
    estimates = [row["estimate"] for row in _rows("extrinsic")]
    assert _spread(estimates) < 0.15
    assert all(e == pytest.approx(5, rel=0.25) for e in estimates)


def test_conditional_number_robustness():
    estimates = [row["estimate"] for row in _rows("cond_number")]
    assert len(estimates) == 7
    assert _spread(estimates) < 0.15


def test_spherical_covariance_is_scale_free():
    estimates = [row["estimate"] for row in _rows("spherical")]
    assert estimates[1] == pytest.approx(estimates[0], rel=1e-9)
    assert estimates[2] == pytest.approx(estimates[0], rel=1e-9)


def test_diagonal_covariance_spread():
    estimates = [row["estimate"] for row in _rows("diagonal")]
    assert len(set(estimates)) == len(estimates)
    assert 0 < _spread(estimates) < 0.25


def test_full_covariance_does_not_overestimate():
    rows = _rows("full", repeats=4)
    estimates = [row["estimate"] for row in rows]
    assert all(e <= row["true_id"] + 1 for e, row in zip(estimates, rows))
    assert len(set(estimates[:8])) > 1
    # ranks pooled over 4 seeds x 8 generalized variances
    rho = spearmanr([row["sweep_param"] for row in rows], estimates).correlation
    assert abs(rho) < 0.5


def _estimates_over_seeds(n, seeds=range(10)):
    values, failures = [], []
    for s in seeds:
        try:
            values.append(estimate_fishers(sample_gaussian(GaussianSpec(10, 10, n, rotate=False, seed=s))).value)
        except NoValidAlpha:
            failures.append(s)
    return values, failures


def test_low_sample_estimates_vary_more():
    small, small_failures = _estimates_over_seeds(25)
    large, large_failures = _estimates_over_seeds(500)
    # at n=25 an occasional draw leaves every point separable at every alpha
    assert len(small_failures) <= 3
    assert large_failures == []
    assert np.std(small) > np.std(large)


def test_isotropic_gaussian_d8():
    data = sample_gaussian(GaussianSpec(8, 8, 4000, rotate=False, seed=21))
    assert 6.4 <= estimate_fishers(data).value <= 9.6


def test_orthogonal_and_permutation_invariance(rng):
    data = rng.standard_normal((1500, 6)) * np.array([3.0, 2.5, 2.0, 1.6, 1.3, 1.0])
    base = estimate_fishers(data).value
    q, _ = np.linalg.qr(rng.standard_normal((6, 6)))
    assert estimate_fishers(data @ q).value == pytest.approx(base, rel=0.05)
    assert estimate_fishers(data[rng.permutation(1500)]).value == pytest.approx(base, rel=1e-9)
    for scale in (0.1, 10.0):
        assert estimate_fishers(scale * data).value == pytest.approx(base, rel=1e-9)


def _cifar_batches():
    root = os.getenv("INTDIM_CIFAR_DIR")
    if not root:
        return None
    paths = [Path(root) / f"data_batch_{i}.bin" for i in range(1, 6)]
    return [p for p in paths if p.exists()] or None


@pytest.mark.skipif(_cifar_batches() is None, reason="INTDIM_CIFAR_DIR not set")
def test_cifar_class_ids():
    dataset = read_cifar10_bin(_cifar_batches())
    per_seed = []
    for seed in range(5):
        subset = subsample_longtail(dataset, [100] * 10, seed=seed)
        per_seed.append([estimate_fishers(subset.class_data(c)).value for c in range(10)])
    means = np.mean(per_seed, axis=0)
    for label, reference in REFERENCE_CIFAR_IDS.items():
        assert means[label] == pytest.approx(reference, rel=0.25)

    subset = subsample_longtail(dataset, [100] * 10, seed=0)
    clean = [estimate_fishers(subset.class_data(c)).value for c in range(10)]
    for sigma in (0.25, 0.5):
        noisy = LabeledDataset(data=add_noise(subset.data, NoiseSpec(sigma=sigma, seed=1)), labels=subset.labels)
        for c in range(10):
            assert estimate_fishers(noisy.class_data(c)).value == pytest.approx(clean[c], rel=0.30)
