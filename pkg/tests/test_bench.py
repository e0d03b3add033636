"""
Tests for the benchmark sweep definitions and CSV output.
"""

import math

import numpy as np
import pytest

from core.checkpoint import CheckpointManager, SuiteCheckpoint
from intdim.bench import (
    BENCH_SUITES, CSV_COLUMNS, evaluate_point, pn_curve_rows, rows_to_csv, run_bench, run_suite, suite_points
)
from intdim.config import KnnConfig
from intdim.errors import ConfigError
from intdim.estimators import EstimatorSpec

FISHERS = EstimatorSpec.default("fishers")


@pytest.mark.parametrize("suite, expected", [
    ("sample_count", 12),
    ("extrinsic", 3),
    ("noise", 5),
    ("spherical", 3),
    ("diagonal", 5),
    ("full", 8),
    ("cond_number", 7),
    ("low_sample", 5),
])
def test_suite_sizes(suite, expected):
    assert len(suite_points(suite, seed=0, repeats=1, estimator=FISHERS)) == expected
    assert len(suite_points(suite, seed=0, repeats=2, estimator=FISHERS)) == 2 * expected


def test_suite_points_are_unique_and_ordered():
    points = suite_points("extrinsic", seed=3, repeats=2, estimator=FISHERS)
    assert [p.D for p in points] == [10, 50, 200, 10, 50, 200]
    assert [p.seed for p in points] == [3, 3, 3, 4, 4, 4]
    assert len({p.key for p in points}) == len(points)


def test_cond_number_suite_varies_estimator():
    points = suite_points("cond_number", seed=0, repeats=1, estimator=FISHERS)
    assert [p.estimator.config.conditional_number for p in points] == [4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0]
    knn = EstimatorSpec(name="mle", config=KnnConfig())
    assert all(p.estimator is knn for p in suite_points("cond_number", 0, 1, knn))


def test_unknown_suite():
    with pytest.raises(ConfigError):
        suite_points("bogus", seed=0, repeats=1, estimator=FISHERS)
    with pytest.raises(ConfigError):
        run_bench(["bogus"], seed=0, out_dir=".")


def test_evaluate_point_records_failure_as_nan():
    point = suite_points("low_sample", seed=0, repeats=1, estimator=EstimatorSpec(name="mle", config=KnnConfig(k=30)))[0]
    row = evaluate_point(point)
    assert point.n == 25
    assert math.isnan(row["estimate"])
    assert row["estimator"] == "mle"


def test_pn_curve_rows_invert():
    rows = pn_curve_rows()
    assert len(rows) == 20 * 8
    for row in rows:
        if not math.isnan(row["n_alpha_back"]):
            assert row["n_alpha_back"] == pytest.approx(row["n"], abs=1e-6)
    assert all(row["p_alpha"] > 0 for row in rows)


def test_rows_to_csv():
    rows = [{"sweep_param": 0.25, "true_id": 5, "estimate": 4.5, "estimator": "fishers", "seed": 0, "n": 10, "D": 20}]
    assert rows_to_csv(rows) == "sweep_param,true_id,estimate,estimator,seed,n,D\n0.25,5,4.5,fishers,0,10,20\n"


def test_run_suite_worker_count_does_not_change_rows():
    serial = run_suite("spherical", seed=0, repeats=1, estimator=FISHERS, max_workers=1)
    parallel = run_suite("spherical", seed=0, repeats=1, estimator=FISHERS, max_workers=3)
    assert serial == parallel
    assert list(serial[0]) == list(CSV_COLUMNS)


def test_run_suite_reuses_checkpoint(tmp_path):
    manager = CheckpointManager(tmp_path / "ckpt")
    manager.start_new_run("bench_test", config={"suite": ["low_sample"]})
    checkpoint = SuiteCheckpoint(manager, "low_sample")
    rows = run_suite("low_sample", seed=0, repeats=1, estimator=FISHERS, checkpoint=checkpoint)
    assert checkpoint.get_progress_stats()["processed_count"] == 5

    resumed = CheckpointManager(tmp_path / "ckpt")
    resumed.resume_run("bench_test")
    marker = {**rows[0], "estimate": -1.0}
    restored = SuiteCheckpoint(resumed, "low_sample")
    restored.mark_processed(suite_points("low_sample", 0, 1, FISHERS)[0].key, marker)
    again = run_suite("low_sample", seed=0, repeats=1, estimator=FISHERS, checkpoint=restored)
    assert again[0] == marker
    assert again[1:] == rows[1:]


def test_run_bench_writes_csvs(tmp_path):
    manager = CheckpointManager(tmp_path / "ckpt")
    manager.start_new_run("bench_files")
    written = run_bench(["pn_curve", "spherical"], seed=0, out_dir=tmp_path / "out", manager=manager)
    assert [p.name for p in written] == ["pn_curve.csv", "spherical.csv"]
    assert manager.is_suite_completed("spherical")
    lines = (tmp_path / "out" / "spherical.csv").read_text().splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 4
    assert "pn_curve" in BENCH_SUITES


def test_run_suite_records_failed_points(tmp_path):
    manager = CheckpointManager(tmp_path / "ckpt")
    manager.start_new_run("bench_failures", config={"suite": ["low_sample"]})
    checkpoint = SuiteCheckpoint(manager, "low_sample")
    knn = EstimatorSpec(name="mle", config=KnnConfig(k=30))
    rows = run_suite("low_sample", seed=0, repeats=1, estimator=knn, checkpoint=checkpoint)

    assert math.isnan(rows[0]["estimate"])
    assert not any(math.isnan(row["estimate"]) for row in rows[1:])
    assert checkpoint.failed_keys() == {suite_points("low_sample", 0, 1, knn)[0].key}
    assert checkpoint.get_progress_stats()["failure_count"] == 1
    assert manager.get_run_summary()["suites"]["low_sample"]["failure_count"] == 1


@pytest.mark.parametrize("suite", ["diagonal", "full"])
def test_covariance_sweeps_draw_a_new_shape_per_point(suite):
    points = suite_points(suite, seed=0, repeats=1, estimator=FISHERS)
    spectra = []
    for point in points[:2]:
        eigenvalues = np.linalg.eigvalsh(np.cov(point.make_data(), rowvar=False))
        # divide out the sweep value so only the shape remains
        spectra.append(np.sort(eigenvalues) / np.exp(np.log(eigenvalues).mean()))
    assert not np.allclose(spectra[0], spectra[1], rtol=0.05)


def test_run_bench_rewrites_completed_suite_from_checkpoint(tmp_path):
    manager = CheckpointManager(tmp_path / "ckpt")
    manager.start_new_run("bench_again")
    run_bench(["spherical"], seed=0, out_dir=tmp_path / "out", manager=manager)
    first = (tmp_path / "out" / "spherical.csv").read_bytes()

    resumed = CheckpointManager(tmp_path / "ckpt")
    resumed.resume_run("bench_again")
    assert resumed.is_suite_completed("spherical")
    run_bench(["spherical"], seed=0, out_dir=tmp_path / "out", manager=resumed)
    assert (tmp_path / "out" / "spherical.csv").read_bytes() == first
