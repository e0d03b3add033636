"""
Robustness sweeps on synthetic data with known intrinsic dimension.

Each suite expands to an ordered list of sweep points (one per parameter value and seed);
every point produces one CSV row ``sweep_param,true_id,estimate,estimator,seed,n,D``.
Row order follows the suite definition, never completion order, and points that were
already computed in a checkpointed run are reused on ``resume``.
"""

import logging
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.checkpoint import CheckpointManager, SuiteCheckpoint
from core.parallel import run_threaded
from utils.helpers import PathLike, atomic_write_text

from ..config import FisherSConfig, default_alpha_grid
from ..errors import ConfigError, IntDimError
from ..estimators import EstimatorSpec
from ..estimators.fishers import n_alpha_from_p, p_alpha_theoretical
from ..synth import (
    CovarianceKind, GaussianSpec, NoiseSpec, add_noise, derive_seed, minmax_scale, sample_gaussian
)

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("sweep_param", "true_id", "estimate", "estimator", "seed", "n", "D")
PN_COLUMNS = ("alpha", "n", "p_alpha", "n_alpha_back")

SAMPLE_COUNT_DIMS = (2, 5, 10, 20)
SAMPLE_COUNT_SIZES = (500, 1000, 5000)
EXTRINSIC_DIMS = (10, 50, 200)
NOISE_SIGMAS = (0.0, 0.25, 0.5, 0.75, 1.0)
SPHERICAL_SIGMAS = (0.25, 1.0, 4.0)
DIAGONAL_TRACES = (1.0, 2.0, 5.0, 10.0, 20.0)
FULL_GEN_VARS = tuple(float(v) for v in np.logspace(-3, 4, 8))
COND_NUMBERS = (4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0)
LOW_SAMPLE_SIZES = (25, 50, 100, 250, 500)
PN_DIMENSIONS = (1, 2, 5, 10, 20, 50, 100, 200)

# checkpoint after this many points per worker
SAVE_EVERY_PER_WORKER = 4


@dataclass(frozen=True)
class SweepPoint:
    sweep_param: float
    true_id: int
    n: int
    D: int
    seed: int
    make_data: Callable[[], np.ndarray]
    estimator: EstimatorSpec

    @property
    def key(self) -> str:
        return f"{self.sweep_param!r}:{self.true_id}:{self.n}:{self.D}:{self.seed}"


def _with_conditional_number(estimator: EstimatorSpec, value: float) -> EstimatorSpec:
    if not isinstance(estimator.config, FisherSConfig):
        return estimator
    return EstimatorSpec(estimator.name, replace(estimator.config, conditional_number=value))


def _gaussian_point(sweep_param, spec: GaussianSpec, estimator: EstimatorSpec, seed: int) -> SweepPoint:
    return SweepPoint(
        sweep_param=float(sweep_param),
        true_id=spec.intrinsic_d,
        n=spec.n,
        D=spec.extrinsic_D,
        seed=seed,
        make_data=lambda: sample_gaussian(spec),
        estimator=estimator,
    )


def _noisy_point(sigma: float, estimator: EstimatorSpec, seed: int) -> SweepPoint:
    spec = GaussianSpec(intrinsic_d=5, extrinsic_D=20, n=2000, seed=seed)

    def make_data():
        clean = minmax_scale(sample_gaussian(spec))
        return add_noise(clean, NoiseSpec(sigma=sigma, seed=seed))

    return SweepPoint(float(sigma), 5, spec.n, spec.extrinsic_D, seed, make_data, estimator)


def suite_points(
    suite: str,
    seed: int,
    repeats: int,
    estimator: EstimatorSpec,
    rotation_passes: int = 1,
) -> List[SweepPoint]:
    points = []
    for seed_r in range(seed, seed + repeats):
        if suite == "sample_count":
            for d in SAMPLE_COUNT_DIMS:
                for n in SAMPLE_COUNT_SIZES:
                    spec = GaussianSpec(d, d, n, rotate=False, seed=seed_r)
                    points.append(_gaussian_point(n, spec, estimator, seed_r))
        elif suite == "extrinsic":
            for dim in EXTRINSIC_DIMS:
                spec = GaussianSpec(5, dim, 3000, rotate=True, seed=seed_r, rotation_passes=rotation_passes)
                points.append(_gaussian_point(dim, spec, estimator, seed_r))
        elif suite == "noise":
            points.extend(_noisy_point(sigma, estimator, seed_r) for sigma in NOISE_SIGMAS)
        elif suite == "spherical":
            for sigma in SPHERICAL_SIGMAS:
                spec = GaussianSpec(10, 10, 2000, CovarianceKind.spherical(sigma), rotate=False, seed=seed_r)
                points.append(_gaussian_point(sigma, spec, estimator, seed_r))
        elif suite == "diagonal":
            # each point draws its own covariance shape; the sweep value only fixes its scale
            for index, trace in enumerate(DIAGONAL_TRACES):
                kind = CovarianceKind.diagonal_fixed_trace(trace)
                spec = GaussianSpec(10, 10, 2000, kind, rotate=False, seed=derive_seed(seed_r, index))
                points.append(_gaussian_point(trace, spec, estimator, seed_r))
        elif suite == "full":
            for index, gen_var in enumerate(FULL_GEN_VARS):
                kind = CovarianceKind.full_fixed_det(gen_var)
                spec = GaussianSpec(10, 10, 2000, kind, rotate=False, seed=derive_seed(seed_r, index))
                points.append(_gaussian_point(gen_var, spec, estimator, seed_r))
        elif suite == "cond_number":
            spec = GaussianSpec(10, 10, 3000, rotate=False, seed=seed_r)
            for value in COND_NUMBERS:
                points.append(_gaussian_point(value, spec, _with_conditional_number(estimator, value), seed_r))
        elif suite == "low_sample":
            for n in LOW_SAMPLE_SIZES:
                spec = GaussianSpec(10, 10, n, rotate=False, seed=seed_r)
                points.append(_gaussian_point(n, spec, estimator, seed_r))
        else:
            raise ConfigError(f"unknown bench suite {suite!r}")
    return points


def _evaluate(point: SweepPoint) -> Tuple[Dict[str, object], Optional[str]]:
    error = None
    try:
        estimate = point.estimator.estimate(point.make_data()).value
    except IntDimError as exc:
        logger.warning("⚠️ %s failed at %s: %s", point.estimator.name, point.key, exc)
        estimate = float("nan")
        error = f"{type(exc).__name__}: {exc}"
    row = {
        "sweep_param": point.sweep_param,
        "true_id": point.true_id,
        "estimate": float(estimate),
        "estimator": point.estimator.name,
        "seed": point.seed,
        "n": point.n,
        "D": point.D,
    }
    return row, error


def evaluate_point(point: SweepPoint) -> Dict[str, object]:
    """One CSV row; an estimator failure becomes a NaN estimate."""
    return _evaluate(point)[0]


def _format(value) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def rows_to_csv(rows: Sequence[Dict[str, object]], columns: Sequence[str] = CSV_COLUMNS) -> str:
    lines = [",".join(columns)]
    lines.extend(",".join(_format(row[col]) for col in columns) for row in rows)
    return "\n".join(lines) + "\n"


def pn_curve_rows(alphas: Optional[Sequence[float]] = None, dims: Sequence[int] = PN_DIMENSIONS) -> List[Dict[str, float]]:
    """Theoretical inseparability per (α, n) and its inversion back to n."""
    rows = []
    for alpha in alphas or default_alpha_grid():
        for n in dims:
            p = p_alpha_theoretical(n, alpha)
            back = n_alpha_from_p(p, alpha) if 0 < p <= 1 else float("nan")
            rows.append({"alpha": float(alpha), "n": n, "p_alpha": p, "n_alpha_back": float(back)})
    return rows


def run_suite(
    suite: str,
    seed: int,
    repeats: int,
    estimator: EstimatorSpec,
    max_workers: int = 1,
    rotation_passes: int = 1,
    checkpoint: Optional[SuiteCheckpoint] = None,
) -> List[Dict[str, object]]:
    points = suite_points(suite, seed, repeats, estimator, rotation_passes)
    if checkpoint is not None:
        checkpoint.set_total_items(len(points))
        done = sum(checkpoint.is_processed(p.key) for p in points)
        if done:
            logger.info("⏭️ %s: reusing %d/%d checkpointed points", suite, done, len(points))
    pending = [p for p in points if checkpoint is None or not checkpoint.is_processed(p.key)]

    computed: Dict[str, Dict[str, object]] = {}
    batch_size = max(1, max_workers) * SAVE_EVERY_PER_WORKER
    for start in range(0, len(pending), batch_size):
        batch = pending[start:start + batch_size]
        outcomes = run_threaded(batch, _evaluate, max_workers=max_workers, label=f"{suite} points")
        for point, outcome in zip(batch, outcomes):
            if not outcome.ok:
                raise outcome.error
            row, error = outcome.result
            computed[point.key] = row
            if checkpoint is not None:
                checkpoint.mark_processed(point.key, row)
                if error is not None:
                    checkpoint.mark_failed(point.key, error)
        if checkpoint is not None:
            checkpoint.save_progress()
            stats = checkpoint.get_progress_stats()
            logger.info("💾 %s: %d/%d points saved (%.0f%%, %d failed)", suite, stats["processed_count"],
                        stats["total_items"], stats["completion_percentage"], stats["failure_count"])

    rows = []
    for point in points:
        row = computed.get(point.key)
        if row is None:
            row = checkpoint.get_row(point.key)
        rows.append(row)
    return rows


BENCH_SUITES = (
    "sample_count", "extrinsic", "noise", "spherical", "diagonal",
    "full", "cond_number", "low_sample", "pn_curve",
)


def run_bench(
    suites: Sequence[str],
    seed: int,
    out_dir: PathLike,
    estimator: Optional[EstimatorSpec] = None,
    repeats: int = 1,
    max_workers: int = 1,
    rotation_passes: int = 1,
    manager: Optional[CheckpointManager] = None,
) -> List[Path]:
    """Run ``suites`` and write one ``<suite>.csv`` per suite into ``out_dir``."""
    estimator = estimator or EstimatorSpec.default("fishers")
    if repeats < 1:
        raise ConfigError("repeats must be >= 1")
    unknown = [s for s in suites if s not in BENCH_SUITES]
    if unknown:
        raise ConfigError(f"unknown bench suites {unknown}; choose from {', '.join(BENCH_SUITES)}")

    out = Path(out_dir)
    written = []
    for suite in suites:
        logger.info("🔄 Running bench suite %s", suite)
        if suite == "pn_curve":
            text = rows_to_csv(pn_curve_rows(), PN_COLUMNS)
        else:
            checkpoint = SuiteCheckpoint(manager, suite) if manager is not None else None
            completed = manager is not None and manager.is_suite_completed(suite)
            if completed:
                logger.info("⏭️ %s already completed in this run; rewriting its CSV from the checkpoint", suite)
            try:
                rows = run_suite(suite, seed, repeats, estimator, max_workers, rotation_passes, checkpoint)
            except Exception as exc:
                if manager is not None:
                    manager.mark_suite_failed(suite, str(exc))
                raise
            if manager is not None and not completed:
                manager.mark_suite_complete(suite)
            text = rows_to_csv(rows)
        path = out / f"{suite}.csv"
        atomic_write_text(path, text)
        written.append(path)
        logger.info("✅ %s written to %s", suite, path)
    return written
