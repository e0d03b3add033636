"""
Class-wise intrinsic dimension.

Each class is estimated independently (optionally in parallel); the raw IDs d_c are then
normalized to shares d̂_c = d_c / Σ d_c'.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from core.parallel import run_threaded

from ..errors import ClassTooSmall, IntDimError
from ..estimators import EstimatorSpec
from ..models import ClassIdProfile, IdEstimate, LabeledDataset

logger = logging.getLogger(__name__)


@dataclass
class ClasswiseRun:
    profile: ClassIdProfile
    # None for classes whose value was imputed
    estimates: List[Optional[IdEstimate]]


def run_classwise(
    dataset: LabeledDataset,
    estimator: EstimatorSpec,
    fallback: bool = False,
    max_workers: int = 1,
) -> ClasswiseRun:
    counts = dataset.counts()
    labels = list(range(dataset.num_classes))

    too_small = [c for c in labels if counts[c] < estimator.min_samples]
    if too_small and not fallback:
        first = too_small[0]
        raise ClassTooSmall(first, int(counts[first]), estimator.min_samples)

    eligible = [c for c in labels if c not in too_small]
    outcomes = run_threaded(
        eligible,
        lambda c: estimator.estimate(dataset.class_data(c)),
        max_workers=max_workers,
        label="classes",
    )

    estimates: List[Optional[IdEstimate]] = [None] * len(labels)
    failures = {}
    for label, outcome in zip(eligible, outcomes):
        if outcome.ok:
            estimates[label] = outcome.result
        else:
            failures[label] = outcome.error

    if failures and not fallback:
        first = min(failures)
        error = failures[first]
        if isinstance(error, IntDimError):
            error.stage = f"classwise[class {first}]"
        raise error

    successful = [est.value for est in estimates if est is not None]
    missing = [c for c in labels if estimates[c] is None]
    if missing:
        if not successful:
            raise failures[min(failures)] if failures else ClassTooSmall(
                missing[0], int(counts[missing[0]]), estimator.min_samples
            )
        fill = float(np.mean(successful))
        logger.warning("⚠️ Imputing ID %.4f for classes %s", fill, missing)

    raw = [est.value if est is not None else fill for est in estimates]
    profile = ClassIdProfile.from_raw(
        raw,
        counts.tolist(),
        estimator_tag={**estimator.tag(), "fallback": bool(fallback)},
        degenerate=[bool(est is not None and est.degenerate) for est in estimates],
        imputed=[est is None for est in estimates],
    )
    for c in labels:
        logger.debug("class %d: n=%d d=%.4f d_hat=%.4f", c, counts[c], profile.raw[c], profile.normalized[c])
    return ClasswiseRun(profile=profile, estimates=estimates)


def classwise_id(
    dataset: LabeledDataset,
    estimator: EstimatorSpec,
    fallback: bool = False,
    max_workers: int = 1,
) -> ClassIdProfile:
    """Per-class IDs and their normalized shares."""
    return run_classwise(dataset, estimator, fallback=fallback, max_workers=max_workers).profile
