"""
FisherS intrinsic dimension estimator.

Pipeline: center -> PCA project -> keep major components -> whiten -> project rows to the
unit sphere -> mean Fisher inseparability per α -> invert the sphere equidistribution
formula with Lambert W -> pick α* near selection_factor * max(valid α).
"""

import logging
from typing import Sequence, Tuple

import numpy as np

from ..config import FisherSConfig
from ..errors import DomainError, InvalidInseparability, NoValidAlpha, TooFewSamples
from ..models import CurveEntry, IdEstimate, SeparabilityCurve, as_sample_matrix
from ..numerics import (
    center, lambert_w0, pca_spectrum, project_to_sphere, select_major_components, whiten_columns,
)

logger = logging.getLogger(__name__)

ESTIMATOR_NAME = "fishers"
# rows of the Gram matrix evaluated per block
GRAM_BLOCK_ROWS = 1024
SELECTION_TIE_TOLERANCE = 1e-12


def count_duplicate_rows(data: np.ndarray) -> int:
    unique = np.unique(data, axis=0)
    return int(data.shape[0] - unique.shape[0])


def drop_duplicate_rows(data: np.ndarray) -> np.ndarray:
    """Keep the first occurrence of every distinct row, preserving row order."""
    _, first = np.unique(data, axis=0, return_index=True)
    return data[np.sort(first)]


def _reduce(data: np.ndarray, cfg: FisherSConfig) -> Tuple[np.ndarray, int]:
    n = data.shape[0]
    if n < cfg.min_samples:
        raise TooFewSamples(f"FisherS needs at least {cfg.min_samples} samples, got {n}")
    spectrum = pca_spectrum(center(data))
    k = select_major_components(spectrum, cfg.conditional_number)
    whitened = whiten_columns(spectrum.projections[:, :k], spectrum.eigenvalues[:k])
    return whitened, k


def preprocess(data: np.ndarray, cfg: FisherSConfig) -> Tuple[np.ndarray, int]:
    """Return the unit-sphere cloud in the retained component space and retained k."""
    data = as_sample_matrix(data)
    whitened, k = _reduce(data, cfg)
    return project_to_sphere(whitened), k


def inseparability_profile(cloud: np.ndarray, alphas: Sequence[float]) -> np.ndarray:
    """
    Mean inseparability p̄_α for every α at once.

    p̄_α = (1/n) Σ_y (1/(n-1)) #{x != y : <y, x> > α}; counts are accumulated as exact
    integers, so the result does not depend on block size or worker count.
    """
    cloud = as_sample_matrix(cloud, name="cloud")
    alphas = np.asarray(alphas, dtype=np.float64)
    n = cloud.shape[0]
    if n < 2:
        raise TooFewSamples(f"inseparability needs at least 2 points, got {n}")

    # counts[j] = number of pairs with <x, y> > alphas[j]
    tally = np.zeros(alphas.size + 1, dtype=np.int64)
    for start in range(0, n, GRAM_BLOCK_ROWS):
        stop = min(start + GRAM_BLOCK_ROWS, n)
        gram = cloud[start:stop] @ cloud.T
        rows = np.arange(stop - start)
        gram[rows, start + rows] = -np.inf
        # number of grid values strictly below each inner product
        below = np.searchsorted(alphas, gram.ravel(), side="left")
        tally += np.bincount(below, minlength=alphas.size + 1)
    counts = np.cumsum(tally[::-1])[::-1][1:]
    return counts / float(n * (n - 1))


def _check_alpha(alpha: float):
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")


def mean_inseparability(cloud: np.ndarray, alpha: float) -> float:
    _check_alpha(alpha)
    return float(inseparability_profile(cloud, [alpha])[0])


def p_alpha_theoretical(n: float, alpha: float) -> float:
    """Inseparability probability on the uniform sphere S^(n-1) in R^n."""
    _check_alpha(alpha)
    if n < 1:
        raise DomainError(f"dimension must be >= 1, got {n}")
    return float(
        (1.0 - alpha ** 2) ** ((n - 1.0) / 2.0) / (alpha * np.sqrt(2.0 * np.pi * n))
    )


def n_alpha_from_p(p_bar: float, alpha: float) -> float:
    """Dimension whose theoretical inseparability at α equals ``p_bar``."""
    _check_alpha(alpha)
    if not p_bar > 0:
        raise InvalidInseparability(f"mean inseparability must be > 0, got {p_bar}")
    log_term = -np.log1p(-alpha ** 2)
    with np.errstate(over="ignore", divide="ignore"):
        argument = log_term / (2.0 * np.pi * p_bar ** 2 * alpha ** 2 * (1.0 - alpha ** 2))
    if not np.isfinite(argument):
        raise InvalidInseparability(f"Lambert W argument overflows for p_bar={p_bar}")
    return float(lambert_w0(argument) / log_term)


def separability_curve(cloud: np.ndarray, alphas: Sequence[float]) -> SeparabilityCurve:
    p_bars = inseparability_profile(cloud, alphas)
    entries = []
    for alpha, p_bar in zip(alphas, p_bars):
        n_alpha = None
        if p_bar > 0:
            try:
                candidate = n_alpha_from_p(float(p_bar), float(alpha))
            except InvalidInseparability:
                candidate = None
            if candidate is not None and np.isfinite(candidate) and candidate > 0:
                n_alpha = candidate
        if n_alpha is None:
            logger.debug("alpha=%.4f invalid (p_bar=%g)", alpha, p_bar)
        entries.append(CurveEntry(alpha=float(alpha), p_bar=float(p_bar), n_alpha=n_alpha))
    return SeparabilityCurve(entries=entries)


def select_alpha(curve: SeparabilityCurve, selection_factor: float = 0.9) -> float:
    """Valid α closest to selection_factor * max(valid α); ties go to the smaller α."""
    valid = [entry.alpha for entry in curve.valid_entries]
    if not valid:
        raise NoValidAlpha("every alpha on the grid produced an invalid dimension")
    target = selection_factor * max(valid)
    distances = [abs(alpha - target) for alpha in valid]
    best = min(distances)
    return min(alpha for alpha, dist in zip(valid, distances) if dist <= best + SELECTION_TIE_TOLERANCE)


def estimate_fishers(data: np.ndarray, cfg: FisherSConfig = None) -> IdEstimate:
    cfg = cfg or FisherSConfig.default()
    data = as_sample_matrix(data)
    duplicates = count_duplicate_rows(data)
    if duplicates:
        logger.debug("%d duplicate rows (dedupe=%s)", duplicates, cfg.dedupe)
        if cfg.dedupe:
            data = drop_duplicate_rows(data)
    diagnostics = {"duplicate_rows": duplicates, "deduplicated": bool(cfg.dedupe and duplicates)}

    whitened, k = _reduce(data, cfg)
    if k == 1:
        logger.debug("single major component; reporting ID 1 as degenerate")
        return IdEstimate(
            estimator=ESTIMATOR_NAME, value=1.0, sample_count=data.shape[0], retained_k=1,
            alpha_star=None, curve=SeparabilityCurve(), degenerate=True, diagnostics=diagnostics,
        )

    cloud = project_to_sphere(whitened)
    curve = separability_curve(cloud, cfg.alpha_grid)
    alpha_star = select_alpha(curve, cfg.selection_factor)
    diagnostics["valid_alphas"] = len(curve.valid_entries)
    return IdEstimate(
        estimator=ESTIMATOR_NAME,
        value=curve.n_alpha_at(alpha_star),
        sample_count=data.shape[0],
        retained_k=k,
        alpha_star=alpha_star,
        curve=curve,
        diagnostics=diagnostics,
    )
