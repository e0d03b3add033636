"""
Nearest-neighbor intrinsic dimension estimators.

MLE (Levina & Bickel, 2004) with the MacKay & Ghahramani (2005) correction:
    per point  m_k(x)^-1 = 1/(k-1) * sum_{j<k} ln(T_k(x) / T_j(x))
    corrected  d = 1 / mean_x(m_k(x)^-1)
    plain      d = mean_x(m_k(x))

TLE (Amsaleg et al., 2019) uses every pairwise distance inside the k-neighborhood of a
point, reflecting each neighbor pair through the query to obtain 2k^2 local distance
measurements; the per-point estimate is minus their count over the sum of their log
ratios to the neighborhood radius. Measurements below ε·r are dropped.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from ..config import KnnConfig
from ..errors import AllDegenerate, TooFewSamples
from ..models import IdEstimate, as_sample_matrix

logger = logging.getLogger(__name__)

DISTANCE_BLOCK_ROWS = 1024


@dataclass
class KnnResult:
    distances: np.ndarray   # (n, k) ascending
    indices: np.ndarray     # (n, k)
    zero_distance_rows: int


def knn_distances(data: np.ndarray, k: int) -> KnnResult:
    """Exact k nearest neighbors of every point among the other points."""
    data = as_sample_matrix(data)
    n = data.shape[0]
    if n <= k:
        raise TooFewSamples(f"need more than k={k} samples, got {n}")

    distances = np.empty((n, k))
    indices = np.empty((n, k), dtype=np.int64)
    for start in range(0, n, DISTANCE_BLOCK_ROWS):
        stop = min(start + DISTANCE_BLOCK_ROWS, n)
        block = cdist(data[start:stop], data, metric="euclidean")
        rows = np.arange(stop - start)
        block[rows, start + rows] = np.inf
        nearest = np.argpartition(block, k - 1, axis=1)[:, :k]
        nearest_d = np.take_along_axis(block, nearest, axis=1)
        # ascending by distance, then by index
        order = np.lexsort((nearest, nearest_d), axis=1)
        indices[start:stop] = np.take_along_axis(nearest, order, axis=1)
        distances[start:stop] = np.take_along_axis(nearest_d, order, axis=1)

    zero_rows = int(np.count_nonzero(distances[:, 0] == 0))
    if zero_rows:
        logger.debug("%d points have a coincident neighbor", zero_rows)
    return KnnResult(distances=distances, indices=indices, zero_distance_rows=zero_rows)


def estimate_mle(data: np.ndarray, cfg: KnnConfig = None) -> IdEstimate:
    cfg = cfg or KnnConfig.default()
    data = as_sample_matrix(data)
    neighbors = knn_distances(data, cfg.k)
    dists = neighbors.distances
    k = cfg.k

    zero_kth = dists[:, -1] == 0
    zero_inner = ~zero_kth & (dists[:, 0] == 0)
    usable = ~(zero_kth | zero_inner)
    if not usable.any():
        raise AllDegenerate("every point has a zero neighbor distance")

    t = dists[usable]
    inverse = np.log(t[:, -1:] / t[:, :-1]).sum(axis=1) / (k - 1)
    flat = inverse == 0
    inverse = inverse[~flat]
    if inverse.size == 0:
        raise AllDegenerate("every neighborhood has equal distances")

    per_point = 1.0 / inverse
    corrected = float(1.0 / inverse.mean())
    plain = float(per_point.mean())
    value = corrected if cfg.apply_correction else plain
    return IdEstimate(
        estimator="mle",
        value=value,
        sample_count=data.shape[0],
        retained_k=data.shape[1],
        per_point=per_point,
        diagnostics={
            "k": k,
            "apply_correction": cfg.apply_correction,
            "mle_corrected": corrected,
            "mle_uncorrected": plain,
            "excluded_zero_kth": int(zero_kth.sum()),
            "excluded_zero_neighbor": int(zero_inner.sum()),
            "excluded_flat": int(flat.sum()),
            "zero_distance_rows": neighbors.zero_distance_rows,
        },
    )


def _tle_point(neighborhood: np.ndarray, dists: np.ndarray, epsilon: float) -> float:
    """Tight-locality estimate for one query; NaN when its radius is zero."""
    r = dists[-1]
    if r == 0:
        return np.nan
    k = dists.size
    eps = epsilon * r
    v = cdist(neighborhood, neighborhood, metric="euclidean")
    di = np.repeat(dists[:, None], k, axis=1)
    dj = di.T
    di2, dj2, v2, r2 = di ** 2, dj ** 2, v ** 2, r ** 2
    z2 = np.clip(2 * di2 + 2 * dj2 - v2, 0.0, None)

    with np.errstate(divide="ignore", invalid="ignore"):
        base_s = di2 + v2 - dj2
        base_t = di2 + z2 - dj2
        s = r * (np.sqrt(np.clip(base_s ** 2 + 4 * v2 * (r2 - di2), 0.0, None)) - base_s) / (2 * (r2 - di2))
        t = r * (np.sqrt(np.clip(base_t ** 2 + 4 * z2 * (r2 - di2), 0.0, None)) - base_t) / (2 * (r2 - di2))

        # neighbors lying on the boundary sphere
        on_rim = dists == r
        s[on_rim, :] = r * v2[on_rim, :] / (r2 + v2[on_rim, :] - dj2[on_rim, :])
        t[on_rim, :] = r * z2[on_rim, :] / (r2 + z2[on_rim, :] - dj2[on_rim, :])

        at_query_i = di == 0
        s[at_query_i] = dj[at_query_i]
        t[at_query_i] = dj[at_query_i]
        at_query_j = dj == 0
        s[at_query_j] = r * v[at_query_j] / (r + v[at_query_j])
        t[at_query_j] = r * v[at_query_j] / (r + v[at_query_j])

        coincident = v == 0
        np.fill_diagonal(coincident, False)
        s[coincident] = r
        t[coincident] = r

        tiny = (t < eps) | (s < eps)
        np.fill_diagonal(tiny, False)
        s[tiny] = r
        t[tiny] = r

        log_s = np.log(s / r)
        log_t = np.log(t / r)
    np.fill_diagonal(log_s, 0.0)
    np.fill_diagonal(log_t, 0.0)

    near = dists < eps
    s2 = np.log(dists[~near] / r).sum()
    measurements = k ** 2 - int(tiny.sum()) - int(near.sum()) - int(coincident.sum())
    total = log_s.sum() + log_t.sum() + 2 * s2
    if not np.isfinite(total) or total == 0:
        return np.nan
    return float(-2 * measurements / total)


def _aggregate(values: np.ndarray, how: str) -> float:
    if how == "harmonic":
        return float(values.size / np.sum(1.0 / values))
    if how == "median":
        return float(np.median(values))
    return float(values.mean())


def estimate_tle(data: np.ndarray, cfg: KnnConfig = None) -> IdEstimate:
    cfg = cfg or KnnConfig.default()
    data = as_sample_matrix(data)
    neighbors = knn_distances(data, cfg.k)

    per_point = np.array([
        _tle_point(data[idx], dists, cfg.tle_epsilon)
        for idx, dists in zip(neighbors.indices, neighbors.distances)
    ])
    usable = np.isfinite(per_point) & (per_point > 0)
    if not usable.any():
        raise AllDegenerate("no point produced a finite tight-locality estimate")

    value = _aggregate(per_point[usable], cfg.tle_aggregation)
    return IdEstimate(
        estimator="tle",
        value=value,
        sample_count=data.shape[0],
        retained_k=data.shape[1],
        per_point=per_point,
        diagnostics={
            "k": cfg.k,
            "tle_epsilon": cfg.tle_epsilon,
            "aggregation": cfg.tle_aggregation,
            "excluded_points": int((~usable).sum()),
            "zero_distance_rows": neighbors.zero_distance_rows,
        },
    )
