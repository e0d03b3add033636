"""
Mitigation artifacts derived from a class-wise ID profile.

Every ID-based scheme reads only the normalized shares d̂_c, so multiplying all raw IDs
by a positive constant leaves the derived numbers unchanged. The cardinality-based
counterparts (instance-balanced sampling, inverse-frequency weights, LDAM's C/N^{1/4},
empirical priors) take plain per-class counts and exist for side-by-side comparison.
"""

import logging
from dataclasses import replace
from typing import Any, Dict, Optional, Sequence

import numpy as np

from ..errors import ConfigError, DegenerateClass, DomainError, EmptyClass, ShapeMismatch
from ..models import ClassIdProfile, MitigationKind, MitigationReport

logger = logging.getLogger(__name__)

LDAM_MAX_MARGIN = 0.5
DEFAULT_DRO_SCALE = 0.5
DEFAULT_LDAM_SCALE = 0.5

TRANSFORM_MODES = ("none", "reversed", "shuffled")


def _floats(values: np.ndarray) -> tuple:
    return tuple(float(v) for v in values)


def _provenance(profile: Optional[ClassIdProfile]) -> Dict[str, Any]:
    if profile is None:
        return {"source": "counts", "timestamp": None}
    return {
        "source": "profile",
        "estimator": dict(profile.estimator_tag),
        "transform": profile.transform,
        "timestamp": None,
    }


def stamp(report: MitigationReport, timestamp: Optional[str]) -> MitigationReport:
    """Return a copy of the report carrying the given provenance timestamp."""
    return replace(report, provenance={**report.provenance, "timestamp": timestamp})


def _counts_array(counts: Sequence[int]) -> np.ndarray:
    array = np.asarray(counts, dtype=np.float64)
    if array.ndim != 1 or array.size == 0:
        raise ShapeMismatch("counts must be a non-empty 1-D sequence")
    empty = np.flatnonzero(array < 1)
    if empty.size:
        raise EmptyClass(f"classes {empty.tolist()} have no samples")
    return array


# --- sampling -----------------------------------------------------------------

def instance_balanced_probs(counts: Sequence[int]) -> MitigationReport:
    """p_c = N_c / Σ N: every sample equally likely."""
    n = _counts_array(counts)
    return MitigationReport(
        kind=MitigationKind.SAMPLING,
        values=_floats(n / n.sum()),
        params={"scheme": "instance_balanced"},
        provenance=_provenance(None),
    )


def class_balanced_probs(counts: Sequence[int]) -> MitigationReport:
    n = _counts_array(counts)
    uniform = np.full(n.size, 1.0 / n.size)
    return MitigationReport(
        kind=MitigationKind.SAMPLING,
        values=_floats(uniform),
        params={"scheme": "class_balanced"},
        provenance=_provenance(None),
        extras={"per_sample": _floats(uniform / n)},
    )


def id_sampling_probs(profile: ClassIdProfile) -> MitigationReport:
    """
    Two-stage sampling: draw class c with p_c = d̂_c, then a sample uniformly within it.

    ``extras["per_sample"]`` holds p_x = p_c / N_c for a sample x of class c.
    """
    p = profile.normalized_array()
    counts = _counts_array(profile.counts)
    return MitigationReport(
        kind=MitigationKind.SAMPLING,
        values=_floats(p),
        params={"scheme": "id"},
        provenance=_provenance(profile),
        extras={"per_sample": _floats(p / counts)},
    )


def progressive_blend(p_a: Sequence[float], p_b: Sequence[float], t: float, total: float) -> np.ndarray:
    """Linear schedule from ``p_a`` at t=0 to ``p_b`` at t=total."""
    a = np.asarray(p_a, dtype=np.float64)
    b = np.asarray(p_b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ShapeMismatch(f"cannot blend shapes {a.shape} and {b.shape}")
    if total <= 0 or not 0 <= t <= total:
        raise DomainError(f"blend position must satisfy 0 <= t <= T with T > 0, got t={t}, T={total}")
    for name, p in (("p_a", a), ("p_b", b)):
        if np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
            raise DomainError(f"{name} must be a probability vector")
    if t == 0:
        return a.copy()
    if t == total:
        return b.copy()
    share = t / total
    return (1.0 - share) * a + share * b


# --- reweighting ----------------------------------------------------------------

def loss_weights(profile: ClassIdProfile) -> MitigationReport:
    """w_c = d̂_c · |C|; the weights average to 1."""
    d_hat = profile.normalized_array()
    return MitigationReport(
        kind=MitigationKind.LOSS_WEIGHTS,
        values=_floats(d_hat * d_hat.size),
        params={"scheme": "id"},
        provenance=_provenance(profile),
    )


def inverse_cardinality_weights(counts: Sequence[int]) -> MitigationReport:
    """w_c = min N / N_c: the tail class keeps weight 1."""
    n = _counts_array(counts)
    return MitigationReport(
        kind=MitigationKind.LOSS_WEIGHTS,
        values=_floats(n.min() / n),
        params={"scheme": "inverse_cardinality"},
        provenance=_provenance(None),
    )


# --- margins ----------------------------------------------------------------------

def ldam_margins(profile: ClassIdProfile) -> MitigationReport:
    """Δ_c = 0.5 · d̂_c / max d̂; the highest-ID class gets the full 0.5."""
    d_hat = profile.normalized_array()
    top = d_hat.max()
    if top <= 0:
        raise DegenerateClass("all normalized IDs are zero")
    return MitigationReport(
        kind=MitigationKind.LDAM_MARGINS,
        values=_floats(LDAM_MAX_MARGIN * (d_hat / top)),
        params={"scheme": "id", "max_margin": LDAM_MAX_MARGIN},
        provenance=_provenance(profile),
    )


def ldam_cardinality_margins(counts: Sequence[int], scale_C: float = DEFAULT_LDAM_SCALE) -> MitigationReport:
    if not scale_C > 0:
        raise DomainError(f"LDAM scale must be > 0, got {scale_C}")
    n = _counts_array(counts)
    return MitigationReport(
        kind=MitigationKind.LDAM_MARGINS,
        values=_floats(scale_C / n ** 0.25),
        params={"scheme": "cardinality", "scale_C": float(scale_C)},
        provenance=_provenance(None),
    )


def dro_margins(profile: ClassIdProfile, scale_C: float = DEFAULT_DRO_SCALE) -> MitigationReport:
    """
    Δ_c = d̂_c · C. The learnable variant starts its per-class ε from d̂ itself, exposed
    as ``extras["epsilon_init"]``.
    """
    if not scale_C > 0:
        raise DomainError(f"DRO scale must be > 0, got {scale_C}")
    d_hat = profile.normalized_array()
    return MitigationReport(
        kind=MitigationKind.DRO_MARGINS,
        values=_floats(d_hat * scale_C),
        params={"scheme": "id", "scale_C": float(scale_C)},
        provenance=_provenance(profile),
        extras={"epsilon_init": tuple(profile.normalized)},
    )


# --- logit adjustment -------------------------------------------------------------------

def logit_adjust_deltas(profile: ClassIdProfile) -> MitigationReport:
    """Δ_y = (1/d̂_y) / Σ 1/d̂_c, used in place of empirical class frequencies."""
    d_hat = profile.normalized_array()
    zero = np.flatnonzero(d_hat <= 0)
    if zero.size:
        raise DegenerateClass(f"classes {zero.tolist()} have zero normalized ID")
    inverse = 1.0 / d_hat
    return MitigationReport(
        kind=MitigationKind.LOGIT_DELTAS,
        values=_floats(inverse / inverse.sum()),
        params={"scheme": "id"},
        provenance=_provenance(profile),
    )


def frequency_priors(counts: Sequence[int]) -> MitigationReport:
    n = _counts_array(counts)
    return MitigationReport(
        kind=MitigationKind.LOGIT_DELTAS,
        values=_floats(n / n.sum()),
        params={"scheme": "frequency_priors"},
        provenance=_provenance(None),
    )


# --- measures ---------------------------------------------------------------------------

def imbalance_ratio(counts: Sequence[int]) -> float:
    """Head-class cardinality over tail-class cardinality."""
    n = _counts_array(counts)
    return float(n.max() / n.min())


def id_imbalance_ratio(profile: ClassIdProfile) -> float:
    raw = np.asarray(profile.raw)
    if raw.min() <= 0:
        raise DegenerateClass("ID imbalance ratio needs every class ID > 0")
    return float(raw.max() / raw.min())


# --- failure-case transforms -------------------------------------------------------------

def transform_profile(
    profile: ClassIdProfile,
    mode: str,
    seed: Optional[int] = None,
    permutation: Optional[Sequence[int]] = None,
) -> ClassIdProfile:
    """
    Re-assign the raw IDs across classes.

    ``reversed`` gives the class with the largest ID the smallest value, the second largest
    the second smallest, and so on (ties keep class order). ``shuffled`` permutes raw
    values with ``permutation`` if given, else a permutation drawn from ``seed``.
    """
    if mode == "none":
        return profile
    raw = np.asarray(profile.raw, dtype=np.float64)
    if mode == "reversed":
        order = np.argsort(raw, kind="stable")
        source = np.empty_like(order)
        source[order] = order[::-1]
        return profile.reassigned(source, transform="reversed")
    if mode == "shuffled":
        if permutation is None:
            if seed is None:
                raise ConfigError("shuffled transform needs a seed or an explicit permutation")
            permutation = np.random.default_rng(seed).permutation(raw.size)
        perm = np.asarray(permutation, dtype=np.int64)
        if sorted(perm.tolist()) != list(range(raw.size)):
            raise ShapeMismatch(f"{perm.tolist()} is not a permutation of {raw.size} classes")
        logger.debug("shuffling class IDs with permutation %s", perm.tolist())
        return profile.reassigned(perm, transform=f"shuffled(seed={seed})" if seed is not None else "shuffled")
    raise ConfigError(f"unknown transform {mode!r}; choose from {', '.join(TRANSFORM_MODES)}")


# --- dispatch ------------------------------------------------------------------------------

WEIGHT_KINDS = ("sampling", "loss", "ldam", "dro", "logit")


def derive_report(
    kind: str,
    profile: ClassIdProfile,
    dro_scale: float = DEFAULT_DRO_SCALE,
    ldam_scale: float = DEFAULT_LDAM_SCALE,
    baseline: bool = False,
    blend: Optional[tuple] = None,
) -> MitigationReport:
    """
    Build one artifact from a profile.

    With ``baseline`` the cardinality counterpart is produced from ``profile.counts``.
    ``blend=(t, T)`` (sampling only) interpolates from instance-balanced to ID-based
    class probabilities.
    """
    if kind not in WEIGHT_KINDS:
        raise ConfigError(f"unknown weights kind {kind!r}; choose from {', '.join(WEIGHT_KINDS)}")
    if blend is not None and (kind != "sampling" or baseline):
        raise ConfigError("--blend applies only to ID-based sampling")

    if baseline:
        if kind == "dro":
            raise ConfigError("dro margins have no cardinality baseline")
        builders = {
            "sampling": lambda: instance_balanced_probs(profile.counts),
            "loss": lambda: inverse_cardinality_weights(profile.counts),
            "ldam": lambda: ldam_cardinality_margins(profile.counts, ldam_scale),
            "logit": lambda: frequency_priors(profile.counts),
        }
        return builders[kind]()

    if kind == "sampling":
        report = id_sampling_probs(profile)
        if blend is None:
            return report
        t, total = blend
        start = instance_balanced_probs(profile.counts).values_array()
        blended = progressive_blend(start, report.values_array(), t, total)
        counts = np.asarray(profile.counts, dtype=np.float64)
        return replace(
            report,
            values=_floats(blended),
            params={"scheme": "progressive", "t": float(t), "T": float(total)},
            extras={"per_sample": _floats(blended / counts)},
        )
    if kind == "loss":
        return loss_weights(profile)
    if kind == "ldam":
        return ldam_margins(profile)
    if kind == "dro":
        return dro_margins(profile, dro_scale)
    return logit_adjust_deltas(profile)
