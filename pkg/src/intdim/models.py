"""
Data models for intrinsic dimension estimation and class-imbalance artifacts.

A SampleMatrix is a plain float64 ``numpy.ndarray`` of shape (n, D), one row per
sample; ``as_sample_matrix`` is the single gate every public operation passes its
input through.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InvalidSampleMatrix, ShapeMismatch


def as_sample_matrix(values: Any, name: str = "data") -> np.ndarray:
    """Validate and coerce ``values`` to a finite (n, D) float64 array."""
    try:
        array = np.asarray(values, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InvalidSampleMatrix(f"{name} is not numeric: {exc}") from exc
    if array.ndim == 1:
        array = array.reshape(-1, 1)
    if array.ndim != 2:
        raise InvalidSampleMatrix(f"{name} must be 2-D, got shape {array.shape}")
    n, dim = array.shape
    if n < 1 or dim < 1:
        raise InvalidSampleMatrix(f"{name} must have n >= 1 and D >= 1, got {array.shape}")
    if not np.all(np.isfinite(array)):
        raise InvalidSampleMatrix(f"{name} contains NaN or Inf values")
    return np.ascontiguousarray(array)


@dataclass
class Spectrum:
    """PCA spectrum of a centered cloud"""
    eigenvalues: np.ndarray   # (r,), non-increasing, >= 0
    components: np.ndarray    # (D, r), orthonormal columns
    projections: np.ndarray   # (n, r), samples in component coordinates


@dataclass(frozen=True)
class CurveEntry:
    """One α of the separability curve; ``n_alpha`` is None when the entry is invalid"""
    alpha: float
    p_bar: float
    n_alpha: Optional[float]

    @property
    def valid(self) -> bool:
        return self.n_alpha is not None


@dataclass
class SeparabilityCurve:
    entries: List[CurveEntry] = field(default_factory=list)

    @property
    def valid_entries(self) -> List[CurveEntry]:
        return [entry for entry in self.entries if entry.valid]

    def n_alpha_at(self, alpha: float) -> Optional[float]:
        for entry in self.entries:
            if entry.alpha == alpha:
                return entry.n_alpha
        return None

    def to_dict(self) -> List[Dict[str, Any]]:
        return [
            {"alpha": e.alpha, "p_bar": e.p_bar, "n_alpha": e.n_alpha}
            for e in self.entries
        ]


@dataclass
class IdEstimate:
    """Result of a single estimator run"""
    estimator: str
    value: float
    sample_count: int
    retained_k: int
    alpha_star: Optional[float] = None
    curve: Optional[SeparabilityCurve] = None
    degenerate: bool = False
    per_point: Optional[np.ndarray] = None
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "estimator": self.estimator,
            "value": float(self.value),
            "alpha_star": self.alpha_star,
            "retained_k": int(self.retained_k),
            "degenerate": bool(self.degenerate),
            "sample_count": int(self.sample_count),
            "curve": self.curve.to_dict() if self.curve is not None else None,
            "diagnostics": dict(self.diagnostics),
        }


@dataclass
class LabeledDataset:
    """
    Samples plus one integer class id per row.

    Without ``label_space`` the class ids must be dense in [0, |C|). A fixed ``label_space``
    (e.g. the 10 CIFAR-10 classes) allows classes with no rows; ids must lie below it.
    """
    data: np.ndarray
    labels: np.ndarray
    label_space: Optional[int] = None

    def __post_init__(self):
        self.data = as_sample_matrix(self.data)
        labels = np.asarray(self.labels)
        if labels.ndim != 1 or labels.shape[0] != self.data.shape[0]:
            raise ShapeMismatch(
                f"labels must be 1-D with {self.data.shape[0]} entries, got shape {labels.shape}"
            )
        if labels.size and not np.issubdtype(labels.dtype, np.integer):
            if not np.all(labels == np.round(labels)):
                raise InvalidSampleMatrix("labels must be integers")
        labels = labels.astype(np.int64)
        if labels.size and labels.min() < 0:
            raise InvalidSampleMatrix("labels must be non-negative")
        if self.label_space is not None:
            if self.label_space < 1 or (labels.size and labels.max() >= self.label_space):
                raise InvalidSampleMatrix(f"class ids must lie in [0, {self.label_space})")
            self.labels = labels
            return
        present = np.bincount(labels) if labels.size else np.zeros(0, dtype=np.int64)
        missing = np.flatnonzero(present == 0)
        if missing.size:
            raise InvalidSampleMatrix(
                f"class ids must be dense in [0, {present.size}); missing {missing.tolist()}"
            )
        self.labels = labels

    @property
    def num_classes(self) -> int:
        if self.label_space is not None:
            return self.label_space
        return int(self.labels.max()) + 1

    def counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.num_classes)

    def class_data(self, label: int) -> np.ndarray:
        return self.data[self.labels == label]


@dataclass(frozen=True)
class ClassIdProfile:
    """Per-class raw IDs and their normalized shares (d_c / Σ d)"""
    raw: Tuple[float, ...]
    normalized: Tuple[float, ...]
    counts: Tuple[int, ...]
    estimator_tag: Dict[str, Any]
    degenerate: Tuple[bool, ...] = ()
    imputed: Tuple[bool, ...] = ()
    transform: str = "none"

    @classmethod
    def from_raw(
        cls,
        raw: Sequence[float],
        counts: Sequence[int],
        estimator_tag: Dict[str, Any],
        degenerate: Optional[Sequence[bool]] = None,
        imputed: Optional[Sequence[bool]] = None,
        transform: str = "none",
    ) -> "ClassIdProfile":
        raw_array = np.asarray(raw, dtype=np.float64)
        if raw_array.ndim != 1 or raw_array.size == 0:
            raise ShapeMismatch("raw IDs must be a non-empty 1-D sequence")
        if len(counts) != raw_array.size:
            raise ShapeMismatch(f"{len(counts)} counts for {raw_array.size} classes")
        if not np.all(np.isfinite(raw_array)) or np.any(raw_array < 0):
            raise InvalidSampleMatrix("raw IDs must be finite and non-negative")
        total = raw_array.sum()
        if total <= 0:
            raise InvalidSampleMatrix("raw IDs sum to zero")
        size = raw_array.size
        return cls(
            raw=tuple(float(v) for v in raw_array),
            normalized=tuple(float(v) for v in raw_array / total),
            counts=tuple(int(c) for c in counts),
            estimator_tag=dict(estimator_tag),
            degenerate=tuple(bool(v) for v in degenerate) if degenerate is not None else (False,) * size,
            imputed=tuple(bool(v) for v in imputed) if imputed is not None else (False,) * size,
            transform=transform,
        )

    @property
    def num_classes(self) -> int:
        return len(self.raw)

    def normalized_array(self) -> np.ndarray:
        return np.asarray(self.normalized, dtype=np.float64)

    def reassigned(self, source: Sequence[int], transform: str) -> "ClassIdProfile":
        """
        Class c takes the ID of class ``source[c]``. The degenerate and imputed flags describe
        the value, so they move with it; counts stay with the class.
        """
        source = np.asarray(source, dtype=np.int64)
        return ClassIdProfile.from_raw(
            np.asarray(self.raw)[source],
            self.counts,
            self.estimator_tag,
            degenerate=np.asarray(self.degenerate, dtype=bool)[source] if self.degenerate else None,
            imputed=np.asarray(self.imputed, dtype=bool)[source] if self.imputed else None,
            transform=transform,
        )


class MitigationKind(Enum):
    SAMPLING = "sampling"
    LOSS_WEIGHTS = "loss_weights"
    LDAM_MARGINS = "ldam_margins"
    DRO_MARGINS = "dro_margins"
    LOGIT_DELTAS = "logit_deltas"


@dataclass(frozen=True)
class MitigationReport:
    """Per-class artifact derived from a profile (or from counts, for baselines)"""
    kind: MitigationKind
    values: Tuple[float, ...]
    params: Dict[str, Any] = field(default_factory=dict)
    provenance: Dict[str, Any] = field(default_factory=dict)
    extras: Dict[str, Tuple[float, ...]] = field(default_factory=dict)

    def values_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.float64)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "values": list(self.values),
            "params": dict(self.params),
            "provenance": dict(self.provenance),
            "extras": {key: list(val) for key, val in self.extras.items()},
        }
