"""
Ground-truth synthetic data.

Gaussian clouds with a known intrinsic dimension d live in the first d coordinates of an
extrinsic D-dimensional space (the remaining D - d columns are exactly zero) and are then
optionally spun by seeded consecutive-pair rotations so that no coordinate stays
constant. All generators are pure functions of their spec and seed.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..errors import ConfigError, DomainError, InsufficientSamples, ShapeMismatch
from ..models import LabeledDataset, as_sample_matrix
from ..numerics import givens_rotate_consecutive

logger = logging.getLogger(__name__)

SeedLike = Union[int, np.random.SeedSequence]

COVARIANCE_KINDS = ("identity", "spherical", "diagonal_fixed_trace", "full_fixed_det")

# ridge added to A·Aᵀ before the determinant is fixed
FULL_COVARIANCE_RIDGE = 0.1
DIAGONAL_VARIANCE_RANGE = (0.5, 1.0)


def derive_seed(seed: SeedLike, index: int) -> int:
    """Integer child seed ``index`` of ``seed``."""
    sequence = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return int(sequence.spawn(index + 1)[index].generate_state(1, dtype=np.uint64)[0])


@dataclass(frozen=True)
class CovarianceKind:
    """Covariance family of the intrinsic block; ``parameter`` is σ, total variance or generalized variance"""
    name: str = "identity"
    parameter: Optional[float] = None

    def __post_init__(self):
        if self.name not in COVARIANCE_KINDS:
            raise ConfigError(f"unknown covariance kind {self.name!r}")
        if self.name != "identity":
            if self.parameter is None or not self.parameter > 0:
                raise DomainError(f"{self.name} covariance needs a parameter > 0, got {self.parameter}")

    @classmethod
    def identity(cls) -> "CovarianceKind":
        return cls("identity")

    @classmethod
    def spherical(cls, sigma: float) -> "CovarianceKind":
        return cls("spherical", float(sigma))

    @classmethod
    def diagonal_fixed_trace(cls, total_var: float) -> "CovarianceKind":
        return cls("diagonal_fixed_trace", float(total_var))

    @classmethod
    def full_fixed_det(cls, gen_var: float) -> "CovarianceKind":
        return cls("full_fixed_det", float(gen_var))


@dataclass(frozen=True)
class GaussianSpec:
    intrinsic_d: int
    extrinsic_D: int
    n: int
    covariance: CovarianceKind = field(default_factory=CovarianceKind.identity)
    rotate: bool = True
    seed: int = 0
    rotation_passes: int = 1

    def __post_init__(self):
        errors = self.validate()
        if errors:
            raise ConfigError("; ".join(errors), stage="synth")

    def validate(self):
        errors = []
        if self.intrinsic_d < 1:
            errors.append("intrinsic_d must be >= 1")
        if self.extrinsic_D < self.intrinsic_d:
            errors.append("extrinsic_D must be >= intrinsic_d")
        if self.n < 1:
            errors.append("n must be >= 1")
        if self.rotation_passes < 0:
            errors.append("rotation_passes must be >= 0")
        return errors


@dataclass(frozen=True)
class NoiseSpec:
    sigma: float
    clip_lo: float = 0.0
    clip_hi: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if not self.sigma >= 0:
            raise DomainError(f"noise sigma must be >= 0, got {self.sigma}")
        if not self.clip_lo < self.clip_hi:
            raise DomainError(f"clip range [{self.clip_lo}, {self.clip_hi}] is empty")


@dataclass(frozen=True)
class LongTailSpec:
    num_classes: int
    n_max: int
    rho: float
    seed: int = 0

    def __post_init__(self):
        if self.num_classes < 2:
            raise DomainError("a long-tail profile needs at least 2 classes")
        if self.n_max < 1:
            raise DomainError("n_max must be >= 1")
        if not self.rho >= 1:
            raise DomainError(f"imbalance ratio must be >= 1, got {self.rho}")


def make_covariance(kind: CovarianceKind, d: int, seed: SeedLike = 0) -> np.ndarray:
    if d < 1:
        raise DomainError("covariance dimension must be >= 1")
    if kind.name == "identity":
        return np.eye(d)
    if kind.name == "spherical":
        return kind.parameter * np.eye(d)

    rng = np.random.default_rng(seed)
    if kind.name == "diagonal_fixed_trace":
        variances = rng.uniform(*DIAGONAL_VARIANCE_RANGE, size=d)
        return np.diag(variances * (kind.parameter / variances.sum()))

    a = rng.standard_normal((d, d))
    gram = a @ a.T + FULL_COVARIANCE_RIDGE * np.eye(d)
    sign, logdet = np.linalg.slogdet(gram)
    if sign <= 0:
        raise DomainError("generated covariance is not positive definite")
    gram *= np.exp((np.log(kind.parameter) - logdet) / d)
    return (gram + gram.T) / 2


def embed_and_rotate(
    data: np.ndarray,
    seed: SeedLike,
    passes: int = 1,
    extrinsic_D: Optional[int] = None,
) -> np.ndarray:
    """
    Zero-pad ``data`` to ``extrinsic_D`` columns (if given) and apply ``passes`` rounds of
    consecutive-pair rotations with angles uniform on [0, 2π).
    """
    data = as_sample_matrix(data)
    if extrinsic_D is not None:
        if extrinsic_D < data.shape[1]:
            raise ShapeMismatch(f"cannot embed {data.shape[1]} columns into {extrinsic_D}")
        padded = np.zeros((data.shape[0], extrinsic_D))
        padded[:, :data.shape[1]] = data
        data = padded

    rng = np.random.default_rng(seed)
    pairs = data.shape[1] - 1
    for _ in range(passes):
        data = givens_rotate_consecutive(data, rng.uniform(0.0, 2 * np.pi, size=pairs))
    return data


def sample_gaussian(spec: GaussianSpec) -> np.ndarray:
    covariance_seed, sample_seed, rotation_seed = np.random.SeedSequence(spec.seed).spawn(3)
    d = spec.intrinsic_d
    covariance = make_covariance(spec.covariance, d, covariance_seed)

    z = np.random.default_rng(sample_seed).standard_normal((spec.n, d))
    if spec.covariance.name == "identity":
        block = z
    elif spec.covariance.name == "spherical":
        block = z * np.sqrt(spec.covariance.parameter)
    else:
        block = z @ np.linalg.cholesky(covariance).T

    data = np.zeros((spec.n, spec.extrinsic_D))
    data[:, :d] = block
    if spec.rotate:
        data = embed_and_rotate(data, rotation_seed, passes=spec.rotation_passes)
    logger.debug("sampled %s", spec)
    return data


def sample_uniform_cube(d: int, D: int, n: int, seed: SeedLike = 0, rotate: bool = False) -> np.ndarray:
    """Uniform points of [0, 1]^d in the first d of D coordinates."""
    if d < 1 or D < d or n < 1:
        raise ConfigError(f"need 1 <= d <= D and n >= 1, got d={d}, D={D}, n={n}")
    sample_seed, rotation_seed = np.random.SeedSequence(seed).spawn(2)
    data = np.zeros((n, D))
    data[:, :d] = np.random.default_rng(sample_seed).uniform(size=(n, d))
    if rotate:
        data = embed_and_rotate(data, rotation_seed)
    return data


def minmax_scale(data: np.ndarray) -> np.ndarray:
    """Map the whole array affinely onto [0, 1]."""
    data = as_sample_matrix(data)
    lo, hi = data.min(), data.max()
    if hi == lo:
        return np.zeros_like(data)
    return (data - lo) / (hi - lo)


def add_noise(data: np.ndarray, spec: NoiseSpec) -> np.ndarray:
    """clip(data + N(0, σ²), lo, hi) elementwise."""
    data = as_sample_matrix(data)
    if spec.sigma == 0:
        return np.clip(data, spec.clip_lo, spec.clip_hi)
    noise = np.random.default_rng(spec.seed).normal(0.0, spec.sigma, size=data.shape)
    return np.clip(data + noise, spec.clip_lo, spec.clip_hi)


def longtail_counts(spec: LongTailSpec) -> Tuple[int, ...]:
    """N_c = floor(n_max · ρ^(-c/(|C|-1))), head and tail forced to n_max and floor(n_max/ρ)."""
    tail = int(np.floor(spec.n_max / spec.rho))
    if tail < 1:
        raise DomainError(f"n_max={spec.n_max} with rho={spec.rho} leaves an empty tail class")
    exponents = -np.arange(spec.num_classes) / (spec.num_classes - 1)
    counts = np.floor(spec.n_max * spec.rho ** exponents).astype(np.int64)
    counts[0] = spec.n_max
    counts[-1] = tail
    return tuple(int(c) for c in counts)


def subsample_longtail(dataset: LabeledDataset, counts: Sequence[int], seed: SeedLike = 0) -> LabeledDataset:
    """Keep ``counts[c]`` rows of every class, drawn without replacement; row order is preserved."""
    if len(counts) != dataset.num_classes:
        raise ShapeMismatch(f"{len(counts)} counts for {dataset.num_classes} classes")
    rng = np.random.default_rng(seed)
    keep = []
    for label, wanted in enumerate(counts):
        if wanted < 1:
            raise DomainError(f"class {label} would be empty")
        rows = np.flatnonzero(dataset.labels == label)
        if wanted > rows.size:
            raise InsufficientSamples(label, int(wanted), int(rows.size))
        keep.append(rng.choice(rows, size=int(wanted), replace=False))
    selected = np.sort(np.concatenate(keep))
    return LabeledDataset(
        data=dataset.data[selected], labels=dataset.labels[selected], label_space=dataset.label_space
    )


def make_labeled_synthetic(
    class_dims: Sequence[int],
    counts: Sequence[int],
    D: int,
    seed: SeedLike = 0,
    rotate: bool = True,
) -> LabeledDataset:
    """One isotropic Gaussian block per class, each with its own intrinsic dimension."""
    if len(class_dims) != len(counts):
        raise ShapeMismatch(f"{len(class_dims)} class dimensions for {len(counts)} counts")
    blocks, labels = [], []
    for label, (d, n) in enumerate(zip(class_dims, counts)):
        spec = GaussianSpec(
            intrinsic_d=int(d), extrinsic_D=D, n=int(n), rotate=rotate, seed=derive_seed(seed, label)
        )
        blocks.append(sample_gaussian(spec))
        labels.append(np.full(int(n), label, dtype=np.int64))
    return LabeledDataset(data=np.vstack(blocks), labels=np.concatenate(labels))
