"""
JSON reports for class-wise ID runs.

A report carries everything needed to replay the derived artifacts without re-estimating:
the estimator with its full configuration, per-class records, derived artifacts keyed by
kind, the seed and the tool version. Floats are written with Python's shortest round-trip
representation, so ``read_report(write_report(r)) == r``.
"""

import json
import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from utils.helpers import PathLike, atomic_write_text

from ..errors import SchemaError
from ..models import ClassIdProfile, IdEstimate, MitigationReport
from ..version import __version__

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
NORMALIZATION_TOLERANCE = 1e-9

# config keys that must be echoed for each estimator family
REQUIRED_CONFIG_KEYS = {
    "fishers": ("conditional_number", "alpha_grid", "selection_factor"),
    "mle": ("k", "apply_correction"),
    "tle": ("k", "tle_epsilon", "tle_aggregation"),
}


@dataclass
class ClassRecord:
    label: int
    count: int
    id_raw: float
    id_norm: float
    degenerate: bool = False
    imputed: bool = False
    alpha_star: Optional[float] = None
    retained_k: Optional[int] = None


@dataclass
class ReportJson:
    estimator: Dict[str, Any]
    classes: List[ClassRecord]
    artifacts: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    seed: Optional[int] = None
    transform: str = "none"
    fallback: bool = False
    measures: Dict[str, Optional[float]] = field(default_factory=dict)
    source: Dict[str, Any] = field(default_factory=dict)
    timestamp: Optional[str] = None
    tool_version: str = __version__
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ReportJson":
        errors = validate_report(data)
        if errors:
            path, message = errors[0]
            raise SchemaError(message, path)
        payload = dict(data)
        payload["classes"] = [ClassRecord(**record) for record in data["classes"]]
        return cls(**payload)

    def profile(self) -> ClassIdProfile:
        """Rebuild the class-wise profile the artifacts were derived from."""
        return ClassIdProfile.from_raw(
            [c.id_raw for c in self.classes],
            [c.count for c in self.classes],
            estimator_tag={**self.estimator, "fallback": self.fallback},
            degenerate=[c.degenerate for c in self.classes],
            imputed=[c.imputed for c in self.classes],
            transform=self.transform,
        )

    def with_artifacts(self, artifacts: Sequence[MitigationReport]) -> "ReportJson":
        merged = dict(self.artifacts)
        for artifact in artifacts:
            merged[artifact.kind.value] = artifact.to_dict()
        return ReportJson(**{**self.__dict__, "artifacts": merged})


def build_report(
    profile: ClassIdProfile,
    estimates: Optional[Sequence[Optional[IdEstimate]]] = None,
    artifacts: Sequence[MitigationReport] = (),
    seed: Optional[int] = None,
    measures: Optional[Dict[str, Optional[float]]] = None,
    source: Optional[Dict[str, Any]] = None,
    timestamp: Optional[str] = None,
) -> ReportJson:
    tag = dict(profile.estimator_tag)
    fallback = bool(tag.pop("fallback", False))
    estimates = list(estimates) if estimates is not None else [None] * profile.num_classes
    classes = []
    for label in range(profile.num_classes):
        estimate = estimates[label]
        classes.append(ClassRecord(
            label=label,
            count=profile.counts[label],
            id_raw=profile.raw[label],
            id_norm=profile.normalized[label],
            degenerate=profile.degenerate[label],
            imputed=profile.imputed[label],
            alpha_star=estimate.alpha_star if estimate is not None else None,
            retained_k=int(estimate.retained_k) if estimate is not None else None,
        ))
    report = ReportJson(
        estimator=tag,
        classes=classes,
        seed=seed,
        transform=profile.transform,
        fallback=fallback,
        measures=dict(measures or {}),
        source=dict(source or {}),
        timestamp=timestamp,
    )
    return report.with_artifacts(artifacts)


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def validate_report(data: Any) -> List[Tuple[str, str]]:
    """Return (field path, problem) pairs; empty when the report is well-formed."""
    if not isinstance(data, dict):
        return [("$", "report must be a JSON object")]
    errors = []

    if data.get("schema_version") != SCHEMA_VERSION:
        errors.append(("schema_version", f"expected {SCHEMA_VERSION}, got {data.get('schema_version')!r}"))
    if not isinstance(data.get("tool_version"), str):
        errors.append(("tool_version", "missing or not a string"))
    seed = data.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
        errors.append(("seed", "must be an integer or null"))

    estimator = data.get("estimator")
    if not isinstance(estimator, dict):
        errors.append(("estimator", "missing estimator"))
    else:
        name = estimator.get("name")
        if name not in REQUIRED_CONFIG_KEYS:
            errors.append(("estimator.name", f"unknown estimator {name!r}"))
        config = estimator.get("config")
        if not isinstance(config, dict):
            errors.append(("estimator.config", "missing estimator config"))
        elif name in REQUIRED_CONFIG_KEYS:
            for key in REQUIRED_CONFIG_KEYS[name]:
                if key not in config:
                    errors.append((f"estimator.config.{key}", "missing"))

    classes = data.get("classes")
    if not isinstance(classes, list) or not classes:
        errors.append(("classes", "must be a non-empty list"))
        return errors
    for i, record in enumerate(classes):
        path = f"classes[{i}]"
        if not isinstance(record, dict):
            errors.append((path, "must be an object"))
            continue
        if record.get("label") != i:
            errors.append((f"{path}.label", f"expected {i}, got {record.get('label')!r}"))
        count = record.get("count")
        if not isinstance(count, int) or isinstance(count, bool) or count < 1:
            errors.append((f"{path}.count", "must be a positive integer"))
        for key in ("id_raw", "id_norm"):
            if not _is_number(record.get(key)) or record[key] < 0:
                errors.append((f"{path}.{key}", "must be a non-negative number"))
        if not isinstance(record.get("degenerate"), bool):
            errors.append((f"{path}.degenerate", "must be a boolean"))
        unknown = set(record) - set(ClassRecord.__dataclass_fields__)
        if unknown:
            errors.append((path, f"unknown fields {sorted(unknown)}"))
    if not errors:
        total = sum(record["id_norm"] for record in classes)
        if abs(total - 1.0) > NORMALIZATION_TOLERANCE:
            errors.append(("classes[*].id_norm", f"sums to {total!r}, not 1"))

    artifacts = data.get("artifacts", {})
    if not isinstance(artifacts, dict):
        errors.append(("artifacts", "must be an object keyed by kind"))
    else:
        for kind, artifact in artifacts.items():
            values = artifact.get("values") if isinstance(artifact, dict) else None
            if not isinstance(values, list) or len(values) != len(classes):
                errors.append((f"artifacts.{kind}.values", f"must list one value per class ({len(classes)})"))

    unknown = set(data) - set(ReportJson.__dataclass_fields__)
    if unknown:
        errors.append(("$", f"unknown fields {sorted(unknown)}"))
    return errors


def dumps_report(report: ReportJson) -> str:
    data = report.to_dict()
    errors = validate_report(data)
    if errors:
        path, message = errors[0]
        raise SchemaError(message, path)
    return json.dumps(data, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_report(path: PathLike, report: ReportJson):
    atomic_write_text(path, dumps_report(report))
    logger.info("📝 Report written to %s", path)


def read_report(path: PathLike) -> ReportJson:
    with open(path, encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc.msg} (line {exc.lineno})", "$") from exc
        except UnicodeDecodeError as exc:
            raise SchemaError(f"report is not valid UTF-8 ({exc.reason} at byte {exc.start})", "$") from None
    return ReportJson.from_dict(data)
