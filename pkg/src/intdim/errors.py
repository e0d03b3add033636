"""
Exception hierarchy for the intrinsic dimension toolkit.

Every error raised by the library derives from ``IntDimError`` so that the CLI can
map it to exit code 1 and name the stage that failed.
"""

from typing import Optional


class IntDimError(ValueError):
    """Base class for all library errors"""

    default_stage = "core"

    def __init__(self, message: str, stage: Optional[str] = None):
        super().__init__(message)
        self.stage = stage or self.default_stage


# --- numerics -----------------------------------------------------------------

class InvalidSampleMatrix(IntDimError):
    default_stage = "numerics"


class DegenerateInput(IntDimError):
    default_stage = "numerics"


class DegenerateVariance(IntDimError):
    default_stage = "numerics"


class ZeroVector(IntDimError):
    default_stage = "numerics"


class DomainError(IntDimError):
    default_stage = "numerics"


class ShapeMismatch(IntDimError):
    default_stage = "numerics"


class ConfigError(IntDimError):
    default_stage = "config"


# --- estimators ---------------------------------------------------------------

class TooFewSamples(IntDimError):
    default_stage = "estimator"


class InvalidInseparability(IntDimError):
    default_stage = "fishers"


class NoValidAlpha(IntDimError):
    default_stage = "fishers"


class AllDegenerate(IntDimError):
    default_stage = "knn"


# --- imbalance ----------------------------------------------------------------

class ClassTooSmall(IntDimError):
    default_stage = "classwise"

    def __init__(self, label: int, count: int, required: int):
        super().__init__(
            f"class {label} has {count} samples, estimator needs at least {required}"
        )
        self.label = label
        self.count = count
        self.required = required


class EmptyClass(IntDimError):
    default_stage = "imbalance"


class DegenerateClass(IntDimError):
    default_stage = "imbalance"


class InsufficientSamples(IntDimError):
    default_stage = "synth"

    def __init__(self, label: int, requested: int, available: int):
        super().__init__(
            f"class {label}: requested {requested} samples but only {available} available"
        )
        self.label = label
        self.requested = requested
        self.available = available


# --- io -----------------------------------------------------------------------

class ParseError(IntDimError):
    default_stage = "read"

    def __init__(self, message: str, line: int, column: Optional[int] = None):
        location = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{location}: {message}")
        self.line = line
        self.column = column


class RaggedRows(ParseError):
    pass


class EmptyFile(IntDimError):
    default_stage = "read"


class BadRecordSize(IntDimError):
    default_stage = "read"


class LabelOutOfRange(IntDimError):
    default_stage = "read"


class ContainerFormatError(IntDimError):
    default_stage = "read"


class SchemaError(IntDimError):
    default_stage = "report"

    def __init__(self, message: str, path: str):
        super().__init__(f"{path}: {message}")
        self.path = path
