"""Dataset ingestion and JSON reports"""

from .readers import (
    CIFAR_RECORD_BYTES,
    DATASET_FORMATS,
    PIXEL_SCALES,
    read_cifar10_bin,
    read_csv,
    read_dataset,
    read_idm1,
    write_csv,
    write_idm1,
)
from .report import (
    SCHEMA_VERSION,
    ClassRecord,
    ReportJson,
    build_report,
    dumps_report,
    read_report,
    validate_report,
    write_report,
)

__all__ = [
    'CIFAR_RECORD_BYTES',
    'ClassRecord',
    'DATASET_FORMATS',
    'PIXEL_SCALES',
    'ReportJson',
    'SCHEMA_VERSION',
    'build_report',
    'dumps_report',
    'read_cifar10_bin',
    'read_csv',
    'read_dataset',
    'read_idm1',
    'read_report',
    'validate_report',
    'write_csv',
    'write_idm1',
    'write_report',
]
