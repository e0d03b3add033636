"""
Dataset readers and writers.

CSV: one sample per line, labels (when present) in the last column.
IDM1: little-endian binary container

    offset  size  field
    0       4     magic b"IDM1"
    4       1     version (1)
    5       1     flags, bit 0 = labels present
    6       4     n (u32)
    10      4     D (u32)
    14      8nD   features, float64, row-major
    ...     4n    labels, u32 (only when flagged)

CIFAR-10 binary batches: records of 1 label byte followed by 3072 pixel bytes.
"""

import csv
import io
import logging
import struct
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from utils.helpers import PathLike, atomic_write_bytes, atomic_write_text, describe_path

from ..errors import (
    BadRecordSize, ConfigError, ContainerFormatError, EmptyFile, LabelOutOfRange, ParseError, RaggedRows
)
from ..models import LabeledDataset, as_sample_matrix

logger = logging.getLogger(__name__)

IDM1_MAGIC = b"IDM1"
IDM1_VERSION = 1
IDM1_HEADER = struct.Struct("<4sBBII")
IDM1_FLAG_LABELED = 0x01

CIFAR_RECORD_BYTES = 3073
CIFAR_PIXELS = 3072
CIFAR_CLASSES = 10
PIXEL_SCALES = ("unit", "raw")

DATASET_FORMATS = ("csv", "idm1", "cifar10")


# --- CSV ----------------------------------------------------------------------------

def _decode_utf8(path: PathLike) -> str:
    raw = Path(path).read_bytes()
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        line_no = raw.count(b"\n", 0, exc.start) + 1
        raise ParseError(f"byte 0x{raw[exc.start]:02x} is not valid UTF-8", line_no) from None


def read_csv(
    path: PathLike,
    has_header: bool = False,
    labeled: bool = False,
) -> Union[LabeledDataset, np.ndarray]:
    rows, labels = [], []
    width = None
    with io.StringIO(_decode_utf8(path), newline="") as handle:
        for line_no, fields in enumerate(csv.reader(handle), start=1):
            if has_header and line_no == 1:
                continue
            if not fields or all(not f.strip() for f in fields):
                continue
            if width is None:
                width = len(fields)
                if labeled and width < 2:
                    raise ParseError("labeled rows need at least one feature and a label", line_no)
            elif len(fields) != width:
                raise RaggedRows(f"expected {width} fields, found {len(fields)}", line_no)

            feature_fields = fields[:-1] if labeled else fields
            values = []
            for column, text in enumerate(feature_fields, start=1):
                try:
                    values.append(float(text))
                except ValueError:
                    raise ParseError(f"cannot parse {text.strip()!r} as a number", line_no, column) from None
            rows.append(values)

            if labeled:
                text = fields[-1].strip()
                try:
                    label = int(text)
                except ValueError:
                    label = -1
                if label < 0:
                    raise ParseError(f"label {text!r} is not a non-negative integer", line_no, width)
                labels.append(label)

    if not rows:
        raise EmptyFile(f"{path} contains no data rows")

    data = as_sample_matrix(np.array(rows, dtype=np.float64), name=str(path))
    logger.debug("read %d x %d samples from %s", data.shape[0], data.shape[1], path)
    if labeled:
        return LabeledDataset(data=data, labels=np.array(labels, dtype=np.int64))
    return data


def write_csv(path: PathLike, data: np.ndarray, labels: Optional[Sequence[int]] = None) -> Path:
    data = as_sample_matrix(data)
    lines = []
    for i, row in enumerate(data):
        fields = [repr(float(v)) for v in row]
        if labels is not None:
            fields.append(str(int(labels[i])))
        lines.append(",".join(fields))
    return atomic_write_text(path, "\n".join(lines) + "\n")


# --- IDM1 ---------------------------------------------------------------------------

def write_idm1(path: PathLike, data: np.ndarray, labels: Optional[Sequence[int]] = None) -> Path:
    data = as_sample_matrix(data)
    n, dim = data.shape
    flags = IDM1_FLAG_LABELED if labels is not None else 0
    payload = [IDM1_HEADER.pack(IDM1_MAGIC, IDM1_VERSION, flags, n, dim), data.astype("<f8").tobytes()]
    if labels is not None:
        label_array = np.asarray(labels)
        if label_array.shape != (n,):
            raise ContainerFormatError(f"expected {n} labels, got shape {label_array.shape}")
        payload.append(label_array.astype("<u4").tobytes())
    return atomic_write_bytes(path, b"".join(payload))


def read_idm1(path: PathLike) -> Union[LabeledDataset, np.ndarray]:
    raw = Path(path).read_bytes()
    if not raw:
        raise EmptyFile(f"{path} is empty")
    if len(raw) < IDM1_HEADER.size:
        raise ContainerFormatError(f"{path}: truncated header ({len(raw)} bytes)")
    magic, version, flags, n, dim = IDM1_HEADER.unpack_from(raw)
    if magic != IDM1_MAGIC:
        raise ContainerFormatError(f"{path}: bad magic {magic!r}")
    if version != IDM1_VERSION:
        raise ContainerFormatError(f"{path}: unsupported version {version}")

    labeled = bool(flags & IDM1_FLAG_LABELED)
    expected = IDM1_HEADER.size + n * dim * 8 + (n * 4 if labeled else 0)
    if len(raw) != expected:
        raise ContainerFormatError(f"{path}: expected {expected} bytes for n={n}, D={dim}, got {len(raw)}")

    offset = IDM1_HEADER.size
    data = np.frombuffer(raw, dtype="<f8", count=n * dim, offset=offset).reshape(n, dim)
    data = as_sample_matrix(data.astype(np.float64), name=str(path))
    if not labeled:
        return data
    labels = np.frombuffer(raw, dtype="<u4", count=n, offset=offset + n * dim * 8)
    return LabeledDataset(data=data, labels=labels.astype(np.int64))


# --- CIFAR-10 -----------------------------------------------------------------------

def read_cifar10_bin(paths: Sequence[PathLike], pixel_scale: str = "unit") -> LabeledDataset:
    """
    Concatenate CIFAR-10 binary batches.

    ``pixel_scale="unit"`` divides bytes by 255; ``"raw"`` keeps the byte values.
    """
    if pixel_scale not in PIXEL_SCALES:
        raise ConfigError(f"pixel_scale must be one of {PIXEL_SCALES}")
    features, labels = [], []
    for path in paths:
        raw = np.fromfile(path, dtype=np.uint8)
        if raw.size == 0 or raw.size % CIFAR_RECORD_BYTES:
            raise BadRecordSize(f"{path}: {raw.size} bytes is not a multiple of {CIFAR_RECORD_BYTES}")
        records = raw.reshape(-1, CIFAR_RECORD_BYTES)
        batch_labels = records[:, 0]
        if batch_labels.max() >= CIFAR_CLASSES:
            bad = int(np.flatnonzero(batch_labels >= CIFAR_CLASSES)[0])
            raise LabelOutOfRange(f"{path}: record {bad} has label {batch_labels[bad]}")
        logger.info("📂 Read %d records from %s", records.shape[0], describe_path(path))
        features.append(records[:, 1:])
        labels.append(batch_labels.astype(np.int64))

    if not features:
        raise EmptyFile("no CIFAR-10 batch files given")
    pixels = np.vstack(features).astype(np.float64)
    if pixel_scale == "unit":
        pixels /= 255.0
    return LabeledDataset(data=pixels, labels=np.concatenate(labels), label_space=CIFAR_CLASSES)


def read_dataset(
    path: PathLike,
    fmt: str,
    labeled: bool = True,
    has_header: bool = False,
    pixel_scale: str = "unit",
) -> Union[LabeledDataset, np.ndarray]:
    """Dispatch on ``fmt``; CIFAR-10 accepts a comma-separated list of batch files."""
    if fmt == "csv":
        return read_csv(path, has_header=has_header, labeled=labeled)
    if fmt == "idm1":
        return read_idm1(path)
    if fmt == "cifar10":
        return read_cifar10_bin([p for p in str(path).split(",") if p], pixel_scale=pixel_scale)
    raise ConfigError(f"unknown dataset format {fmt!r}")
