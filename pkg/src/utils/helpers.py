import logging
import os
import tempfile
from pathlib import Path
from typing import Union


logger = logging.getLogger(__name__)

PathLike = Union[str, os.PathLike]


def _truncate(text: str, max_len: int = 250) -> str:
    """Return a shortened string for logs."""
    return text if len(text) <= max_len else text[:max_len] + "…"


def atomic_write_bytes(path: PathLike, payload: bytes) -> Path:
    """
    Write ``payload`` to a temporary file next to ``path`` and rename it into place.

    Readers never observe a half-written file.
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=target.parent)
    try:
        with os.fdopen(fd, "wb") as handle:
            handle.write(payload)
        os.replace(tmp_name, target)
    except BaseException:
        if os.path.exists(tmp_name):
            os.remove(tmp_name)
        raise

    logger.debug("Wrote %d bytes to %s", len(payload), target)
    return target


def atomic_write_text(path: PathLike, text: str) -> Path:
    return atomic_write_bytes(path, text.encode("utf-8"))


def describe_path(path: PathLike) -> str:
    """Short 'name (size)' description for progress messages."""
    target = Path(path)
    try:
        size = target.stat().st_size
    except OSError:
        return _truncate(str(target))
    return f"{_truncate(str(target))} ({size:,} bytes)"
