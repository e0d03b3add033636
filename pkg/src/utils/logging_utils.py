import datetime
import logging
import sys
from pathlib import Path
from typing import Optional


class ExcludeNumericsFilter(logging.Filter):
    """Drop kernel-level debug records from the console; the file handler keeps them."""

    def filter(self, record: logging.LogRecord):
        return not record.name.startswith("intdim.numerics")


def setup_logging(logs_root: Optional[Path] = None, level: int = logging.INFO) -> Optional[Path]:
    """Configure the root logger for console output and, optionally, a timestamped log file.

    The console handler writes to stderr so stdout stays free for machine-readable output.
    Returns the path of the log file, or None when no log directory is configured.
    """
    handlers = []

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    console_handler.setFormatter(logging.Formatter("%(message)s"))
    console_handler.addFilter(ExcludeNumericsFilter())
    handlers.append(console_handler)

    log_file_path = None
    if logs_root is not None:
        logs_root = Path(logs_root)
        logs_root.mkdir(parents=True, exist_ok=True)
        timestamp = datetime.datetime.now().strftime("%Y%m%d_%H%M%S")
        log_file_path = logs_root / f"run_{timestamp}.log"

        file_handler = logging.FileHandler(log_file_path, encoding="utf-8")
        file_handler.setLevel(min(level, logging.DEBUG))
        file_handler.setFormatter(logging.Formatter("%(asctime)s [%(levelname)s] %(name)s: %(message)s"))
        handlers.append(file_handler)

    root_level = min(level, logging.DEBUG) if log_file_path else level
    logging.basicConfig(level=root_level, handlers=handlers, force=True)

    if log_file_path:
        logging.getLogger(__name__).info("Logs are being written to %s", log_file_path)
    return log_file_path


def parse_level(name: str) -> int:
    """'debug' / 'INFO' / '20' -> logging level number (INFO when unknown)."""
    if name.isdigit():
        return int(name)
    level = logging.getLevelName(name.upper())
    return level if isinstance(level, int) else logging.INFO
