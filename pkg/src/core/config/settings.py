"""
Environment-driven defaults, read from the process environment and an optional .env file.
"""
import datetime
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

load_dotenv()


@dataclass
class Settings:
    log_dir: Optional[Path] = None
    log_level: str = "INFO"
    max_workers: int = 4
    checkpoint_dir: Path = Path("checkpoints")
    # fixed provenance time for reproducible builds; None = no timestamp
    source_date_epoch: Optional[int] = None

    @classmethod
    def from_env(cls) -> "Settings":
        log_dir = os.getenv("INTDIM_LOG_DIR")
        epoch = os.getenv("SOURCE_DATE_EPOCH")
        return cls(
            log_dir=Path(log_dir) if log_dir else None,
            log_level=os.getenv("INTDIM_LOG_LEVEL", "INFO"),
            max_workers=_int_env("INTDIM_MAX_WORKERS", 4),
            checkpoint_dir=Path(os.getenv("INTDIM_CHECKPOINT_DIR", "checkpoints")),
            source_date_epoch=int(epoch) if epoch and epoch.strip().isdigit() else None,
        )

    def provenance_timestamp(self) -> Optional[str]:
        if self.source_date_epoch is None:
            return None
        moment = datetime.datetime.fromtimestamp(self.source_date_epoch, tz=datetime.timezone.utc)
        return moment.isoformat().replace("+00:00", "Z")


def _int_env(name: str, default: int) -> int:
    value = os.getenv(name)
    try:
        return int(value) if value else default
    except ValueError:
        return default
