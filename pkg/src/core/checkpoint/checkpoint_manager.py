import datetime
import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional

from utils.helpers import atomic_write_text

logger = logging.getLogger(__name__)

# settings whose change makes stored sweep results unusable
CRITICAL_PARAMS = ['suite', 'seed', 'repeats', 'estimator', 'estimator_config', 'rotation_passes']
# failure records kept per suite file
MAX_FAILED_ITEMS = 100


def make_run_id(config: Dict[str, Any]) -> str:
    """Deterministic run id: identical bench settings map to the same checkpoint."""
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return f"bench_{hashlib.sha256(canonical.encode('utf-8')).hexdigest()[:16]}"


class CheckpointManager:
    """
    Stores benchmark progress so an interrupted sweep can be resumed.

    One run file ``<run_id>.json`` holds the run metadata and one file per suite
    ``<run_id>_<suite>.json`` holds the rows computed so far.
    """

    def __init__(self, checkpoint_dir: str = "checkpoints"):
        self.checkpoint_dir = Path(checkpoint_dir)
        self.checkpoint_dir.mkdir(parents=True, exist_ok=True)

        # Current run state
        self.current_run_id = None
        self.checkpoints = {}

    def start_new_run(self, run_id: str, run_description: str = None, config: Dict = None) -> str:
        """Start (or restart from scratch) the run ``run_id``."""
        self._delete_run_files(run_id)
        self.current_run_id = run_id
        self.checkpoints = {}

        run_info = {
            "run_id": run_id,
            "start_time": _now(),
            "description": run_description or "Benchmark run",
            "status": "running",
            "config": config or {},
        }
        self._save_run_info(run_info)
        logger.info("🚀 Started new run: %s", run_id)
        if config:
            logger.info("📋 Saved configuration: %s", self._format_config_summary(config))
        return run_id

    def resume_run(self, run_id: str) -> Optional[str]:
        """Load the stored progress of ``run_id``; None when no such run exists."""
        if not self._run_exists(run_id):
            logger.info("ℹ️ No checkpoint found for %s", run_id)
            return None
        self.current_run_id = run_id
        self.checkpoints = self._load_checkpoints(run_id)
        logger.info("📂 Resuming run: %s", run_id)
        return run_id

    def save_suite_progress(self, suite: str, progress_info: Dict):
        if not self.current_run_id:
            raise RuntimeError("No active run. Call start_new_run() first.")

        checkpoint_data = {
            "suite": suite,
            "timestamp": _now(),
            "status": self.checkpoints.get(suite, {}).get("status", "in_progress"),
            "progress": progress_info,
        }
        self.checkpoints[suite] = checkpoint_data
        self._save_checkpoint(suite, checkpoint_data)

    def get_suite_progress(self, suite: str) -> Optional[Dict]:
        return self.checkpoints.get(suite, {}).get("progress", None)

    def mark_suite_complete(self, suite: str):
        if suite in self.checkpoints:
            self.checkpoints[suite]["status"] = "completed"
            self.checkpoints[suite]["completed_at"] = _now()
            self._save_checkpoint(suite, self.checkpoints[suite])
        logger.info("✅ Marked %s as completed", suite)

    def mark_suite_failed(self, suite: str, error_message: str):
        if suite in self.checkpoints:
            self.checkpoints[suite]["status"] = "failed"
            self.checkpoints[suite]["error"] = error_message
            self.checkpoints[suite]["failed_at"] = _now()
            self._save_checkpoint(suite, self.checkpoints[suite])
        logger.error("❌ Marked %s as failed: %s", suite, error_message)

    def is_suite_completed(self, suite: str) -> bool:
        return self.checkpoints.get(suite, {}).get("status") == "completed"

    def complete_run(self):
        if not self.current_run_id:
            return
        run_info = self._load_run_info()
        run_info["status"] = "completed"
        run_info["end_time"] = _now()
        self._save_run_info(run_info)
        logger.info("🎉 Run %s completed successfully", self.current_run_id)

    def get_run_summary(self) -> Dict:
        if not self.current_run_id:
            return {}

        run_info = self._load_run_info()
        summary = {
            "run_id": self.current_run_id,
            "status": run_info.get("status", "unknown"),
            "start_time": run_info.get("start_time"),
            "config": run_info.get("config", {}),
            "suites": {},
        }
        for suite, checkpoint in self.checkpoints.items():
            progress = checkpoint.get("progress", {})
            summary["suites"][suite] = {
                "status": checkpoint.get("status", "in_progress"),
                "timestamp": checkpoint.get("timestamp"),
                "processed_count": progress.get("processed_count", 0),
                "total_items": progress.get("total_items", 0),
                "failure_count": progress.get("failure_count", 0),
            }
        return summary

    def get_run_config(self) -> Dict:
        if not self.current_run_id:
            return {}
        return self._load_run_info().get("config", {})

    def validate_config_compatibility(self, current_config: Dict) -> bool:
        """True when the stored run was produced with the same result-affecting settings."""
        stored_config = self.get_run_config()
        if not stored_config:
            return True

        incompatible_params = []
        for param in CRITICAL_PARAMS:
            stored_value = stored_config.get(param)
            current_value = current_config.get(param)
            if stored_value is not None and current_value is not None and stored_value != current_value:
                incompatible_params.append(f"{param}: stored={stored_value}, current={current_value}")

        if incompatible_params:
            logger.warning("⚠️ Configuration incompatibility detected:")
            for param in incompatible_params:
                logger.warning("   • %s", param)
            return False
        return True

    # Private methods
    def _run_exists(self, run_id: str) -> bool:
        return (self.checkpoint_dir / f"{run_id}.json").exists()

    def _save_run_info(self, run_info: Dict):
        atomic_write_text(self.checkpoint_dir / f"{self.current_run_id}.json", json.dumps(run_info, indent=2))

    def _load_run_info(self) -> Dict:
        run_file = self.checkpoint_dir / f"{self.current_run_id}.json"
        if run_file.exists():
            with open(run_file, 'r') as f:
                return json.load(f)
        return {}

    def _save_checkpoint(self, suite: str, checkpoint_data: Dict):
        checkpoint_file = self.checkpoint_dir / f"{self.current_run_id}_{suite}.json"
        atomic_write_text(checkpoint_file, json.dumps(checkpoint_data, indent=2))

    def _load_checkpoints(self, run_id: str) -> Dict:
        checkpoints = {}
        for checkpoint_file in self.checkpoint_dir.glob(f"{run_id}_*.json"):
            suite = checkpoint_file.stem.replace(f"{run_id}_", "", 1)
            try:
                with open(checkpoint_file, 'r') as f:
                    checkpoints[suite] = json.load(f)
            except json.JSONDecodeError:
                logger.warning("⚠️ Ignoring unreadable checkpoint %s", checkpoint_file)
        return checkpoints

    def _delete_run_files(self, run_id: str):
        run_file = self.checkpoint_dir / f"{run_id}.json"
        if run_file.exists():
            run_file.unlink()
        for checkpoint_file in self.checkpoint_dir.glob(f"{run_id}_*.json"):
            checkpoint_file.unlink()

    def _format_config_summary(self, config: Dict) -> str:
        summary_parts = [f"suite={config.get('suite')}", f"seed={config.get('seed')}"]
        if config.get('repeats', 1) > 1:
            summary_parts.append(f"repeats={config['repeats']}")
        if config.get('estimator'):
            summary_parts.append(f"estimator={config['estimator']}")
        return ', '.join(summary_parts)


class SuiteCheckpoint:
    """
    Suite-level view of the CheckpointManager: the CSV rows already computed,
    keyed by sweep point.
    """

    def __init__(self, manager: CheckpointManager, suite: str):
        self.manager = manager
        self.suite = suite

        initial_progress = self.manager.get_suite_progress(suite) or {}
        self.rows: Dict[str, Dict[str, Any]] = dict(initial_progress.get('rows', {}))
        self.failed_items = initial_progress.get('failed_items', [])
        self.total_items = initial_progress.get('total_items', 0)

    def set_total_items(self, total: int):
        self.total_items = total

    def is_processed(self, key: str) -> bool:
        return key in self.rows

    def get_row(self, key: str) -> Optional[Dict[str, Any]]:
        return self.rows.get(key)

    def mark_processed(self, key: str, row: Dict[str, Any]):
        self.rows[key] = row

    def mark_failed(self, key: str, error_message: str):
        """Record a point whose estimator failed; its NaN row is still stored via mark_processed."""
        if len(self.failed_items) < MAX_FAILED_ITEMS and key not in self.failed_keys():
            self.failed_items.append({"item_id": key, "error": error_message})

    def failed_keys(self):
        return {item["item_id"] for item in self.failed_items}

    def save_progress(self):
        if not self.manager.current_run_id:
            return

        progress_info = {
            'total_items': self.total_items,
            'processed_count': len(self.rows),
            'failure_count': len(self.failed_items),
            'rows': self.rows,
            'failed_items': self.failed_items,
        }
        self.manager.save_suite_progress(self.suite, progress_info)

    def get_progress_stats(self) -> Dict:
        processed_count = len(self.rows)
        completion_percentage = (processed_count / self.total_items * 100) if self.total_items > 0 else 0
        return {
            'processed_count': processed_count,
            'failure_count': len(self.failed_items),
            'total_items': self.total_items,
            'completion_percentage': completion_percentage,
        }


def _now() -> str:
    return datetime.datetime.now().isoformat()
