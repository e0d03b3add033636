"""
Reusable threaded execution for independent work items (classes, sweep points).

Results come back in input order regardless of completion order, so anything written
from them is independent of the worker count.
"""
import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Any, Callable, List, Optional, Sequence

logger = logging.getLogger(__name__)

PROGRESS_EVERY = 25


@dataclass
class WorkOutcome:
    """Result or error for one item"""
    index: int
    result: Any = None
    error: Optional[BaseException] = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class PoolStats:
    processed: int = 0
    failed: int = 0
    elapsed_time: float = 0.0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def record(self, ok: bool):
        """Thread-safe increment"""
        with self._lock:
            if ok:
                self.processed += 1
            else:
                self.failed += 1

    def counts(self):
        with self._lock:
            return self.processed, self.failed


def run_threaded(
    items: Sequence[Any],
    func: Callable[[Any], Any],
    max_workers: int = 4,
    label: str = "items",
) -> List[WorkOutcome]:
    """
    Apply ``func`` to every item, using a thread pool when max_workers > 1.

    Exceptions are captured per item rather than aborting the batch; callers decide
    whether to re-raise.
    """
    stats = PoolStats()
    outcomes: List[Optional[WorkOutcome]] = [None] * len(items)
    if not items:
        return []

    start_time = time.time()
    logger.info("🔄 Processing %d %s with %d worker(s)", len(items), label, max_workers)

    def _run(index: int, item: Any) -> WorkOutcome:
        try:
            return WorkOutcome(index=index, result=func(item))
        except Exception as exc:  # captured and reported per item
            return WorkOutcome(index=index, error=exc)

    if max_workers <= 1:
        for index, item in enumerate(items):
            outcome = _run(index, item)
            outcomes[index] = outcome
            stats.record(outcome.ok)
            _report_progress(stats, index + 1, len(items), start_time, label)
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            futures = {executor.submit(_run, i, item): i for i, item in enumerate(items)}
            completed = 0
            for future in as_completed(futures):
                completed += 1
                outcome = future.result()
                outcomes[outcome.index] = outcome
                stats.record(outcome.ok)
                _report_progress(stats, completed, len(items), start_time, label)

    stats.elapsed_time = time.time() - start_time
    processed, failed = stats.counts()
    logger.info(
        "✅ Finished %s: %d ok, %d failed in %.2f s", label, processed, failed, stats.elapsed_time
    )
    return outcomes


def _report_progress(stats: PoolStats, completed: int, total: int, start_time: float, label: str):
    if completed % PROGRESS_EVERY and completed != total:
        return
    elapsed = time.time() - start_time
    rate = completed / elapsed if elapsed > 0 else 0.0
    processed, failed = stats.counts()
    logger.info(
        "    📊 Progress: %d/%d %s (%.1f%%) - Rate: %.1f/sec - Success: %d, Failed: %d",
        completed, total, label, completed / total * 100, rate, processed, failed,
    )
