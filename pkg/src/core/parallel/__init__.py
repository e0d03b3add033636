# Threaded execution utilities
from .worker_pool import PoolStats, WorkOutcome, run_threaded

__all__ = ['PoolStats', 'WorkOutcome', 'run_threaded']
