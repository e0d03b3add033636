from .checkpoint_manager import CheckpointManager, SuiteCheckpoint, make_run_id

__all__ = ['CheckpointManager', 'SuiteCheckpoint', 'make_run_id']
