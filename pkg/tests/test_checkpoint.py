"""
Tests for bench checkpointing.
"""

import pytest

from core.checkpoint import CheckpointManager, SuiteCheckpoint, make_run_id

CONFIG = {"command": "bench", "suite": ["extrinsic"], "seed": 7, "repeats": 1,
          "estimator": "fishers", "estimator_config": {"conditional_number": 10.0}, "rotation_passes": 1}


@pytest.fixture
def manager(tmp_path):
    return CheckpointManager(tmp_path / "checkpoints")


def test_run_id_is_deterministic():
    assert make_run_id(CONFIG) == make_run_id(dict(reversed(list(CONFIG.items()))))
    assert make_run_id(CONFIG) != make_run_id({**CONFIG, "seed": 8})
    assert make_run_id(CONFIG).startswith("bench_")


def test_suite_progress_survives_restart(manager, tmp_path):
    run_id = make_run_id(CONFIG)
    manager.start_new_run(run_id, "Bench extrinsic", CONFIG)
    checkpoint = SuiteCheckpoint(manager, "extrinsic")
    checkpoint.set_total_items(3)
    checkpoint.mark_processed("10.0:5:3000:10:7", {"estimate": 4.9})
    checkpoint.save_progress()

    reopened = CheckpointManager(tmp_path / "checkpoints")
    assert reopened.resume_run(run_id) == run_id
    restored = SuiteCheckpoint(reopened, "extrinsic")
    assert restored.is_processed("10.0:5:3000:10:7")
    assert restored.get_row("10.0:5:3000:10:7") == {"estimate": 4.9}
    assert restored.get_progress_stats()["completion_percentage"] == pytest.approx(100 / 3)


def test_suite_status_and_summary(manager):
    run_id = make_run_id(CONFIG)
    manager.start_new_run(run_id, config=CONFIG)
    checkpoint = SuiteCheckpoint(manager, "extrinsic")
    checkpoint.mark_failed("k", "NoValidAlpha: boom")
    checkpoint.mark_failed("k", "NoValidAlpha: boom")
    checkpoint.save_progress()
    assert checkpoint.failed_keys() == {"k"}
    manager.mark_suite_complete("extrinsic")
    assert manager.is_suite_completed("extrinsic")

    manager.complete_run()
    summary = manager.get_run_summary()
    assert summary["status"] == "completed"
    assert summary["suites"]["extrinsic"]["status"] == "completed"
    assert summary["suites"]["extrinsic"]["failure_count"] == 1


def test_config_compatibility(manager):
    manager.start_new_run(make_run_id(CONFIG), config=CONFIG)
    assert manager.validate_config_compatibility(CONFIG)
    assert not manager.validate_config_compatibility({**CONFIG, "repeats": 3})


def test_new_run_discards_old_progress(manager):
    run_id = make_run_id(CONFIG)
    manager.start_new_run(run_id, config=CONFIG)
    checkpoint = SuiteCheckpoint(manager, "extrinsic")
    checkpoint.mark_processed("a", {})
    checkpoint.save_progress()

    manager.start_new_run(run_id, config=CONFIG)
    assert SuiteCheckpoint(manager, "extrinsic").rows == {}
    assert manager.resume_run("bench_missing") is None


def test_save_without_run_raises(manager):
    with pytest.raises(RuntimeError):
        manager.save_suite_progress("extrinsic", {})
