"""File-backed store: round trips, ordering, crash safety."""

from __future__ import annotations

import json

import pytest

from forte.errors import NotFound, StorageError
from forte.experiment import ExperimentStatus, results_to_dict
from forte.store import ExperimentStore

from test_experiment import make_spec


@pytest.fixture
def store(tmp_path):
    return ExperimentStore(tmp_path / "experiments")


class TestCrud:
    def test_create_then_load_round_trip(self, store):
        spec = make_spec()
        experiment_id = store.create(spec)
        entry = store.load(experiment_id)
        assert entry.spec == spec
        assert entry.status is ExperimentStatus.QUEUED
        assert entry.results is None

    def test_two_creates_distinct_ids(self, store):
        a = store.create(make_spec())
        b = store.create(make_spec())
        assert a != b

    def test_duplicate_names_allowed(self, store):
        store.create(make_spec(name="same"))
        store.create(make_spec(name="same"))
        assert len(store.list()) == 2

    def test_list_empty(self, store):
        assert store.list() == []

    def test_list_newest_first(self, store):
        ids = [store.create(make_spec(name=f"e{i}")) for i in range(3)]
        listed = [e.id for e in store.list()]
        assert set(listed) == set(ids)
        created = [e.created_at for e in store.list()]
        assert created == sorted(created, reverse=True)

    def test_delete_then_load_not_found(self, store):
        experiment_id = store.create(make_spec())
        store.delete(experiment_id)
        with pytest.raises(NotFound):
            store.load(experiment_id)

    def test_load_unknown(self, store):
        with pytest.raises(NotFound):
            store.load("nope")

    def test_delete_unknown(self, store):
        with pytest.raises(NotFound):
            store.delete("nope")

    def test_unwritable_root(self, tmp_path):
        blocker = tmp_path / "blocked"
        blocker.write_text("a file where a directory must go")
        with pytest.raises(StorageError):
            ExperimentStore(blocker / "experiments")


class TestResults:
    def test_completed_round_trip(self, store, engine):
        spec = make_spec()
        experiment_id = store.create(spec)
        results = engine.run(spec)
        store.commit_results(experiment_id, results)
        entry = store.load(experiment_id)
        assert entry.status is ExperimentStatus.COMPLETED
        assert results_to_dict(entry.results) == results_to_dict(results)

    def test_results_csv_written(self, store, engine):
        spec = make_spec()
        experiment_id = store.create(spec)
        store.commit_results(experiment_id, engine.run(spec))
        assert (store.root / experiment_id / "results.csv").exists()

    def test_progress_updates(self, store):
        experiment_id = store.create(make_spec())
        store.set_progress(experiment_id, ExperimentStatus.RUNNING, 0.5)
        entry = store.load(experiment_id)
        assert entry.status is ExperimentStatus.RUNNING
        assert entry.progress == 0.5


class TestCrashSafety:
    def test_kill_between_results_and_status(self, store, engine, monkeypatch):
        # simulate dying after results.json lands but before status flips
        spec = make_spec()
        experiment_id = store.create(spec)
        results = engine.run(spec)
        original = store._write_status

        def boom(*args, **kwargs):
            raise KeyboardInterrupt("killed between writes")

        monkeypatch.setattr(store, "_write_status", boom)
        with pytest.raises(KeyboardInterrupt):
            store.commit_results(experiment_id, results)
        monkeypatch.setattr(store, "_write_status", original)
        reloaded = ExperimentStore(store.root).load(experiment_id)
        assert reloaded.status is not ExperimentStatus.COMPLETED

    def test_kill_before_results_never_completed(self, store, engine):
        experiment_id = store.create(make_spec())
        store.set_progress(experiment_id, ExperimentStatus.RUNNING, 0.9)
        # process dies here: no results.json, status still running
        reloaded = ExperimentStore(store.root).load(experiment_id)
        assert reloaded.status is ExperimentStatus.RUNNING
        assert reloaded.results is None

    def test_completed_with_missing_results_fails_loud(self, store, engine):
        spec = make_spec()
        experiment_id = store.create(spec)
        store.commit_results(experiment_id, engine.run(spec))
        (store.root / experiment_id / "results.json").unlink()
        with pytest.raises(StorageError):
            store.load(experiment_id)

    def test_atomic_write_no_partial_file(self, store):
        experiment_id = store.create(make_spec())
        spec_path = store.root / experiment_id / "spec.json"
        json.loads(spec_path.read_text())  # parseable, never half-written
        assert not spec_path.with_name("spec.json.tmp").exists()

    def test_mark_interrupted(self, store):
        queued = store.create(make_spec())
        running = store.create(make_spec())
        store.set_progress(running, ExperimentStatus.RUNNING, 0.4)
        flipped = store.mark_interrupted()
        assert set(flipped) == {queued, running}
        for experiment_id in (queued, running):
            assert store.load(experiment_id).status is ExperimentStatus.FAILED
