"""File-backed experiment store.

One directory per experiment (spec.json, status.json, results.json,
results.csv) so artifacts stay inspectable and backup is a copy. Writes go
through a temp-file rename, and results are committed before the status
flips to completed: a crash between the two can leave a stale running
status, never a completed experiment with missing results.
"""

from __future__ import annotations

import json
import os
import secrets
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .errors import NotFound, StorageError
from .experiment import (
    ExperimentResults,
    ExperimentSpec,
    ExperimentStatus,
    results_from_dict,
    results_to_csv,
    results_to_dict,
    spec_from_dict,
    spec_to_dict,
)


@dataclass(frozen=True)
class StoredExperiment:
    id: str
    created_at: datetime
    spec: ExperimentSpec
    status: ExperimentStatus
    progress: float
    error: str | None
    results: ExperimentResults | None


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    try:
        tmp.write_text(text)
        os.replace(tmp, path)
    except OSError as exc:
        raise StorageError(f"cannot write {path}: {exc}")


class ExperimentStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        try:
            self.root.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise StorageError(f"cannot create store root {self.root}: {exc}")

    def _dir(self, experiment_id: str) -> Path:
        return self.root / experiment_id

    def create(self, spec: ExperimentSpec) -> str:
        """Persist a new queued experiment and return its id."""
        created = datetime.now(timezone.utc)
        experiment_id = created.strftime("%Y%m%d-%H%M%S-") + secrets.token_hex(3)
        path = self._dir(experiment_id)
        try:
            path.mkdir(parents=True, exist_ok=False)
        except OSError as exc:
            raise StorageError(f"cannot create experiment dir {path}: {exc}")
        _atomic_write(path / "spec.json", json.dumps(spec_to_dict(spec), sort_keys=True, indent=2))
        self._write_status(experiment_id, ExperimentStatus.QUEUED, 0.0, None,
                           created_at=created)
        return experiment_id

    def _write_status(self, experiment_id: str, status: ExperimentStatus, progress: float,
                      error: str | None, created_at: datetime | None = None) -> None:
        path = self._dir(experiment_id)
        if created_at is None:
            created_at = self._read_status(experiment_id)["created_at"]
        else:
            created_at = created_at.isoformat()
        doc = {"status": status.value, "progress": progress, "error": error,
               "created_at": created_at}
        _atomic_write(path / "status.json", json.dumps(doc, sort_keys=True, indent=2))

    def _read_status(self, experiment_id: str) -> dict:
        path = self._dir(experiment_id) / "status.json"
        if not path.exists():
            raise NotFound(f"no experiment {experiment_id!r}")
        return json.loads(path.read_text())

    def set_progress(self, experiment_id: str, status: ExperimentStatus,
                     progress: float, error: str | None = None) -> None:
        self._write_status(experiment_id, status, progress, error)

    def commit_results(self, experiment_id: str, results: ExperimentResults) -> None:
        """Write results, then flip status; ordering is the crash-safety rule."""
        path = self._dir(experiment_id)
        if not path.exists():
            raise NotFound(f"no experiment {experiment_id!r}")
        _atomic_write(path / "results.json",
                      json.dumps(results_to_dict(results), sort_keys=True, indent=2))
        _atomic_write(path / "results.csv", results_to_csv(results))
        self._write_status(experiment_id, results.status, results.progress, results.error)

    def load(self, experiment_id: str) -> StoredExperiment:
        path = self._dir(experiment_id)
        status_doc = self._read_status(experiment_id)
        spec = spec_from_dict(json.loads((path / "spec.json").read_text()))
        status = ExperimentStatus(status_doc["status"])
        results = None
        results_path = path / "results.json"
        if results_path.exists():
            results = results_from_dict(json.loads(results_path.read_text()))
        if status is ExperimentStatus.COMPLETED and results is None:
            # should be unreachable given commit ordering; fail loudly not quietly
            raise StorageError(f"experiment {experiment_id!r} completed without results")
        return StoredExperiment(
            id=experiment_id,
            created_at=datetime.fromisoformat(status_doc["created_at"]),
            spec=spec,
            status=status,
            progress=float(status_doc["progress"]),
            error=status_doc.get("error"),
            results=results,
        )

    def list(self) -> list[StoredExperiment]:
        """Summaries (results omitted), newest first."""
        out = []
        if not self.root.exists():
            return out
        for entry in self.root.iterdir():
            if not (entry / "status.json").exists():
                continue
            status_doc = json.loads((entry / "status.json").read_text())
            spec = spec_from_dict(json.loads((entry / "spec.json").read_text()))
            out.append(StoredExperiment(
                id=entry.name,
                created_at=datetime.fromisoformat(status_doc["created_at"]),
                spec=spec,
                status=ExperimentStatus(status_doc["status"]),
                progress=float(status_doc["progress"]),
                error=status_doc.get("error"),
                results=None,
            ))
        out.sort(key=lambda e: (e.created_at, e.id), reverse=True)
        return out

    def delete(self, experiment_id: str) -> None:
        path = self._dir(experiment_id)
        if not path.exists():
            raise NotFound(f"no experiment {experiment_id!r}")
        for child in sorted(path.rglob("*"), reverse=True):
            child.unlink() if child.is_file() else child.rmdir()
        path.rmdir()

    def mark_interrupted(self) -> list[str]:
        """Flip orphaned queued/running experiments to failed (service restart)."""
        flipped = []
        for entry in self.list():
            if entry.status in (ExperimentStatus.QUEUED, ExperimentStatus.RUNNING):
                self._write_status(entry.id, ExperimentStatus.FAILED, entry.progress,
                                   "interrupted by service restart")
                flipped.append(entry.id)
        return flipped
