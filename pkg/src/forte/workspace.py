"""On-disk layout shared by the CLI and the service.

A data directory holds one ingested dataset (canonical CSV), fitted models
as versioned JSON, and the experiment store:

    data_dir/
      dataset.csv
      models/<penetration>_<horizon>.json
      experiments/<id>/...
"""

from __future__ import annotations

from pathlib import Path

from .dataset import Dataset, read_csv, write_csv
from .errors import NotFound
from .forecaster import ForecasterModel, Horizon, load_model, save_model
from .store import ExperimentStore
from .timeseries import Penetration


class Workspace:
    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)

    @property
    def dataset_path(self) -> Path:
        return self.data_dir / "dataset.csv"

    @property
    def models_dir(self) -> Path:
        return self.data_dir / "models"

    @property
    def experiments_dir(self) -> Path:
        return self.data_dir / "experiments"

    def has_dataset(self) -> bool:
        return self.dataset_path.exists()

    def load_dataset(self) -> Dataset:
        if not self.has_dataset():
            raise NotFound(f"no ingested dataset under {self.data_dir} (run ingest first)")
        return read_csv(self.dataset_path)

    def save_dataset(self, dataset: Dataset) -> None:
        self.data_dir.mkdir(parents=True, exist_ok=True)
        write_csv(dataset, self.dataset_path)

    def model_path(self, penetration: Penetration, horizon: Horizon) -> Path:
        return self.models_dir / f"{penetration.value}_{horizon.value}.json"

    def save_model(self, model: ForecasterModel) -> Path:
        self.models_dir.mkdir(parents=True, exist_ok=True)
        path = self.model_path(model.penetration, model.horizon)
        save_model(model, path)
        return path

    def load_models(self) -> dict[tuple[str, str], ForecasterModel]:
        models: dict[tuple[str, str], ForecasterModel] = {}
        if self.models_dir.exists():
            for path in sorted(self.models_dir.glob("*.json")):
                model = load_model(path)
                models[(model.penetration.value, model.horizon.value)] = model
        return models

    def store(self) -> ExperimentStore:
        return ExperimentStore(self.experiments_dir)
