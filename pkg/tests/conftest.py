"""Shared fixtures: one small synthetic dataset and fitted models per session."""

from __future__ import annotations

from datetime import timedelta

import pytest

from forte.forecaster import fit
from forte.synth import SynthConfig, generate
from forte.timeseries import Penetration


@pytest.fixture(scope="session")
def year_dataset():
    """Gap-free default synthetic year used across forecaster/engine tests."""
    return generate(SynthConfig(year=2020, seed=11))


@pytest.fixture(scope="session")
def model_p50_min15(year_dataset):
    train = year_dataset.frame(year_dataset.end - timedelta(days=28),
                               year_dataset.end, Penetration.P50)
    return fit(train, "min15", "p50")


@pytest.fixture(scope="session")
def engine(year_dataset, model_p50_min15):
    from forte.experiment import ExperimentEngine

    return ExperimentEngine(year_dataset, {("p50", "min15"): model_p50_min15})
