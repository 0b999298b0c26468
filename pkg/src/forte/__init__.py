"""Trust-oriented evaluation workbench for probabilistic net-load forecasts."""

__version__ = "0.1.0"

from .dataset import Dataset, read_csv, write_csv
from .errors import ForteError
from .experiment import (
    ExperimentEngine,
    ExperimentResults,
    ExperimentSpec,
    ExperimentStatus,
    aggregate,
    estimate_duration,
)
from .forecaster import (
    ForecastSeries,
    ForecasterModel,
    Horizon,
    fit,
    normalize,
    predict,
)
from .metrics import (
    DeviationRecord,
    MetricSet,
    deviation,
    interval_coverage,
    mae,
    mape,
    metric_set,
)
from .noise import (
    NoiseDirection,
    NoiseMode,
    NoisePerturbation,
    ad_hoc_noise,
    perturb,
    perturb_frame,
)
from .store import ExperimentStore, StoredExperiment
from .synth import SynthConfig, generate, inject_gaps
from .timeseries import (
    Channel,
    ChannelName,
    GapInterval,
    Penetration,
    SampleQuality,
    TimeSeriesFrame,
    apply_override,
    data_quality,
    detect_gaps,
    interpolate_linear,
)
from .workspace import Workspace

__all__ = [
    "Channel",
    "ChannelName",
    "Dataset",
    "DeviationRecord",
    "ExperimentEngine",
    "ExperimentResults",
    "ExperimentSpec",
    "ExperimentStatus",
    "ExperimentStore",
    "ForecastSeries",
    "ForecasterModel",
    "ForteError",
    "GapInterval",
    "Horizon",
    "MetricSet",
    "NoiseDirection",
    "NoiseMode",
    "NoisePerturbation",
    "Penetration",
    "SampleQuality",
    "StoredExperiment",
    "SynthConfig",
    "TimeSeriesFrame",
    "Workspace",
    "ad_hoc_noise",
    "aggregate",
    "apply_override",
    "data_quality",
    "detect_gaps",
    "deviation",
    "estimate_duration",
    "fit",
    "generate",
    "inject_gaps",
    "interpolate_linear",
    "interval_coverage",
    "mae",
    "mape",
    "metric_set",
    "normalize",
    "perturb",
    "perturb_frame",
    "predict",
    "read_csv",
    "write_csv",
]
