"""Pluggable probabilistic net-load forecaster and the ridge reference model.

The reference model regresses net load on standardized features: current-step
weather, lagged net load, and time-of-day/day-of-week harmonics. Interval
bounds come from empirical training-residual quantiles. Normalization stats
are always recomputed from the presented window, never frozen at training
time: scaling or shifting a whole weather channel then leaves every z-score,
and hence every forecast, unchanged.

Standardization is computed through exact integer arithmetic (see
``normalize``) so that "unchanged" holds bit-for-bit whenever the channel
rescaling itself is exact in floating point, not merely to rounding error.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import (
    DegenerateWindow,
    InsufficientContext,
    InsufficientTraining,
    OutOfRange,
)
from .timeseries import (
    CADENCE,
    STEPS_PER_DAY,
    ChannelName,
    Penetration,
    TimeSeriesFrame,
    WEATHER_CHANNELS,
    interpolate_linear,
)

RIDGE_LAMBDA = 1e-3
MIN_TRAINING_DAYS = 14
DEGENERATE_STD = 1e-12

NETLOAD_LAGS = {
    "min15": (1, 2, 3, 96),
    "hour24": (96, 192, 672),
}


class Horizon(str, Enum):
    MIN15 = "min15"
    HOUR24 = "hour24"

    @property
    def lags(self) -> tuple[int, ...]:
        return NETLOAD_LAGS[self.value]


@dataclass(frozen=True)
class NormalizationStats:
    mean: float
    std: float
    degenerate: bool


@dataclass(frozen=True)
class ForecastSeries:
    """Point forecast with 95% bounds on the frame's 15-minute grid."""

    start: datetime
    point: np.ndarray
    lower95: np.ndarray
    upper95: np.ndarray
    horizon: Horizon

    def __post_init__(self):
        if not (len(self.point) == len(self.lower95) == len(self.upper95)):
            raise ValueError("forecast arrays differ in length")
        if np.any(self.lower95 > self.upper95):
            raise ValueError("lower95 exceeds upper95")

    def __len__(self) -> int:
        return len(self.point)


@dataclass(frozen=True)
class ForecasterModel:
    """Fitted coefficients plus residual quantiles for interval bounds.

    Anything with this class's ``horizon``/``penetration`` attributes and a
    ``predict(context, target_start, target_end) -> ForecastSeries`` method
    can stand in for it wherever the engine or service needs a forecaster,
    so an external model can be slotted in behind the same surface.
    """

    horizon: Horizon
    penetration: Penetration
    feature_spec: tuple[tuple[str, int], ...]   # (channel, lag in steps)
    weights: np.ndarray                          # one per feature_spec entry + 4 harmonics
    intercept: float
    residual_q025: float
    residual_q975: float
    training_start: datetime
    training_end: datetime

    def __post_init__(self):
        if self.residual_q025 > self.residual_q975:
            raise ValueError("residual quantiles out of order")

    def predict(self, context: TimeSeriesFrame, target_start: datetime,
                target_end: datetime) -> "ForecastSeries":
        return predict(self, context, target_start, target_end)


def normalize(values) -> tuple[np.ndarray, NormalizationStats]:
    """Z-score a window against its own population mean and std.

    The z-scores are derived through exact integer arithmetic: each float is
    decomposed onto a common power-of-two grid, and each squared z-score is
    formed as a ratio of exact integers before the only two roundings
    (int division, sqrt). Any exact affine map of the input therefore yields
    bit-identical output. Windows with std below 1e-12 come back as all
    zeros, flagged degenerate.
    """
    x = np.asarray(values, dtype=np.float64)
    n = x.size
    if n < 2:
        raise DegenerateWindow("normalization needs at least 2 samples")
    if np.isnan(x).any():
        raise ValueError("cannot normalize missing samples")
    mant, exp = np.frexp(x)
    m53 = (mant * 9007199254740992.0).astype(np.int64)   # mant * 2^53, exact
    shift = exp - 53
    base = int(shift.min())
    ks = [int(m) << int(s - base) for m, s in zip(m53, shift)]
    total = sum(ks)
    us = [n * k - total for k in ks]
    sq = sum(u * u for u in us)
    mean = math.ldexp(total / n, base)
    if sq == 0:
        return np.zeros(n), NormalizationStats(mean=mean, std=0.0, degenerate=True)
    std = math.ldexp(math.sqrt(sq / n ** 3), base)
    if std < DEGENERATE_STD:
        return np.zeros(n), NormalizationStats(mean=mean, std=std, degenerate=True)
    z = np.empty(n)
    for i, u in enumerate(us):
        z[i] = math.copysign(math.sqrt((n * u * u) / sq), u)
    return z, NormalizationStats(mean=mean, std=std, degenerate=False)


def _time_harmonics(start: datetime, indices: np.ndarray) -> np.ndarray:
    """sin/cos of time-of-day and day-of-week for the given frame indices."""
    epoch_min = np.array([(start + CADENCE * int(i) - datetime(1970, 1, 1, tzinfo=timezone.utc))
                          // timedelta(minutes=1) for i in indices], dtype=np.float64)
    tod = 2.0 * np.pi * (epoch_min % 1440.0) / 1440.0
    # 1970-01-01 was a Thursday (weekday 3)
    dow = 2.0 * np.pi * (((epoch_min // 1440.0) + 3.0) % 7.0) / 7.0
    return np.column_stack([np.sin(tod), np.cos(tod), np.sin(dow), np.cos(dow)])


def _feature_matrix(frame: TimeSeriesFrame, horizon: Horizon,
                    target_idx: np.ndarray) -> np.ndarray:
    """Assemble the design matrix for the given target indices.

    Weather features are z-scored against the whole presented window;
    net-load lags stay in raw kW so the lag terms anchor the forecast to the
    deployment window's level, and lag values always come from actuals.
    """
    cols: list[np.ndarray] = []
    for name in WEATHER_CHANNELS:
        z, _ = normalize(frame.channel(name).values)
        cols.append(z[target_idx])
    netload = frame.channel(ChannelName.NET_LOAD_ACTUAL).values
    for lag in horizon.lags:
        cols.append(netload[target_idx - lag])
    harm = _time_harmonics(frame.start, target_idx)
    return np.column_stack(cols + [harm])


def _channel_spec(horizon: Horizon) -> tuple[tuple[str, int], ...]:
    spec = [(name.value, 0) for name in WEATHER_CHANNELS]
    spec += [(ChannelName.NET_LOAD_ACTUAL.value, lag) for lag in horizon.lags]
    return tuple(spec)


def fit(training: TimeSeriesFrame, horizon: Horizon | str,
        penetration: Penetration | str) -> ForecasterModel:
    """Fit the ridge reference model on an interpolated training window."""
    horizon = Horizon(horizon)
    penetration = Penetration(penetration)
    if training.n_steps < MIN_TRAINING_DAYS * STEPS_PER_DAY:
        raise InsufficientTraining(
            f"training window must span at least {MIN_TRAINING_DAYS} days")
    for name in (*WEATHER_CHANNELS, ChannelName.NET_LOAD_ACTUAL):
        training = interpolate_linear(training, name)
    max_lag = max(horizon.lags)
    target_idx = np.arange(max_lag, training.n_steps)
    X = _feature_matrix(training, horizon, target_idx)
    y = training.channel(ChannelName.NET_LOAD_ACTUAL).values[target_idx]
    n_feat = X.shape[1]
    A = np.column_stack([X, np.ones(len(X))])
    gram = A.T @ A
    gram[np.arange(n_feat), np.arange(n_feat)] += RIDGE_LAMBDA
    theta = np.linalg.solve(gram, A.T @ y)
    residuals = y - A @ theta
    q025, q975 = np.percentile(residuals, [2.5, 97.5], method="linear")
    return ForecasterModel(
        horizon=horizon,
        penetration=penetration,
        feature_spec=_channel_spec(horizon),
        weights=theta[:n_feat],
        intercept=float(theta[n_feat]),
        residual_q025=float(q025),
        residual_q975=float(q975),
        training_start=training.start,
        training_end=training.end,
    )


def predict(model: ForecasterModel, context: TimeSeriesFrame,
            target_start: datetime, target_end: datetime) -> ForecastSeries:
    """Forecast [target_start, target_end) from the presented window.

    Each step is forecast independently; net-load lags always read actual
    values, which for the 24-hour horizon are at least 96 steps old.
    """
    try:
        i0 = context.index_of(target_start)
    except OutOfRange:
        raise InsufficientContext("target start outside presented window")
    steps = (target_end - target_start) // CADENCE
    if steps < 1 or (target_end - target_start) % CADENCE:
        raise InsufficientContext("target range must be a positive 15-minute grid span")
    i1 = i0 + int(steps)
    if i1 > context.n_steps:
        raise InsufficientContext("target end outside presented window")
    max_lag = max(model.horizon.lags)
    if i0 < max_lag:
        raise InsufficientContext(
            f"context must cover {max_lag} steps before the target for lags")
    target_idx = np.arange(i0, i1)
    X = _feature_matrix(context, model.horizon, target_idx)
    point = X @ model.weights + model.intercept
    return ForecastSeries(
        start=target_start,
        point=point,
        lower95=point + model.residual_q025,
        upper95=point + model.residual_q975,
        horizon=model.horizon,
    )


MODEL_SCHEMA_VERSION = 1


def model_to_json(model: ForecasterModel) -> str:
    doc = {
        "schema_version": MODEL_SCHEMA_VERSION,
        "horizon": model.horizon.value,
        "penetration": model.penetration.value,
        "feature_spec": [list(entry) for entry in model.feature_spec],
        "weights": [float(w) for w in model.weights],
        "intercept": model.intercept,
        "residual_q025": model.residual_q025,
        "residual_q975": model.residual_q975,
        "training_start": model.training_start.isoformat(),
        "training_end": model.training_end.isoformat(),
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def model_from_json(text: str) -> ForecasterModel:
    doc = json.loads(text)
    if doc.get("schema_version") != MODEL_SCHEMA_VERSION:
        raise ValueError(f"unsupported model schema {doc.get('schema_version')!r}")
    return ForecasterModel(
        horizon=Horizon(doc["horizon"]),
        penetration=Penetration(doc["penetration"]),
        feature_spec=tuple((c, int(l)) for c, l in doc["feature_spec"]),
        weights=np.asarray(doc["weights"], dtype=np.float64),
        intercept=float(doc["intercept"]),
        residual_q025=float(doc["residual_q025"]),
        residual_q975=float(doc["residual_q975"]),
        training_start=datetime.fromisoformat(doc["training_start"]),
        training_end=datetime.fromisoformat(doc["training_end"]),
    )


def save_model(model: ForecasterModel, path: str | Path) -> None:
    Path(path).write_text(model_to_json(model))


def load_model(path: str | Path) -> ForecasterModel:
    return model_from_json(Path(path).read_text())
