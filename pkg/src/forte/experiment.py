"""Noise-sensitivity experiment definitions and the deterministic runner.

An experiment perturbs one weather variable over chosen month/day windows at
several noise levels, forecasts repeatedly, and records the deviation of
MAE/MAPE from the month's 0%-noise baseline. Every (month, level,
observation) cell derives its own seed from the spec seed, so results are
identical regardless of worker count or scheduling, and any single record
can be recomputed in isolation.
"""

from __future__ import annotations

import calendar
import hashlib
import json
import statistics
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from enum import Enum
from typing import Callable

import numpy as np

from .dataset import Dataset
from .errors import ExperimentSetupError, InvalidSpec, NotReady
from .forecaster import ForecasterModel, Horizon
from .metrics import DeviationRecord, MetricSet, deviation, metric_set
from .noise import NoiseDirection, NoiseMode, NoisePerturbation, perturb_frame
from .timeseries import (
    CADENCE,
    ChannelName,
    Penetration,
    TimeSeriesFrame,
    WEATHER_CHANNELS,
    interpolate_linear,
)

SPEC_SCHEMA_VERSION = 1
RESULTS_SCHEMA_VERSION = 1
DEFAULT_FORECAST_LATENCY_S = 0.05
ESTIMATE_SAFETY_FACTOR = 1.2

MONTH_NAMES = ["Jan", "Feb", "Mar", "Apr", "May", "Jun",
               "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"]


class ExperimentStatus(str, Enum):
    QUEUED = "queued"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


@dataclass(frozen=True)
class ExperimentSpec:
    name: str
    description: str
    variable: ChannelName
    penetration: Penetration
    horizon: Horizon
    months: tuple[int, ...]
    day_window: tuple[int, int]
    noise_levels: tuple[float, ...]
    mode: NoiseMode
    direction: NoiseDirection
    observations: int
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "variable", ChannelName(self.variable))
        object.__setattr__(self, "penetration", Penetration(self.penetration))
        object.__setattr__(self, "horizon", Horizon(self.horizon))
        object.__setattr__(self, "mode", NoiseMode(self.mode))
        object.__setattr__(self, "direction", NoiseDirection(self.direction))
        object.__setattr__(self, "months", tuple(int(m) for m in self.months))
        object.__setattr__(self, "day_window", tuple(int(d) for d in self.day_window))
        object.__setattr__(self, "noise_levels", tuple(float(v) for v in self.noise_levels))
        errors = validate_spec_fields(self)
        if errors:
            raise InvalidSpec(errors)


def validate_spec_fields(spec: ExperimentSpec) -> dict[str, str]:
    errors: dict[str, str] = {}
    if not spec.name:
        errors["name"] = "name must not be empty"
    if spec.variable not in WEATHER_CHANNELS:
        errors["variable"] = f"{spec.variable.value} is not a perturbable weather channel"
    if not spec.months:
        errors["months"] = "at least one month required"
    elif any(not 1 <= m <= 12 for m in spec.months):
        errors["months"] = "months must lie in 1..12"
    elif len(set(spec.months)) != len(spec.months):
        errors["months"] = "months must be unique"
    lo, hi = spec.day_window
    if not (1 <= lo <= hi <= 31):
        errors["day_window"] = "day window must satisfy 1 <= start <= end <= 31"
    if any(not 0.0 < lv <= 30.0 for lv in spec.noise_levels):
        errors["noise_levels"] = "levels must lie in (0, 30]; 0 is the implicit baseline"
    if len(set(spec.noise_levels)) != len(spec.noise_levels):
        errors["noise_levels"] = "levels must be unique"
    if spec.observations < 1:
        errors["observations"] = "observations must be >= 1"
    if spec.mode is NoiseMode.CONSTANT_BIAS and spec.direction is NoiseDirection.BOTH:
        errors["direction"] = "a constant bias cannot point both ways"
    return errors


@dataclass
class ExperimentResults:
    spec: ExperimentSpec
    status: ExperimentStatus = ExperimentStatus.QUEUED
    progress: float = 0.0
    baseline: dict[int, MetricSet] = field(default_factory=dict)
    records: list[DeviationRecord] = field(default_factory=list)
    aggregates: list[dict] = field(default_factory=list)
    heatmap: dict = field(default_factory=dict)
    error: str | None = None


@dataclass(frozen=True)
class Aggregation:
    """Per-cell means plus the chart payloads derived from raw records."""

    cell_means: list[dict]
    heatmap: dict
    scatter: dict[int, dict[str, list[list[float]]]]


def record_seed(spec_seed: int, month: int, level: float, observation: int) -> int:
    """Stable 64-bit seed for one experiment cell."""
    key = f"{spec_seed}:{month}:{level!r}:{observation}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "big")


def _aggregate_records(spec: ExperimentSpec,
                       records: list[DeviationRecord]) -> tuple[list[dict], dict]:
    cells: list[dict] = []
    matrix: list[list[float | None]] = []
    for month in spec.months:
        row: list[float | None] = []
        for level in spec.noise_levels:
            group = [r for r in records if r.month == month and r.noise_level == level]
            if not group:
                row.append(None)
                continue
            mean_mae = statistics.fmean(r.mae_dev for r in group)
            mape_devs = [r.mape_dev for r in group if r.mape_dev is not None]
            mean_mape = statistics.fmean(mape_devs) if mape_devs else None
            cells.append({"month": month, "noise_level": level,
                          "mean_mae_dev": mean_mae, "mean_mape_dev": mean_mape})
            row.append(mean_mae)
        matrix.append(row)
    heatmap = {"months": list(spec.months), "levels": list(spec.noise_levels),
               "mae_dev": matrix}
    return cells, heatmap


def aggregate(results: ExperimentResults) -> Aggregation:
    """Means per (month, level), the heatmap matrix, and scatter payloads."""
    if results.status is not ExperimentStatus.COMPLETED:
        raise NotReady(f"experiment is {results.status.value}, not completed")
    cells, heatmap = _aggregate_records(results.spec, results.records)
    scatter: dict[int, dict[str, list[list[float]]]] = {}
    for month in results.spec.months:
        month_records = [r for r in results.records if r.month == month]
        scatter[month] = {
            "mae": [[r.noise_level, r.mae_dev] for r in month_records],
            "mape": [[r.noise_level, r.mape_dev] for r in month_records
                     if r.mape_dev is not None],
        }
    return Aggregation(cell_means=cells, heatmap=heatmap, scatter=scatter)


def estimate_duration(spec: ExperimentSpec, latency_s: float | None,
                      default_latency_s: float = DEFAULT_FORECAST_LATENCY_S
                      ) -> tuple[float, bool]:
    """Expected wall time in seconds and whether the estimate is calibrated."""
    calibrated = latency_s is not None
    per_forecast = latency_s if calibrated else default_latency_s
    n_forecasts = len(spec.months) * (1 + len(spec.noise_levels) * spec.observations)
    return n_forecasts * per_forecast * ESTIMATE_SAFETY_FACTOR, calibrated


class ExperimentCancelled(Exception):
    pass


class ExperimentEngine:
    """Runs experiments against one dataset and a registry of fitted models.

    The presented window per month is the target day span plus exactly the
    lag coverage the horizon needs, so early-January windows stay inside a
    single-year dataset.
    """

    def __init__(self, dataset: Dataset, models: dict[tuple[str, str], ForecasterModel],
                 workers: int = 1):
        self.dataset = dataset
        self.models = models
        self.workers = max(1, int(workers))
        self._latency_s: float | None = None

    @property
    def calibrated(self) -> bool:
        return self._latency_s is not None

    def model_for(self, spec: ExperimentSpec) -> ForecasterModel:
        key = (spec.penetration.value, spec.horizon.value)
        if key not in self.models:
            raise ExperimentSetupError(
                f"no fitted model for penetration={key[0]} horizon={key[1]}")
        return self.models[key]

    def month_window(self, spec: ExperimentSpec, month: int) -> tuple[datetime, datetime, datetime]:
        """(frame_start, target_start, target_end) for one month."""
        year = self.dataset.start.year
        lo, hi = spec.day_window
        target_start = datetime(year, month, lo, tzinfo=timezone.utc)
        target_end = datetime(year, month, hi, tzinfo=timezone.utc) + CADENCE * 96
        frame_start = target_start - CADENCE * max(spec.horizon.lags)
        return frame_start, target_start, target_end

    def validate(self, spec: ExperimentSpec) -> None:
        """Raise ExperimentSetupError before any work runs."""
        self.model_for(spec)
        year = self.dataset.start.year
        lo, hi = spec.day_window
        for month in spec.months:
            days = calendar.monthrange(year, month)[1]
            if hi > days:
                raise ExperimentSetupError(
                    f"day window {lo}-{hi} invalid for {MONTH_NAMES[month - 1]} {year}")
            frame_start, _, target_end = self.month_window(spec, month)
            if frame_start < self.dataset.start or target_end > self.dataset.end:
                raise ExperimentSetupError(
                    f"{MONTH_NAMES[month - 1]} window plus lag context exceeds dataset coverage")

    def _month_frame(self, spec: ExperimentSpec, month: int) -> tuple[TimeSeriesFrame, datetime, datetime]:
        frame_start, target_start, target_end = self.month_window(spec, month)
        frame = self.dataset.frame(frame_start, target_end, spec.penetration)
        for name in (*WEATHER_CHANNELS, ChannelName.NET_LOAD_ACTUAL):
            frame = interpolate_linear(frame, name)
        return frame, target_start, target_end

    def calibrate(self, spec: ExperimentSpec, n_forecasts: int = 5) -> float:
        """Warm-up run; stores and returns the median per-forecast latency."""
        self.validate(spec)
        model = self.model_for(spec)
        frame, t0, t1 = self._month_frame(spec, spec.months[0])
        timings = []
        for _ in range(max(5, n_forecasts)):
            started = time.perf_counter()
            model.predict(frame, t0, t1)
            timings.append(time.perf_counter() - started)
        self._latency_s = statistics.median(timings)
        return self._latency_s

    def estimate(self, spec: ExperimentSpec) -> tuple[float, bool]:
        return estimate_duration(spec, self._latency_s)

    def run(self, spec: ExperimentSpec,
            progress_cb: Callable[[float], None] | None = None,
            cancel: threading.Event | None = None) -> ExperimentResults:
        """Run to completion (or failure); never raises for forecast errors."""
        self.validate(spec)
        model = self.model_for(spec)
        results = ExperimentResults(spec=spec, status=ExperimentStatus.RUNNING)
        total = len(spec.months) * (1 + len(spec.noise_levels) * spec.observations)
        done = 0
        lock = threading.Lock()

        def bump():
            nonlocal done
            with lock:
                done += 1
                results.progress = done / total
            if progress_cb is not None:
                progress_cb(results.progress)

        def check_cancel():
            if cancel is not None and cancel.is_set():
                raise ExperimentCancelled()

        collected: dict[tuple[int, float, int], DeviationRecord] = {}
        try:
            for month in spec.months:
                check_cancel()
                frame, t0, t1 = self._month_frame(spec, month)
                actual = frame.channel(ChannelName.NET_LOAD_ACTUAL).values[
                    frame.index_of(t0):frame.index_of(t0) + len_steps(t0, t1)]
                baseline_forecast = model.predict(frame, t0, t1)
                base = metric_set(actual, baseline_forecast.point)
                results.baseline[month] = base
                bump()

                def run_cell(level: float, obs: int) -> DeviationRecord:
                    check_cancel()
                    p = NoisePerturbation(
                        variable=spec.variable, mode=spec.mode, direction=spec.direction,
                        level=level, seed=record_seed(spec.seed, month, level, obs))
                    forecast = model.predict(perturb_frame(frame, p), t0, t1)
                    mae_dev, mape_dev = deviation(metric_set(actual, forecast.point), base)
                    bump()
                    return DeviationRecord(month=month, noise_level=level, observation=obs,
                                           mae_dev=mae_dev, mape_dev=mape_dev)

                cells: list[tuple[float, int]] = [(level, obs) for level in spec.noise_levels
                                                  for obs in range(spec.observations)]
                if spec.mode is NoiseMode.CONSTANT_BIAS:
                    # bias ignores the seed, so all observations of a level are
                    # one effective draw; compute once and replicate
                    for level in spec.noise_levels:
                        first = run_cell(level, 0)
                        collected[(month, level, 0)] = first
                        for obs in range(1, spec.observations):
                            collected[(month, level, obs)] = replace(first, observation=obs)
                            bump()
                elif self.workers > 1:
                    with ThreadPoolExecutor(max_workers=self.workers) as pool:
                        futures = {pool.submit(run_cell, level, obs): (level, obs)
                                   for level, obs in cells}
                        for future, (level, obs) in futures.items():
                            collected[(month, level, obs)] = future.result()
                else:
                    for level, obs in cells:
                        collected[(month, level, obs)] = run_cell(level, obs)
        except ExperimentCancelled:
            results.status = ExperimentStatus.FAILED
            results.error = "cancelled"
        except Exception as exc:  # noqa: BLE001 - deliberate catch-all per contract
            results.status = ExperimentStatus.FAILED
            results.error = f"{type(exc).__name__}: {exc}"
        results.records = [collected[key] for key in sorted(collected)]
        if results.status is ExperimentStatus.RUNNING:
            results.aggregates, results.heatmap = _aggregate_records(spec, results.records)
            results.progress = 1.0
            results.status = ExperimentStatus.COMPLETED
        return results


def len_steps(start: datetime, end: datetime) -> int:
    return int((end - start) // CADENCE)


# --- canonical JSON / CSV encodings -----------------------------------------

def spec_to_dict(spec: ExperimentSpec) -> dict:
    return {
        "schema_version": SPEC_SCHEMA_VERSION,
        "name": spec.name,
        "description": spec.description,
        "variable": spec.variable.value,
        "penetration": spec.penetration.value,
        "horizon": spec.horizon.value,
        "months": list(spec.months),
        "day_window": list(spec.day_window),
        "noise_levels": list(spec.noise_levels),
        "mode": spec.mode.value,
        "direction": spec.direction.value,
        "observations": spec.observations,
        "seed": spec.seed,
    }


def spec_from_dict(doc: dict) -> ExperimentSpec:
    errors: dict[str, str] = {}
    required = ["name", "variable", "penetration", "horizon", "months", "day_window",
                "noise_levels", "mode", "direction", "observations", "seed"]
    for key in required:
        if key not in doc:
            errors[key] = "missing field"
    if errors:
        raise InvalidSpec(errors)
    try:
        return ExperimentSpec(
            name=str(doc["name"]),
            description=str(doc.get("description", "")),
            variable=doc["variable"],
            penetration=doc["penetration"],
            horizon=doc["horizon"],
            months=tuple(doc["months"]),
            day_window=tuple(doc["day_window"]),
            noise_levels=tuple(doc["noise_levels"]),
            mode=doc["mode"],
            direction=doc["direction"],
            observations=int(doc["observations"]),
            seed=int(doc["seed"]),
        )
    except InvalidSpec:
        raise
    except (ValueError, TypeError) as exc:
        raise InvalidSpec({"spec": str(exc)})


def _metricset_to_dict(m: MetricSet) -> dict:
    return {"mae": m.mae, "mape": m.mape, "n_used": m.n_used,
            "n_excluded_mape": m.n_excluded_mape}


def _metricset_from_dict(doc: dict) -> MetricSet:
    return MetricSet(mae=doc["mae"], mape=doc["mape"], n_used=doc["n_used"],
                     n_excluded_mape=doc["n_excluded_mape"])


def results_to_dict(results: ExperimentResults) -> dict:
    return {
        "schema_version": RESULTS_SCHEMA_VERSION,
        "spec": spec_to_dict(results.spec),
        "status": results.status.value,
        "progress": results.progress,
        "baseline": {str(m): _metricset_to_dict(b) for m, b in sorted(results.baseline.items())},
        "records": [
            {"month": r.month, "noise_level": r.noise_level, "observation": r.observation,
             "mae_dev": r.mae_dev, "mape_dev": r.mape_dev}
            for r in results.records
        ],
        "aggregates": results.aggregates,
        "heatmap": results.heatmap,
        "error": results.error,
    }


def results_from_dict(doc: dict) -> ExperimentResults:
    return ExperimentResults(
        spec=spec_from_dict(doc["spec"]),
        status=ExperimentStatus(doc["status"]),
        progress=float(doc["progress"]),
        baseline={int(m): _metricset_from_dict(b) for m, b in doc["baseline"].items()},
        records=[DeviationRecord(month=r["month"], noise_level=r["noise_level"],
                                 observation=r["observation"], mae_dev=r["mae_dev"],
                                 mape_dev=r["mape_dev"]) for r in doc["records"]],
        aggregates=list(doc["aggregates"]),
        heatmap=dict(doc["heatmap"]),
        error=doc.get("error"),
    )


def results_to_json(results: ExperimentResults) -> str:
    """Canonical encoding: stable key order, shortest-round-trip floats."""
    return json.dumps(results_to_dict(results), sort_keys=True, indent=2)


def results_to_csv(results: ExperimentResults) -> str:
    lines = ["month,noise_level,observation,mae_dev,mape_dev"]
    for r in results.records:
        mape_dev = "" if r.mape_dev is None else repr(r.mape_dev)
        lines.append(f"{r.month},{r.noise_level!r},{r.observation},{r.mae_dev!r},{mape_dev}")
    return "\n".join(lines) + "\n"
