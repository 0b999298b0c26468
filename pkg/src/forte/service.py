"""HTTP interface for the UI and for scripts.

Everything is JSON over REST under /api. Series responses are columnar
(timestamps implicit from start plus cadence). Forecast requests are
stateless: edits and ad-hoc noise live only in the request, and the server
echoes the seed it drew for ad-hoc noise so an interesting interactive
observation can be turned into a reproducible experiment.
"""

from __future__ import annotations

import secrets
import threading
import time
from datetime import datetime, timedelta, timezone
from queue import Empty, Queue
from typing import Any

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .errors import (
    ChannelNotFound,
    EmptyChannel,
    ExperimentSetupError,
    ForteError,
    InsufficientContext,
    InvalidCombination,
    InvalidLevel,
    InvalidSpec,
    ModelNotFitted,
    NotFound,
    OutOfRange,
)
from .experiment import (
    ExperimentEngine,
    ExperimentStatus,
    results_to_dict,
    spec_from_dict,
    spec_to_dict,
)
from .forecaster import ForecastSeries, Horizon
from .metrics import MetricSet, metric_set
from .noise import ad_hoc_noise
from .timeseries import (
    ChannelName,
    Penetration,
    SampleQuality,
    TimeSeriesFrame,
    WEATHER_CHANNELS,
    apply_override,
    data_quality,
    interpolate_linear,
)
from .workspace import Workspace

SCHEMA_VERSION = 1
DEFAULT_CONTEXT_DAYS = 28

_QUALITY_NAMES = {
    SampleQuality.OBSERVED: "observed",
    SampleQuality.MISSING: "missing",
    SampleQuality.INTERPOLATED: "interpolated",
    SampleQuality.USER_EDITED: "user_edited",
}

_STATUS_CODES: list[tuple[type[ForteError], int]] = [
    (ChannelNotFound, 404),
    (NotFound, 404),
    (ModelNotFitted, 409),
    (InvalidLevel, 422),
    (InvalidCombination, 422),
    (InsufficientContext, 422),
    (InvalidSpec, 400),
    (ExperimentSetupError, 400),
    (OutOfRange, 400),
    (EmptyChannel, 400),
]


class OverridePayload(BaseModel):
    channel: str
    timestamp: datetime
    value: float


class AdHocNoisePayload(BaseModel):
    channel: str
    level: float


class ForecastRequest(BaseModel):
    start: datetime
    end: datetime
    penetration: str
    horizon: str
    overrides: list[OverridePayload] = Field(default_factory=list)
    ad_hoc_noise: AdHocNoisePayload | None = None


class JobRunner:
    """Processes experiments one at a time on a background thread."""

    def __init__(self, engine: ExperimentEngine, store):
        self.engine = engine
        self.store = store
        self.queue: Queue = Queue()
        self.cancel_events: dict[str, threading.Event] = {}
        self.current_id: str | None = None
        self._lock = threading.Lock()
        self._stop = threading.Event()
        self.thread = threading.Thread(target=self._loop, daemon=True)
        self.thread.start()

    def submit(self, experiment_id: str, spec) -> None:
        with self._lock:
            self.cancel_events[experiment_id] = threading.Event()
        self.queue.put((experiment_id, spec))

    def cancel(self, experiment_id: str, wait_s: float = 15.0) -> None:
        with self._lock:
            event = self.cancel_events.get(experiment_id)
            running = self.current_id == experiment_id
        if event is None:
            return
        event.set()
        if not running:
            return
        deadline = time.monotonic() + wait_s
        while time.monotonic() < deadline:
            try:
                status = self.store.load(experiment_id).status
            except ForteError:
                return
            if status in (ExperimentStatus.COMPLETED, ExperimentStatus.FAILED):
                return
            time.sleep(0.05)

    def shutdown(self) -> None:
        self._stop.set()
        self.queue.put(None)

    def _loop(self) -> None:
        while not self._stop.is_set():
            try:
                item = self.queue.get(timeout=0.2)
            except Empty:
                continue
            if item is None:
                break
            experiment_id, spec = item
            with self._lock:
                cancel = self.cancel_events[experiment_id]
                self.current_id = experiment_id
            try:
                if cancel.is_set():
                    continue
                last_write = [0.0]

                def on_progress(progress: float) -> None:
                    now = time.monotonic()
                    if now - last_write[0] >= 0.25:
                        last_write[0] = now
                        try:
                            self.store.set_progress(experiment_id, ExperimentStatus.RUNNING,
                                                    progress)
                        except ForteError:
                            pass
                try:
                    self.store.set_progress(experiment_id, ExperimentStatus.RUNNING, 0.0)
                    results = self.engine.run(spec, progress_cb=on_progress, cancel=cancel)
                    self.store.commit_results(experiment_id, results)
                except ForteError:
                    pass  # experiment dir deleted mid-run
            finally:
                with self._lock:
                    self.current_id = None
                    self.cancel_events.pop(experiment_id, None)


def _series_payload(frame: TimeSeriesFrame, names: list[ChannelName]) -> dict[str, Any]:
    channels = {}
    quality_pct = {}
    for name in names:
        interpolated = frame
        try:
            interpolated = interpolate_linear(frame, name)
        except ForteError:
            pass  # nothing observed: ship the raw missing samples
        ch = interpolated.channel(name)
        values = [None if q == SampleQuality.MISSING else float(v)
                  for v, q in zip(ch.values, ch.quality)]
        channels[name.value] = {
            "values": values,
            "quality": [_QUALITY_NAMES[SampleQuality(q)] for q in ch.quality],
        }
        quality_pct[name.value] = data_quality(frame, name)
    return {
        "start": frame.start.isoformat(),
        "cadence_minutes": 15,
        "n_steps": frame.n_steps,
        "penetration": frame.penetration.value,
        "channels": channels,
        "data_quality": quality_pct,
    }


def _forecast_payload(forecast: ForecastSeries) -> dict[str, Any]:
    return {
        "start": forecast.start.isoformat(),
        "cadence_minutes": 15,
        "horizon": forecast.horizon.value,
        "point": [float(v) for v in forecast.point],
        "lower95": [float(v) for v in forecast.lower95],
        "upper95": [float(v) for v in forecast.upper95],
    }


def _metrics_payload(m: MetricSet) -> dict[str, Any]:
    return {"mae": m.mae, "mape": m.mape, "n_used": m.n_used,
            "n_excluded_mape": m.n_excluded_mape}


def _stored_payload(entry, include_results: bool) -> dict[str, Any]:
    doc = {
        "id": entry.id,
        "created_at": entry.created_at.isoformat(),
        "name": entry.spec.name,
        "status": entry.status.value,
        "progress": entry.progress,
        "error": entry.error,
    }
    if include_results:
        doc["spec"] = spec_to_dict(entry.spec)
        doc["results"] = results_to_dict(entry.results) if entry.results else None
    return doc


def create_app(workspace: Workspace, context_days: int = DEFAULT_CONTEXT_DAYS,
               workers: int = 1) -> FastAPI:
    dataset = workspace.load_dataset()
    models = workspace.load_models()
    store = workspace.store()
    store.mark_interrupted()
    engine = ExperimentEngine(dataset, models, workers=workers)
    runner = JobRunner(engine, store)

    app = FastAPI(title="forte", version="0.1.0")
    app.state.runner = runner
    app.state.engine = engine

    @app.exception_handler(ForteError)
    async def forte_error_handler(request: Request, exc: ForteError):
        status = next((code for cls, code in _STATUS_CODES if isinstance(exc, cls)), 400)
        body: dict[str, Any] = {"code": exc.code, "message": str(exc)}
        if isinstance(exc, InvalidSpec):
            body["field_errors"] = exc.field_errors
        return JSONResponse(status_code=status, content=body)

    def parse_ts(raw: str, field: str) -> datetime:
        try:
            ts = datetime.fromisoformat(raw.replace("Z", "+00:00"))
        except ValueError:
            raise OutOfRange(f"{field}: bad timestamp {raw!r}")
        return ts if ts.tzinfo else ts.replace(tzinfo=timezone.utc)

    @app.get("/api/meta")
    def meta():
        return {
            "schema_version": SCHEMA_VERSION,
            "coverage": {"start": dataset.start.isoformat(), "end": dataset.end.isoformat()},
            "penetrations": [p.value for p in Penetration],
            "horizons": [h.value for h in Horizon],
            "channels": [c.value for c in ChannelName],
            "models": {f"{p}/{h}": True for (p, h) in sorted(models)},
            "context_days": context_days,
        }

    @app.get("/api/series")
    def series(start: str, end: str, penetration: str = "p0", channels: str | None = None):
        t0 = parse_ts(start, "start")
        t1 = parse_ts(end, "end")
        if t1 <= t0:
            raise OutOfRange("end must come after start")
        pen = _parse_penetration(penetration)
        if channels is None:
            names = [*WEATHER_CHANNELS, ChannelName.NET_LOAD_ACTUAL]
        else:
            names = []
            for raw in channels.split(","):
                try:
                    names.append(ChannelName(raw.strip()))
                except ValueError:
                    raise ChannelNotFound(f"unknown channel {raw.strip()!r}")
        frame = dataset.frame(t0, t1, pen, channels=tuple(names))
        return _series_payload(frame, names)

    @app.post("/api/forecast")
    def forecast(req: ForecastRequest):
        t0 = req.start if req.start.tzinfo else req.start.replace(tzinfo=timezone.utc)
        t1 = req.end if req.end.tzinfo else req.end.replace(tzinfo=timezone.utc)
        if t1 <= t0:
            raise OutOfRange("end must come after start")
        pen = _parse_penetration(req.penetration)
        try:
            horizon = Horizon(req.horizon)
        except ValueError:
            raise OutOfRange(f"unknown horizon {req.horizon!r}")
        model = models.get((pen.value, horizon.value))
        if model is None:
            raise ModelNotFitted(f"no fitted model for {pen.value}/{horizon.value}")
        context_start = max(dataset.start, t0 - timedelta(days=context_days))
        frame = dataset.frame(context_start, t1, pen)
        for name in (*WEATHER_CHANNELS, ChannelName.NET_LOAD_ACTUAL):
            frame = interpolate_linear(frame, name)
        # metrics always score against the pre-edit actuals
        i0 = frame.index_of(t0)
        actual = frame.channel(ChannelName.NET_LOAD_ACTUAL).values[
            i0:i0 + int((t1 - t0) // timedelta(minutes=15))].copy()
        for ov in req.overrides:
            try:
                name = ChannelName(ov.channel)
            except ValueError:
                raise ChannelNotFound(f"unknown channel {ov.channel!r}")
            try:
                index = frame.index_of(ov.timestamp)
            except OutOfRange:
                raise InsufficientContext(
                    f"override timestamp {ov.timestamp.isoformat()} outside the "
                    f"context+target window")
            frame = apply_override(frame, name, index, ov.value)
        noise_seed = None
        if req.ad_hoc_noise is not None:
            noise_seed = secrets.randbits(63)
            frame = ad_hoc_noise(frame, req.ad_hoc_noise.channel,
                                 req.ad_hoc_noise.level, noise_seed)
        result = model.predict(frame, t0, t1)
        return {
            "actual": [float(v) for v in actual],
            "forecast": _forecast_payload(result),
            "metrics": _metrics_payload(metric_set(actual, result.point)),
            "noise_seed": noise_seed,
            "context_start": frame.start.isoformat(),
        }

    @app.post("/api/experiments", status_code=202)
    def create_experiment(body: dict):
        spec = spec_from_dict(body)
        engine.validate(spec)
        if not engine.calibrated:
            engine.calibrate(spec)
        eta, calibrated = engine.estimate(spec)
        experiment_id = store.create(spec)
        runner.submit(experiment_id, spec)
        return {"id": experiment_id, "eta_seconds": eta, "calibrated": calibrated}

    @app.get("/api/experiments")
    def list_experiments():
        return [_stored_payload(entry, include_results=False) for entry in store.list()]

    @app.get("/api/experiments/{experiment_id}")
    def get_experiment(experiment_id: str):
        return _stored_payload(store.load(experiment_id), include_results=True)

    @app.delete("/api/experiments/{experiment_id}", status_code=204)
    def delete_experiment(experiment_id: str):
        store.load(experiment_id)  # 404 before any cancellation work
        runner.cancel(experiment_id)
        store.delete(experiment_id)

    return app


def _parse_penetration(raw: str) -> Penetration:
    try:
        return Penetration(raw)
    except ValueError:
        raise OutOfRange(f"unknown penetration {raw!r}")
