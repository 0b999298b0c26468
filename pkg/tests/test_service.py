"""HTTP surface: series, forecast, experiment lifecycle, meta."""

from __future__ import annotations

import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from forte.forecaster import model_to_json
from forte.service import create_app
from forte.workspace import Workspace

from test_experiment import make_spec
from forte.experiment import spec_to_dict


@pytest.fixture(scope="module")
def workspace(tmp_path_factory, year_dataset, model_p50_min15):
    data_dir = tmp_path_factory.mktemp("service-data")
    ws = Workspace(data_dir)
    ws.save_dataset(year_dataset)
    ws.save_model(model_p50_min15)
    return ws


@pytest.fixture(scope="module")
def client(workspace):
    app = create_app(workspace, context_days=2)
    with TestClient(app) as c:
        yield c
    app.state.runner.shutdown()


def spec_body(**overrides):
    doc = spec_to_dict(make_spec())
    doc.pop("schema_version")
    doc.update(overrides)
    return doc


def wait_for_completion(client, experiment_id, timeout_s=60.0):
    deadline = time.monotonic() + timeout_s
    while time.monotonic() < deadline:
        doc = client.get(f"/api/experiments/{experiment_id}").json()
        if doc["status"] in ("completed", "failed"):
            return doc
        time.sleep(0.05)
    raise AssertionError("experiment did not finish in time")


class TestMeta:
    def test_coverage_is_calendar_year(self, client):
        doc = client.get("/api/meta").json()
        assert doc["coverage"]["start"].startswith("2020-01-01T00:00:00")
        assert doc["coverage"]["end"].startswith("2021-01-01T00:00:00")

    def test_fit_status(self, client):
        doc = client.get("/api/meta").json()
        assert doc["models"] == {"p50/min15": True}

    def test_fit_status_empty_without_models(self, tmp_path, year_dataset):
        ws = Workspace(tmp_path / "bare")
        ws.save_dataset(year_dataset)
        bare = TestClient(create_app(ws))
        assert bare.get("/api/meta").json()["models"] == {}


class TestSeries:
    def test_full_quality_range(self, client):
        r = client.get("/api/series", params={
            "start": "2020-03-01T00:00:00Z", "end": "2020-03-02T00:00:00Z",
            "penetration": "p50", "channels": "temperature,net_load_actual"})
        assert r.status_code == 200
        doc = r.json()
        assert doc["n_steps"] == 96
        assert set(doc["channels"]) == {"temperature", "net_load_actual"}
        assert all(q == "observed" for q in doc["channels"]["temperature"]["quality"])
        assert doc["data_quality"]["temperature"] == 0.0

    def test_gappy_range_shows_interpolated(self, tmp_path, year_dataset):
        from forte.synth import inject_gaps

        ws = Workspace(tmp_path / "gappy")
        ws.save_dataset(inject_gaps(year_dataset, 0.10, seed=3))
        gappy = TestClient(create_app(ws))
        doc = gappy.get("/api/series", params={
            "start": "2020-03-01T00:00:00Z", "end": "2020-03-08T00:00:00Z",
            "penetration": "p0"}).json()
        quality = doc["channels"]["temperature"]["quality"]
        assert "interpolated" in quality
        assert doc["data_quality"]["temperature"] > 0.0
        values = doc["channels"]["temperature"]["values"]
        assert all(v is not None for v in values)

    def test_end_before_start(self, client):
        r = client.get("/api/series", params={
            "start": "2020-03-02T00:00:00Z", "end": "2020-03-01T00:00:00Z"})
        assert r.status_code == 400

    def test_unknown_channel(self, client):
        r = client.get("/api/series", params={
            "start": "2020-03-01T00:00:00Z", "end": "2020-03-02T00:00:00Z",
            "channels": "wind_speed"})
        assert r.status_code == 404

    def test_errors_carry_machine_readable_codes(self, client):
        r = client.get("/api/series", params={
            "start": "2020-03-02T00:00:00Z", "end": "2020-03-01T00:00:00Z"})
        body = r.json()
        assert body["code"] == "out_of_range"
        assert isinstance(body["message"], str) and body["message"]


class TestForecast:
    BODY = {
        "start": "2020-02-03T00:00:00Z", "end": "2020-02-05T00:00:00Z",
        "penetration": "p50", "horizon": "min15",
    }

    def test_identical_requests_identical_responses(self, client):
        a = client.post("/api/forecast", json=self.BODY).json()
        b = client.post("/api/forecast", json=self.BODY).json()
        assert a == b

    def test_forecast_shape_and_metrics(self, client):
        doc = client.post("/api/forecast", json=self.BODY).json()
        assert len(doc["forecast"]["point"]) == 192
        assert len(doc["actual"]) == 192
        assert doc["metrics"]["mae"] >= 0.0
        assert doc["noise_seed"] is None

    def test_override_changes_forecast(self, client):
        base = client.post("/api/forecast", json=self.BODY).json()
        edited = client.post("/api/forecast", json={
            **self.BODY,
            "overrides": [{"channel": "temperature",
                           "timestamp": "2020-02-03T06:00:00Z", "value": 75.0}],
        }).json()
        assert edited["forecast"]["point"] != base["forecast"]["point"]
        assert edited["actual"] == base["actual"]

    def test_override_outside_window(self, client):
        r = client.post("/api/forecast", json={
            **self.BODY,
            "overrides": [{"channel": "temperature",
                           "timestamp": "2020-06-01T00:00:00Z", "value": 75.0}],
        })
        assert r.status_code == 422

    def test_ad_hoc_noise_level_seven_rejected(self, client):
        r = client.post("/api/forecast", json={
            **self.BODY, "ad_hoc_noise": {"channel": "temperature", "level": 7}})
        assert r.status_code == 422

    def test_ad_hoc_noise_echoes_seed(self, client):
        doc = client.post("/api/forecast", json={
            **self.BODY, "ad_hoc_noise": {"channel": "temperature", "level": 5}}).json()
        assert isinstance(doc["noise_seed"], int)

    def test_model_not_fitted(self, client):
        r = client.post("/api/forecast", json={**self.BODY, "penetration": "p0"})
        assert r.status_code == 409

    def test_bad_range(self, client):
        r = client.post("/api/forecast", json={
            **self.BODY, "start": "2020-02-05T00:00:00Z", "end": "2020-02-03T00:00:00Z"})
        assert r.status_code == 400

    def test_freeze_axis_hint_ignored_server_side(self, client):
        base = client.post("/api/forecast", json=self.BODY).json()
        hinted = client.post("/api/forecast", json={
            **self.BODY, "freeze_axis_hint": {"ymin": 0, "ymax": 9}})
        assert hinted.status_code == 200
        assert hinted.json() == base


class TestExperiments:
    def test_lifecycle(self, client):
        r = client.post("/api/experiments", json=spec_body(observations=1))
        assert r.status_code == 202
        doc = r.json()
        assert doc["eta_seconds"] > 0
        experiment_id = doc["id"]

        listed = client.get("/api/experiments").json()
        assert any(e["id"] == experiment_id for e in listed)

        final = wait_for_completion(client, experiment_id)
        assert final["status"] == "completed"
        spec = spec_body(observations=1)
        n_expected = len(spec["months"]) * len(spec["noise_levels"]) * 1
        assert len(final["results"]["records"]) == n_expected

    def test_invalid_spec_field_errors(self, client):
        r = client.post("/api/experiments", json=spec_body(months=[]))
        assert r.status_code == 400
        assert "months" in r.json()["field_errors"]

    def test_setup_error_rejected_before_queueing(self, client):
        r = client.post("/api/experiments", json=spec_body(months=[1], day_window=[1, 2]))
        assert r.status_code == 400

    def test_duplicate_names_allowed(self, client):
        a = client.post("/api/experiments", json=spec_body(name="dup", noise_levels=[]))
        b = client.post("/api/experiments", json=spec_body(name="dup", noise_levels=[]))
        assert a.status_code == b.status_code == 202
        assert a.json()["id"] != b.json()["id"]
        wait_for_completion(client, a.json()["id"])
        wait_for_completion(client, b.json()["id"])

    def test_get_unknown_id(self, client):
        assert client.get("/api/experiments/missing").status_code == 404

    def test_delete(self, client):
        r = client.post("/api/experiments", json=spec_body(noise_levels=[]))
        experiment_id = r.json()["id"]
        wait_for_completion(client, experiment_id)
        assert client.delete(f"/api/experiments/{experiment_id}").status_code == 204
        assert client.get(f"/api/experiments/{experiment_id}").status_code == 404

    def test_delete_unknown(self, client):
        assert client.delete("/api/experiments/missing").status_code == 404

    def test_progress_visible_while_running(self, client):
        r = client.post("/api/experiments", json=spec_body(observations=30))
        experiment_id = r.json()["id"]
        doc = client.get(f"/api/experiments/{experiment_id}").json()
        assert doc["status"] in ("queued", "running", "completed")
        final = wait_for_completion(client, experiment_id)
        assert final["progress"] == 1.0
