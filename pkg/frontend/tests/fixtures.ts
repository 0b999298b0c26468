/** Canned API payloads used across the test suite. */

import type {
  ExperimentResultsPayload,
  ForecastResponse,
  SeriesResponse,
} from "../src/types.js";

export function allZeroResults(): ExperimentResultsPayload {
  const months = [1, 4, 7];
  const levels = [5, 15, 30];
  const records = months.flatMap((month) =>
    levels.flatMap((noise_level) =>
      [0, 1].map((observation) => ({
        month, noise_level, observation, mae_dev: 0.0, mape_dev: 0.0,
      }))));
  return {
    schema_version: 1,
    spec: {
      schema_version: 1, name: "bias-null", description: "",
      variable: "temperature", penetration: "p50", horizon: "min15",
      months, day_window: [3, 4], noise_levels: levels,
      mode: "constant_bias", direction: "add", observations: 2, seed: 7,
    },
    status: "completed",
    progress: 1.0,
    baseline: {
      "1": { mae: 0.21, mape: 4.1, n_used: 192, n_excluded_mape: 0 },
      "4": { mae: 0.75, mape: 9.0, n_used: 190, n_excluded_mape: 2 },
      "7": { mae: 0.4, mape: 6.2, n_used: 192, n_excluded_mape: 0 },
    },
    records,
    aggregates: months.flatMap((month) =>
      levels.map((noise_level) => ({
        month, noise_level, mean_mae_dev: 0.0, mean_mape_dev: 0.0,
      }))),
    heatmap: { months, levels, mae_dev: months.map(() => levels.map(() => 0.0)) },
    error: null,
  };
}

export function variedResults(): ExperimentResultsPayload {
  const base = allZeroResults();
  const values = [0.01, 0.03, 0.06, 0.005, 0.02, 0.04, 0.012, 0.05, 0.09];
  let i = 0;
  base.aggregates = base.aggregates.map((cell) => ({
    ...cell, mean_mae_dev: values[i % values.length]!, mean_mape_dev: values[(i++ * 7) % values.length]!,
  }));
  base.heatmap.mae_dev = base.heatmap.months.map((_, r) =>
    base.heatmap.levels.map((_, c) => values[(r * 3 + c) % values.length]!));
  base.records = base.records.map((r, k) => ({
    ...r, mae_dev: values[k % values.length]!, mape_dev: values[(k * 5) % values.length]!,
  }));
  return base;
}

/** Two days of 15-minute series with one interpolated temperature sample. */
export function seriesFixture(): SeriesResponse {
  const n = 192;
  const values: (number | null)[] = [];
  const quality: ("observed" | "interpolated")[] = [];
  for (let i = 0; i < n; i++) {
    values.push(40 + 10 * Math.sin((2 * Math.PI * i) / 96));
    quality.push(i === 100 ? "interpolated" : "observed");
  }
  const netload = values.map((v) => (v as number) / 10);
  return {
    start: "2020-01-03T00:00:00+00:00",
    cadence_minutes: 15,
    n_steps: n,
    penetration: "p50",
    channels: {
      temperature: { values, quality },
      net_load_actual: { values: netload, quality: netload.map(() => "observed") },
    },
    data_quality: { temperature: 100 / 192, net_load_actual: 0 },
  };
}

export function forecastFixture(pointValue = 3.0): ForecastResponse {
  const n = 192;
  const point = Array.from({ length: n }, (_, i) => pointValue + 0.5 * Math.sin(i / 9));
  return {
    actual: Array.from({ length: n }, (_, i) => pointValue + 0.4 * Math.sin(i / 9)),
    forecast: {
      start: "2020-01-03T00:00:00+00:00",
      cadence_minutes: 15,
      horizon: "min15",
      point,
      lower95: point.map((v) => v - 0.35),
      upper95: point.map((v) => v + 0.36),
    },
    metrics: { mae: 0.082, mape: 2.73, n_used: n, n_excluded_mape: 0 },
    noise_seed: null,
    context_start: "2020-01-02T00:00:00+00:00",
  };
}
