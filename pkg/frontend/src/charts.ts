/** Pure chart renderers: (payload, view state) in, plot model out.
 *
 * Every number displayed comes straight from an API field; this module only
 * maps values to pixels. Models are plain data so tests can snapshot them
 * without a DOM.
 */

import type {
  ExperimentResultsPayload,
  ForecastResponse,
  Quality,
  SeriesChannel,
} from "./types.js";
import { MONTH_NAMES } from "./types.js";
import type { AxisFreeze } from "./state.js";

export interface Scale {
  domain: [number, number];
  range: [number, number];
}

export function scalePoint(scale: Scale, v: number): number {
  const [d0, d1] = scale.domain;
  const [r0, r1] = scale.range;
  if (d1 === d0) return (r0 + r1) / 2;
  return r0 + ((v - d0) / (d1 - d0)) * (r1 - r0);
}

function niceDomain(values: number[], pad = 0.08): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (Number.isFinite(v)) {
      lo = Math.min(lo, v);
      hi = Math.max(hi, v);
    }
  }
  if (!Number.isFinite(lo)) return [0, 1];
  if (lo === hi) return [lo - 1, hi + 1];
  const span = hi - lo;
  return [lo - pad * span, hi + pad * span];
}

function path(points: Array<[number, number]>): string {
  return points
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${x.toFixed(2)},${y.toFixed(2)}`)
    .join("");
}

export const PLOT = { width: 760, height: 300, left: 48, right: 12, top: 10, bottom: 24 };

function xScale(n: number): Scale {
  return { domain: [0, Math.max(n - 1, 1)], range: [PLOT.left, PLOT.width - PLOT.right] };
}

function yScale(domain: [number, number]): Scale {
  return { domain, range: [PLOT.height - PLOT.bottom, PLOT.top] };
}

export interface NetLoadModel {
  yDomain: [number, number];
  axisFrozen: boolean;
  actualPath: string;
  forecastPath: string;
  bandPath: string;
  metrics: { mae: number; mape: number | null };
  nSteps: number;
}

/** Blue actual line, orange forecast line, grey 95% band. */
export function netloadModel(payload: ForecastResponse, frozenAxis: AxisFreeze | null): NetLoadModel {
  const { actual, forecast } = payload;
  const n = actual.length;
  const x = xScale(n);
  const domain: [number, number] = frozenAxis
    ? [frozenAxis.ymin, frozenAxis.ymax]
    : niceDomain([...actual, ...forecast.lower95, ...forecast.upper95]);
  const y = yScale(domain);
  const px = (i: number) => scalePoint(x, i);
  const py = (v: number) => scalePoint(y, v);
  const upper = forecast.upper95.map((v, i) => [px(i), py(v)] as [number, number]);
  const lower = forecast.lower95.map((v, i) => [px(i), py(v)] as [number, number]).reverse();
  return {
    yDomain: domain,
    axisFrozen: frozenAxis !== null,
    actualPath: path(actual.map((v, i) => [px(i), py(v)])),
    forecastPath: path(forecast.point.map((v, i) => [px(i), py(v)])),
    bandPath: path([...upper, ...lower]) + "Z",
    metrics: { mae: payload.metrics.mae, mape: payload.metrics.mape },
    nSteps: n,
  };
}

export interface InputPoint {
  index: number;
  x: number;
  y: number;
  value: number;
  quality: Quality;
  edited: boolean;
}

export interface InputsModel {
  path: string;
  points: InputPoint[];
  yDomain: [number, number];
  qualityPct: number;
}

/** One input channel: line plus markers; interpolated points paint red. */
export function inputsModel(
  channel: SeriesChannel,
  qualityPct: number,
  editedIndices: Set<number>,
): InputsModel {
  const values = channel.values.map((v) => (v === null ? NaN : v));
  const finite = values.filter((v) => Number.isFinite(v));
  const domain = niceDomain(finite);
  const x = xScale(values.length);
  const y = yScale(domain);
  const pts: Array<[number, number]> = [];
  const points: InputPoint[] = [];
  values.forEach((v, i) => {
    if (!Number.isFinite(v)) return;
    const px = scalePoint(x, i);
    const py = scalePoint(y, v);
    pts.push([px, py]);
    points.push({
      index: i,
      x: px,
      y: py,
      value: v,
      quality: channel.quality[i] ?? "observed",
      edited: editedIndices.has(i),
    });
  });
  return { path: path(pts), points, yDomain: domain, qualityPct };
}

export interface DeviationLine {
  month: number;
  label: string;
  path: string;
  points: Array<{ level: number; value: number; x: number; y: number }>;
}

export interface DeviationLinesModel {
  metric: "mae" | "mape";
  yDomain: [number, number];
  zeroY: number;
  lines: DeviationLine[];
  levels: number[];
}

/** Per-month deviation-vs-level lines, drawn from the server's aggregates. */
export function deviationLinesModel(
  results: ExperimentResultsPayload,
  metric: "mae" | "mape",
): DeviationLinesModel {
  const levels = results.heatmap.levels;
  const months = results.heatmap.months;
  const key = metric === "mae" ? "mean_mae_dev" : "mean_mape_dev";
  const values: number[] = [0];
  for (const cell of results.aggregates) {
    const v = cell[key];
    if (v !== null) values.push(v);
  }
  const domain = niceDomain(values);
  const x: Scale = { domain: [0, Math.max(levels.length - 1, 1)], range: [PLOT.left, PLOT.width - PLOT.right] };
  const y = yScale(domain);
  const lines: DeviationLine[] = months.map((month) => {
    const points = levels.flatMap((level, li) => {
      const cell = results.aggregates.find(
        (c) => c.month === month && c.noise_level === level,
      );
      const v = cell ? cell[key] : null;
      if (v === null || v === undefined) return [];
      return [{ level, value: v, x: scalePoint(x, li), y: scalePoint(y, v) }];
    });
    return {
      month,
      label: MONTH_NAMES[month - 1] ?? String(month),
      path: path(points.map((p) => [p.x, p.y])),
      points,
    };
  });
  return { metric, yDomain: domain, zeroY: scalePoint(y, 0), lines, levels };
}

export interface HeatmapCell {
  month: number;
  level: number;
  value: number | null;
  row: number;
  col: number;
  color: string;
}

export interface HeatmapModel {
  months: number[];
  levels: number[];
  cells: HeatmapCell[];
  vmax: number;
}

function heatColor(value: number | null, vmax: number): string {
  if (value === null) return "#eee";
  if (vmax === 0) return "rgb(247,251,255)";  // all-zero run: one uniform colour
  const t = Math.max(0, Math.min(1, Math.abs(value) / vmax));
  const shade = Math.round(255 - t * 190);
  return `rgb(${shade},${Math.round(shade * 0.82)},${64 + Math.round(shade * 0.55)})`;
}

/** Month x level matrix of mean MAE deviation, from the server's heatmap. */
export function heatmapModel(results: ExperimentResultsPayload): HeatmapModel {
  const { months, levels, mae_dev } = results.heatmap;
  let vmax = 0;
  for (const row of mae_dev) {
    for (const v of row) if (v !== null) vmax = Math.max(vmax, Math.abs(v));
  }
  const cells: HeatmapCell[] = [];
  months.forEach((month, r) => {
    levels.forEach((level, c) => {
      const value = mae_dev[r]?.[c] ?? null;
      cells.push({ month, level, value, row: r, col: c, color: heatColor(value, vmax) });
    });
  });
  return { months, levels, cells, vmax };
}

export interface ScatterModel {
  month: number;
  metric: "mae" | "mape";
  yDomain: [number, number];
  points: Array<{ level: number; value: number; x: number; y: number }>;
  meanLinePath: string;
}

/** Raw per-observation points for one month plus its mean line. */
export function scatterModel(
  results: ExperimentResultsPayload,
  month: number,
  metric: "mae" | "mape",
): ScatterModel {
  const levels = results.heatmap.levels;
  const x: Scale = { domain: [0, Math.max(levels.length - 1, 1)], range: [PLOT.left, PLOT.width - PLOT.right] };
  const raw = results.records.filter((r) => r.month === month);
  const pick = (r: { mae_dev: number; mape_dev: number | null }) =>
    metric === "mae" ? r.mae_dev : r.mape_dev;
  const values: number[] = [0];
  for (const r of raw) {
    const v = pick(r);
    if (v !== null) values.push(v);
  }
  const domain = niceDomain(values);
  const y = yScale(domain);
  const points = raw.flatMap((r) => {
    const v = pick(r);
    if (v === null) return [];
    const li = levels.indexOf(r.noise_level);
    // deterministic jitter spreads observations within a level column
    const jitter = ((r.observation % 11) - 5) * 1.5;
    return [{ level: r.noise_level, value: v, x: scalePoint(x, li) + jitter, y: scalePoint(y, v) }];
  });
  const key = metric === "mae" ? "mean_mae_dev" : "mean_mape_dev";
  const meanPts = levels.flatMap((level, li) => {
    const cell = results.aggregates.find((c) => c.month === month && c.noise_level === level);
    const v = cell ? cell[key] : null;
    if (v === null || v === undefined) return [];
    return [[scalePoint(x, li), scalePoint(y, v)] as [number, number]];
  });
  return { month, metric, yDomain: domain, points, meanLinePath: path(meanPts) };
}
