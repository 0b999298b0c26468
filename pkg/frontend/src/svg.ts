/** Render chart models to SVG strings; still pure, still snapshot-friendly. */

import {
  DeviationLinesModel,
  HeatmapModel,
  InputsModel,
  NetLoadModel,
  PLOT,
  ScatterModel,
} from "./charts.js";
import { MONTH_NAMES } from "./types.js";

const LINE_COLORS = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
  "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
];

function svgOpen(height = PLOT.height): string {
  return `<svg viewBox="0 0 ${PLOT.width} ${height}" width="100%" role="img">`;
}

function axisLabels(yDomain: [number, number], height = PLOT.height): string {
  const [lo, hi] = yDomain;
  return (
    `<text x="4" y="${PLOT.top + 10}" class="axis">${hi.toFixed(2)}</text>` +
    `<text x="4" y="${height - PLOT.bottom}" class="axis">${lo.toFixed(2)}</text>`
  );
}

export function renderNetload(model: NetLoadModel): string {
  return (
    svgOpen() +
    axisLabels(model.yDomain) +
    `<path d="${model.bandPath}" class="band" fill="#bbb" opacity="0.35" stroke="none"/>` +
    `<path d="${model.actualPath}" class="actual" fill="none" stroke="#1f77b4" stroke-width="1.6"/>` +
    `<path d="${model.forecastPath}" class="forecast" fill="none" stroke="#ff7f0e" stroke-width="1.6"/>` +
    `</svg>`
  );
}

export function renderInputs(model: InputsModel): string {
  const markers = model.points
    .filter((p) => p.quality !== "observed" || p.edited)
    .map((p) => {
      const cls = p.edited ? "edited" : p.quality;
      const color = p.edited ? "#9467bd" : p.quality === "interpolated" ? "#d62728" : "#2ca02c";
      return `<circle cx="${p.x.toFixed(2)}" cy="${p.y.toFixed(2)}" r="4" class="pt ${cls}" data-index="${p.index}" fill="${color}"/>`;
    })
    .join("");
  return (
    svgOpen() +
    axisLabels(model.yDomain) +
    `<path d="${model.path}" fill="none" stroke="#444" stroke-width="1.2"/>` +
    markers +
    `</svg>`
  );
}

export function renderDeviationLines(model: DeviationLinesModel): string {
  const zero = `<line x1="${PLOT.left}" x2="${PLOT.width - PLOT.right}" y1="${model.zeroY.toFixed(2)}" y2="${model.zeroY.toFixed(2)}" stroke="#999" stroke-dasharray="4 3"/>`;
  const lines = model.lines
    .map((line, i) => {
      const color = LINE_COLORS[line.month - 1] ?? "#000";
      return (
        `<path d="${line.path}" fill="none" stroke="${color}" stroke-width="1.6" class="dev-line" data-month="${line.month}"/>` +
        `<text x="${PLOT.width - PLOT.right + 2}" y="${(line.points.at(-1)?.y ?? model.zeroY) + i * 0}" class="axis" fill="${color}">${line.label}</text>`
      );
    })
    .join("");
  const ticks = model.levels
    .map((level, i) => {
      const x = PLOT.left + (i * (PLOT.width - PLOT.left - PLOT.right)) / Math.max(model.levels.length - 1, 1);
      return `<text x="${x.toFixed(2)}" y="${PLOT.height - 6}" class="axis">${level}%</text>`;
    })
    .join("");
  return svgOpen() + axisLabels(model.yDomain) + zero + lines + ticks + `</svg>`;
}

export function renderHeatmap(model: HeatmapModel): string {
  const cellW = (PLOT.width - PLOT.left - PLOT.right) / Math.max(model.levels.length, 1);
  const cellH = 26;
  const height = model.months.length * cellH + PLOT.top + PLOT.bottom;
  const cells = model.cells
    .map((cell) => {
      const x = PLOT.left + cell.col * cellW;
      const y = PLOT.top + cell.row * cellH;
      const title = cell.value === null ? "" : `<title>${cell.value}</title>`;
      return `<rect x="${x.toFixed(2)}" y="${y}" width="${cellW.toFixed(2)}" height="${cellH}" fill="${cell.color}" class="cell" data-month="${cell.month}" data-level="${cell.level}">${title}</rect>`;
    })
    .join("");
  const rows = model.months
    .map((m, r) => `<text x="4" y="${PLOT.top + r * cellH + 17}" class="axis">${MONTH_NAMES[m - 1]}</text>`)
    .join("");
  const cols = model.levels
    .map((level, c) => `<text x="${(PLOT.left + c * cellW + cellW / 2).toFixed(2)}" y="${height - 8}" class="axis">${level}%</text>`)
    .join("");
  return svgOpen(height) + cells + rows + cols + `</svg>`;
}

export function renderScatter(model: ScatterModel): string {
  const points = model.points
    .map((p) => `<circle cx="${p.x.toFixed(2)}" cy="${p.y.toFixed(2)}" r="2.2" fill="#1f77b4" opacity="0.45"/>`)
    .join("");
  return (
    svgOpen() +
    axisLabels(model.yDomain) +
    points +
    `<path d="${model.meanLinePath}" fill="none" stroke="#d62728" stroke-width="2" class="mean-line"/>` +
    `</svg>`
  );
}
