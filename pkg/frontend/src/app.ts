/** DOM bootstrap: wires controllers to the two pages.
 *
 * Drag editing works on the marker circles of each input chart; the replay
 * button crossfades the previous accepted forecast into the current one over
 * roughly ten seconds. Experiment progress is polled every two seconds.
 */

import { ApiClient } from "./api.js";
import { ExplorerController } from "./explorer.js";
import { ExperimentsController } from "./experiments.js";
import { PLOT, deviationLinesModel, heatmapModel, scatterModel } from "./charts.js";
import { initialState, freezeAxis, releaseAxis, withPenetration, withHorizon, addChannel } from "./state.js";
import {
  renderDeviationLines,
  renderHeatmap,
  renderInputs,
  renderNetload,
  renderScatter,
} from "./svg.js";
import type { ChannelId, ExperimentSpecBody, Horizon, Penetration } from "./types.js";
import { CHANNEL_LABELS, MONTH_NAMES, WEATHER_CHANNELS } from "./types.js";

const api = new ApiClient("");

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function fmt(v: number | null, digits = 3): string {
  return v === null ? "n/a" : v.toFixed(digits);
}

async function bootExplorer(): Promise<ExplorerController> {
  const meta = await api.getMeta();
  const start = meta.coverage.start.slice(0, 10) + "T00:00:00Z";
  const startDate = new Date(start);
  const end = new Date(startDate.getTime() + 4 * 86_400_000).toISOString().replace(".000Z", "Z");
  const explorer = new ExplorerController(api, {
    ...initialState(new Date(startDate.getTime() + 2 * 86_400_000).toISOString().replace(".000Z", "Z"), end),
  });

  const startInput = el<HTMLInputElement>("opt-start");
  const endInput = el<HTMLInputElement>("opt-end");
  startInput.value = explorer.state.start.slice(0, 16);
  endInput.value = explorer.state.end.slice(0, 16);
  const penSelect = el<HTMLSelectElement>("opt-penetration");
  meta.penetrations.forEach((p) => penSelect.add(new Option(p, p)));
  penSelect.value = explorer.state.penetration;
  const horSelect = el<HTMLSelectElement>("opt-horizon");
  meta.horizons.forEach((h) => horSelect.add(new Option(h, h)));
  const chanSelect = el<HTMLSelectElement>("opt-add-channel");
  WEATHER_CHANNELS.forEach((c) => chanSelect.add(new Option(CHANNEL_LABELS[c], c)));

  async function redraw(postForecast: boolean): Promise<void> {
    explorer.state = {
      ...explorer.state,
      start: new Date(startInput.value + (startInput.value.endsWith("Z") ? "" : ":00Z")).toISOString().replace(".000Z", "Z"),
      end: new Date(endInput.value + (endInput.value.endsWith("Z") ? "" : ":00Z")).toISOString().replace(".000Z", "Z"),
    };
    explorer.state = withPenetration(explorer.state, penSelect.value as Penetration);
    explorer.state = withHorizon(explorer.state, horSelect.value as Horizon);
    try {
      await explorer.refreshSeries();
      if (postForecast) await explorer.update();
      explorer.error = null;
    } catch (err) {
      explorer.error = err instanceof Error ? err.message : String(err);
    }
    paint();
  }

  function paint(): void {
    const banner = el("explorer-error");
    banner.textContent = explorer.error ?? "";
    banner.style.display = explorer.error ? "block" : "none";

    const netModel = explorer.netloadModel();
    if (netModel) {
      el("netload-chart").innerHTML = renderNetload(netModel);
      el("netload-metrics").title =
        `MAE ${fmt(netModel.metrics.mae)} kW · MAPE ${fmt(netModel.metrics.mape, 2)}%` +
        ` · click to pin`;
      el("netload-metrics-detail").textContent =
        `MAE ${fmt(netModel.metrics.mae)} kW · MAPE ${fmt(netModel.metrics.mape, 2)} %`;
    }
    (el<HTMLButtonElement>("btn-replay")).disabled = !explorer.canReplay;

    const container = el("inputs-charts");
    container.innerHTML = "";
    const models = explorer.inputsModels();
    for (const channel of explorer.state.channels) {
      const model = models[channel as ChannelId];
      if (!model) continue;
      const card = document.createElement("div");
      card.className = "input-card";
      card.innerHTML =
        `<header><span class="icon" title="data quality: ${model.qualityPct.toFixed(1)}% missing">ⓘ</span>` +
        `<strong>${CHANNEL_LABELS[channel as ChannelId]}</strong>` +
        `<label><input type="checkbox" class="noise-toggle" data-channel="${channel}" data-level="5"> +5%</label>` +
        `<label><input type="checkbox" class="noise-toggle" data-channel="${channel}" data-level="10"> +10%</label>` +
        `</header><div class="chart" data-channel="${channel}">${renderInputs(model)}</div>`;
      container.appendChild(card);
    }
    bindDrag(container);
    bindNoiseToggles(container);
    el("pending-count").textContent = String(explorer.state.pendingOverrides.length);
  }

  function bindNoiseToggles(container: HTMLElement): void {
    container.querySelectorAll<HTMLInputElement>(".noise-toggle").forEach((box) => {
      const channel = box.dataset.channel as ChannelId;
      const level = Number(box.dataset.level) as 5 | 10;
      box.checked =
        explorer.state.pendingNoise?.channel === channel &&
        explorer.state.pendingNoise?.level === level;
      box.addEventListener("change", () => {
        explorer.setNoise(box.checked ? { channel, level } : null);
        paint();
      });
    });
  }

  function bindDrag(container: HTMLElement): void {
    container.querySelectorAll<SVGSVGElement>("svg").forEach((svg) => {
      const chartDiv = svg.closest<HTMLElement>(".chart");
      if (!chartDiv) return;
      const channel = chartDiv.dataset.channel as ChannelId;
      svg.querySelectorAll<SVGCircleElement>("circle.pt").forEach((circle) => {
        circle.style.cursor = "ns-resize";
        circle.addEventListener("pointerdown", (down) => {
          down.preventDefault();
          const index = Number(circle.dataset.index);
          const model = explorer.inputsModels()[channel];
          if (!model) return;
          const [lo, hi] = model.yDomain;
          const box = svg.getBoundingClientRect();
          const onMove = (move: PointerEvent) => {
            const frac = (move.clientY - box.top) / box.height;
            const yPx = frac * PLOT.height;
            const value = hi - ((yPx - PLOT.top) / (PLOT.height - PLOT.top - PLOT.bottom)) * (hi - lo);
            circle.setAttribute("cy", String(Math.max(PLOT.top, Math.min(PLOT.height - PLOT.bottom, yPx))));
            circle.dataset.value = String(value);
          };
          const onUp = () => {
            window.removeEventListener("pointermove", onMove);
            window.removeEventListener("pointerup", onUp);
            const value = Number(circle.dataset.value ?? "NaN");
            if (Number.isFinite(value)) {
              try {
                explorer.dragPoint(channel, index, Math.round(value * 100) / 100);
              } catch (err) {
                explorer.error = err instanceof Error ? err.message : String(err);
              }
              paint();
            }
          };
          window.addEventListener("pointermove", onMove);
          window.addEventListener("pointerup", onUp);
        });
      });
    });
  }

  el<HTMLButtonElement>("btn-update").addEventListener("click", async () => {
    await explorer.update();
    paint();
  });
  el<HTMLButtonElement>("btn-refresh").addEventListener("click", () => redraw(true));
  el<HTMLInputElement>("opt-freeze").addEventListener("change", (ev) => {
    const checked = (ev.target as HTMLInputElement).checked;
    const model = explorer.netloadModel();
    explorer.state = checked && model
      ? freezeAxis(explorer.state, model.yDomain[0], model.yDomain[1])
      : releaseAxis(explorer.state);
    paint();
  });
  el<HTMLButtonElement>("btn-add-channel").addEventListener("click", async () => {
    explorer.state = addChannel(explorer.state, chanSelect.value as ChannelId);
    await redraw(false);
  });
  el<HTMLButtonElement>("btn-replay").addEventListener("click", () => {
    const previous = explorer.previousNetloadModel();
    const current = explorer.netloadModel();
    if (!previous || !current) return;
    const target = el("netload-chart");
    target.innerHTML =
      `<div class="replay-stack"><div class="layer old">${renderNetload(previous)}</div>` +
      `<div class="layer new">${renderNetload(current)}</div></div>`;
    const oldLayer = target.querySelector<HTMLElement>(".layer.old")!;
    const newLayer = target.querySelector<HTMLElement>(".layer.new")!;
    const t0 = performance.now();
    const DURATION_MS = 10_000;
    const step = (now: number) => {
      const t = Math.min(1, (now - t0) / DURATION_MS);
      oldLayer.style.opacity = String(1 - t);
      newLayer.style.opacity = String(t);
      if (t < 1) requestAnimationFrame(step);
      else paint();
    };
    requestAnimationFrame(step);
  });

  await redraw(true);
  return explorer;
}

async function bootExperiments(): Promise<void> {
  const controller = new ExperimentsController(api);
  const monthBoxes = el("design-months");
  MONTH_NAMES.forEach((name, i) => {
    const label = document.createElement("label");
    label.innerHTML = `<input type="checkbox" value="${i + 1}"> ${name}`;
    monthBoxes.appendChild(label);
  });

  function readSpec(): ExperimentSpecBody {
    const months = [...monthBoxes.querySelectorAll<HTMLInputElement>("input:checked")]
      .map((box) => Number(box.value));
    return {
      name: el<HTMLInputElement>("design-name").value,
      description: el<HTMLInputElement>("design-description").value,
      variable: el<HTMLSelectElement>("design-variable").value as ChannelId,
      penetration: el<HTMLSelectElement>("design-penetration").value as Penetration,
      horizon: el<HTMLSelectElement>("design-horizon").value as Horizon,
      months,
      day_window: [
        Number(el<HTMLInputElement>("design-day-start").value),
        Number(el<HTMLInputElement>("design-day-end").value),
      ],
      noise_levels: el<HTMLInputElement>("design-levels").value
        .split(",").map((s) => Number(s.trim())).filter((v) => !Number.isNaN(v)),
      mode: el<HTMLSelectElement>("design-mode").value as "constant_bias" | "uniform_random",
      direction: el<HTMLSelectElement>("design-direction").value as "add" | "subtract" | "both",
      observations: Number(el<HTMLInputElement>("design-observations").value),
      seed: Number(el<HTMLInputElement>("design-seed").value),
    };
  }

  function paintList(): void {
    const nav = el("experiment-list");
    nav.innerHTML = "";
    for (const entry of controller.experiments) {
      const item = document.createElement("li");
      const pct = entry.status === "running" ? ` ${(entry.progress * 100).toFixed(0)}%` : "";
      item.innerHTML =
        `<button class="nav-item" data-id="${entry.id}">` +
        `<span class="status ${entry.status}">${entry.status}${pct}</span> ${entry.name}</button>`;
      nav.appendChild(item);
    }
    nav.querySelectorAll<HTMLButtonElement>(".nav-item").forEach((button) => {
      button.addEventListener("click", async () => {
        await controller.select(button.dataset.id!);
        paintResults();
      });
    });
  }

  function paintResults(): void {
    const target = el("experiment-results");
    const selected = controller.selected;
    if (!selected) {
      target.innerHTML = "<p>Select an experiment from the list.</p>";
      return;
    }
    if (!selected.results || selected.status === "queued" || selected.status === "running") {
      target.innerHTML =
        `<p>${selected.name}: ${selected.status}` +
        ` <progress value="${selected.progress}" max="1"></progress></p>`;
      return;
    }
    if (selected.status === "failed") {
      target.innerHTML = `<p class="error">failed: ${selected.error ?? "unknown"}</p>`;
      return;
    }
    const results = selected.results;
    const sections: string[] = [];
    sections.push(`<h3>MAE deviation from baseline (kW)</h3>` +
      renderDeviationLines(deviationLinesModel(results, "mae")));
    sections.push(`<h3>MAPE deviation from baseline (%)</h3>` +
      renderDeviationLines(deviationLinesModel(results, "mape")));
    sections.push(`<h3>Mean MAE deviation heatmap</h3>` + renderHeatmap(heatmapModel(results)));
    for (const month of results.heatmap.months) {
      sections.push(
        `<h4>${MONTH_NAMES[month - 1]} observations</h4>` +
        `<div class="scatter-pair">` +
        renderScatter(scatterModel(results, month, "mae")) +
        renderScatter(scatterModel(results, month, "mape")) +
        `</div>`);
    }
    target.innerHTML = sections.join("");
  }

  el<HTMLButtonElement>("design-submit").addEventListener("click", async () => {
    const submitted = await controller.submit(readSpec());
    const errBox = el("design-errors");
    if (!submitted) {
      errBox.innerHTML = Object.entries(controller.fieldErrors)
        .map(([field, message]) => `<div>${field}: ${message}</div>`)
        .join("") + (controller.error ? `<div>${controller.error}</div>` : "");
      return;
    }
    errBox.innerHTML = "";
    el("design-eta").textContent =
      `estimated time: ${submitted.eta_seconds.toFixed(1)} s` +
      (submitted.calibrated ? "" : " (uncalibrated)");
    paintList();
  });

  setInterval(async () => {
    const changed = await controller.tick().catch(() => false);
    if (changed) {
      paintList();
      paintResults();
    }
  }, 2000);

  await controller.refreshList();
  paintList();
  paintResults();
}

document.addEventListener("DOMContentLoaded", () => {
  document.querySelectorAll<HTMLButtonElement>(".tab").forEach((tab) => {
    tab.addEventListener("click", () => {
      document.querySelectorAll(".tab").forEach((t) => t.classList.remove("active"));
      document.querySelectorAll(".page").forEach((p) => p.classList.remove("active"));
      tab.classList.add("active");
      el(tab.dataset.page!).classList.add("active");
    });
  });
  bootExplorer().catch((err) => {
    el("explorer-error").textContent = String(err);
    el("explorer-error").style.display = "block";
  });
  bootExperiments().catch((err) => console.error(err));
});
