/** Forecast-explorer page logic: series + forecast state, edits, update.
 *
 * Pending edits survive a failed update (no silent loss of analyst input),
 * and the chart keeps showing the last good payload next to an error banner.
 */

import { ApiClient } from "./api.js";
import {
  InputsModel,
  NetLoadModel,
  inputsModel,
  netloadModel,
} from "./charts.js";
import {
  ViewState,
  clearPending,
  stageNoise,
  stageOverride,
} from "./state.js";
import type {
  AdHocNoise,
  ChannelId,
  ForecastResponse,
  Override,
  SeriesResponse,
} from "./types.js";

export function timestampOfIndex(seriesStart: string, cadenceMinutes: number, index: number): string {
  const t = new Date(new Date(seriesStart).getTime() + index * cadenceMinutes * 60_000);
  return t.toISOString().replace(".000Z", "Z");
}

export class ExplorerController {
  state: ViewState;
  series: SeriesResponse | null = null;
  forecast: ForecastResponse | null = null;
  previousForecast: ForecastResponse | null = null;
  error: string | null = null;

  constructor(private readonly api: ApiClient, initial: ViewState) {
    this.state = initial;
  }

  async refreshSeries(): Promise<void> {
    this.series = await this.api.getSeries({
      start: this.state.start,
      end: this.state.end,
      penetration: this.state.penetration,
      channels: [...this.state.channels, "net_load_actual"],
    });
  }

  /** A drag lands here: stage one override for the sample's timestamp. */
  dragPoint(channel: ChannelId, index: number, value: number): Override {
    if (!this.series) throw new Error("no series loaded");
    const quality = this.series.channels[channel]?.quality[index];
    const editable =
      quality === "interpolated" || quality === "user_edited" || this.state.allowObservedEdits;
    if (!editable) throw new Error(`${channel}[${index}] is ${quality}; enable observed edits first`);
    const override: Override = {
      channel,
      timestamp: timestampOfIndex(this.series.start, this.series.cadence_minutes, index),
      value,
    };
    this.state = stageOverride(this.state, override);
    return override;
  }

  setNoise(noise: AdHocNoise | null): void {
    this.state = stageNoise(this.state, noise);
  }

  /** The Update button: post edits, refresh the net-load view on success. */
  async update(): Promise<boolean> {
    try {
      const response = await this.api.postForecast({
        start: this.state.start,
        end: this.state.end,
        penetration: this.state.penetration,
        horizon: this.state.horizon,
        overrides: this.state.pendingOverrides,
        ad_hoc_noise: this.state.pendingNoise,
      });
      this.previousForecast = this.forecast;
      this.forecast = response;
      this.state = clearPending(this.state);
      this.error = null;
      return true;
    } catch (err) {
      this.error = err instanceof Error ? err.message : String(err);
      return false;  // pending edits and the stale chart both survive
    }
  }

  netloadModel(): NetLoadModel | null {
    if (!this.forecast) return null;
    return netloadModel(this.forecast, this.state.frozenAxis);
  }

  /** Replay support: the previous accepted forecast, if one exists. */
  get canReplay(): boolean {
    return this.previousForecast !== null;
  }

  previousNetloadModel(): NetLoadModel | null {
    if (!this.previousForecast) return null;
    return netloadModel(this.previousForecast, this.state.frozenAxis);
  }

  inputsModels(): Partial<Record<ChannelId, InputsModel>> {
    if (!this.series) return {};
    const out: Partial<Record<ChannelId, InputsModel>> = {};
    for (const channel of this.state.channels) {
      const data = this.series.channels[channel];
      if (!data) continue;
      const edited = new Set(
        this.state.pendingOverrides
          .filter((o) => o.channel === channel)
          .map((o) => this.indexOfTimestamp(o.timestamp)),
      );
      out[channel] = inputsModel(data, this.series.data_quality[channel] ?? 0, edited);
    }
    return out;
  }

  indexOfTimestamp(timestamp: string): number {
    if (!this.series) return -1;
    const delta = new Date(timestamp).getTime() - new Date(this.series.start).getTime();
    return Math.round(delta / (this.series.cadence_minutes * 60_000));
  }
}
