/** JSON contracts of the backing service, mirrored field for field. */

export type Penetration = "p0" | "p20" | "p30" | "p50";
export type Horizon = "min15" | "hour24";
export type ChannelId =
  | "temperature"
  | "humidity"
  | "apparent_power"
  | "solar_irradiance"
  | "net_load_actual";
export type Quality = "observed" | "missing" | "interpolated" | "user_edited";

export const WEATHER_CHANNELS: ChannelId[] = [
  "temperature",
  "humidity",
  "apparent_power",
  "solar_irradiance",
];

export const CHANNEL_LABELS: Record<ChannelId, string> = {
  temperature: "Temperature (°F)",
  humidity: "Humidity (%RH)",
  apparent_power: "Apparent power (kVA)",
  solar_irradiance: "Solar irradiance (W/m²)",
  net_load_actual: "Net load (kW)",
};

export interface MetaResponse {
  schema_version: number;
  coverage: { start: string; end: string };
  penetrations: Penetration[];
  horizons: Horizon[];
  channels: ChannelId[];
  models: Record<string, boolean>;
  context_days: number;
}

export interface SeriesChannel {
  values: (number | null)[];
  quality: Quality[];
}

export interface SeriesResponse {
  start: string;
  cadence_minutes: number;
  n_steps: number;
  penetration: Penetration;
  channels: Partial<Record<ChannelId, SeriesChannel>>;
  data_quality: Partial<Record<ChannelId, number>>;
}

export interface Override {
  channel: ChannelId;
  timestamp: string;
  value: number;
}

export interface AdHocNoise {
  channel: ChannelId;
  level: 5 | 10;
}

export interface ForecastRequestBody {
  start: string;
  end: string;
  penetration: Penetration;
  horizon: Horizon;
  overrides: Override[];
  ad_hoc_noise: AdHocNoise | null;
}

export interface MetricsPayload {
  mae: number;
  mape: number | null;
  n_used: number;
  n_excluded_mape: number;
}

export interface ForecastResponse {
  actual: number[];
  forecast: {
    start: string;
    cadence_minutes: number;
    horizon: Horizon;
    point: number[];
    lower95: number[];
    upper95: number[];
  };
  metrics: MetricsPayload;
  noise_seed: number | null;
  context_start: string;
}

export interface ExperimentSpecBody {
  name: string;
  description: string;
  variable: ChannelId;
  penetration: Penetration;
  horizon: Horizon;
  months: number[];
  day_window: [number, number];
  noise_levels: number[];
  mode: "constant_bias" | "uniform_random";
  direction: "add" | "subtract" | "both";
  observations: number;
  seed: number;
}

export interface DeviationRecordPayload {
  month: number;
  noise_level: number;
  observation: number;
  mae_dev: number;
  mape_dev: number | null;
}

export interface AggregateCell {
  month: number;
  noise_level: number;
  mean_mae_dev: number;
  mean_mape_dev: number | null;
}

export interface ExperimentResultsPayload {
  schema_version: number;
  spec: ExperimentSpecBody & { schema_version: number };
  status: "queued" | "running" | "completed" | "failed";
  progress: number;
  baseline: Record<string, MetricsPayload>;
  records: DeviationRecordPayload[];
  aggregates: AggregateCell[];
  heatmap: { months: number[]; levels: number[]; mae_dev: (number | null)[][] };
  error: string | null;
}

export interface ExperimentSummary {
  id: string;
  created_at: string;
  name: string;
  status: "queued" | "running" | "completed" | "failed";
  progress: number;
  error: string | null;
}

export interface StoredExperimentPayload extends ExperimentSummary {
  spec: ExperimentSpecBody & { schema_version: number };
  results: ExperimentResultsPayload | null;
}

export interface SubmitResponse {
  id: string;
  eta_seconds: number;
  calibrated: boolean;
}

export const MONTH_NAMES = [
  "Jan", "Feb", "Mar", "Apr", "May", "Jun",
  "Jul", "Aug", "Sep", "Oct", "Nov", "Dec",
] as const;
