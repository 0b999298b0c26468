/** Thin typed client over the REST surface; fetch is injectable for tests. */

import type {
  ExperimentSpecBody,
  ExperimentSummary,
  ForecastRequestBody,
  ForecastResponse,
  MetaResponse,
  SeriesResponse,
  StoredExperimentPayload,
  SubmitResponse,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly fieldErrors: Record<string, string> | null = null,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) {
      let message = `${response.status}`;
      let fieldErrors: Record<string, string> | null = null;
      try {
        const body = await response.json();
        message = body.message ?? message;
        fieldErrors = body.field_errors ?? null;
      } catch {
        // non-JSON error body: keep the status text
      }
      throw new ApiError(message, response.status, fieldErrors);
    }
    if (response.status === 204) return undefined as T;
    return (await response.json()) as T;
  }

  getMeta(): Promise<MetaResponse> {
    return this.request("/api/meta");
  }

  getSeries(params: {
    start: string;
    end: string;
    penetration: string;
    channels?: string[];
  }): Promise<SeriesResponse> {
    const query = new URLSearchParams({
      start: params.start,
      end: params.end,
      penetration: params.penetration,
    });
    if (params.channels?.length) query.set("channels", params.channels.join(","));
    return this.request(`/api/series?${query.toString()}`);
  }

  postForecast(body: ForecastRequestBody): Promise<ForecastResponse> {
    return this.request("/api/forecast", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  listExperiments(): Promise<ExperimentSummary[]> {
    return this.request("/api/experiments");
  }

  getExperiment(id: string): Promise<StoredExperimentPayload> {
    return this.request(`/api/experiments/${id}`);
  }

  submitExperiment(spec: ExperimentSpecBody): Promise<SubmitResponse> {
    return this.request("/api/experiments", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(spec),
    });
  }

  deleteExperiment(id: string): Promise<void> {
    return this.request(`/api/experiments/${id}`, { method: "DELETE" });
  }
}
