/** Experiments page logic: designer validation, submission, polling, results. */

import { ApiClient, ApiError } from "./api.js";
import type {
  ExperimentSpecBody,
  ExperimentSummary,
  StoredExperimentPayload,
  SubmitResponse,
} from "./types.js";

const DAYS_IN_MONTH = [31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31];

/** Client-side field checks so obvious mistakes never reach the wire. */
export function validateSpec(spec: ExperimentSpecBody): Record<string, string> {
  const errors: Record<string, string> = {};
  if (!spec.name.trim()) errors.name = "name is required";
  if (spec.months.length === 0) errors.months = "pick at least one month";
  const [lo, hi] = spec.day_window;
  if (!(lo >= 1 && lo <= hi && hi <= 31)) {
    errors.day_window = "day window must satisfy 1 ≤ start ≤ end ≤ 31";
  } else {
    for (const month of spec.months) {
      const days = DAYS_IN_MONTH[month - 1] ?? 31;
      if (hi > days) {
        errors.day_window = `day ${hi} does not exist in every selected month`;
        break;
      }
    }
  }
  if (spec.noise_levels.some((l) => !(l > 0 && l <= 30))) {
    errors.noise_levels = "levels must lie in (0, 30]";
  }
  if (spec.observations < 1) errors.observations = "observations must be ≥ 1";
  if (spec.mode === "constant_bias" && spec.direction === "both") {
    errors.direction = "a constant bias cannot point both ways";
  }
  return errors;
}

export class ExperimentsController {
  experiments: ExperimentSummary[] = [];
  selected: StoredExperimentPayload | null = null;
  fieldErrors: Record<string, string> = {};
  lastSubmit: SubmitResponse | null = null;
  error: string | null = null;

  constructor(private readonly api: ApiClient) {}

  async refreshList(): Promise<void> {
    this.experiments = await this.api.listExperiments();
  }

  /** Returns the submit response, or null when validation fails. */
  async submit(spec: ExperimentSpecBody): Promise<SubmitResponse | null> {
    this.fieldErrors = validateSpec(spec);
    if (Object.keys(this.fieldErrors).length > 0) return null;
    try {
      this.lastSubmit = await this.api.submitExperiment(spec);
      this.error = null;
    } catch (err) {
      if (err instanceof ApiError && err.fieldErrors) {
        this.fieldErrors = err.fieldErrors;
        return null;
      }
      this.error = err instanceof Error ? err.message : String(err);
      return null;
    }
    await this.refreshList();
    return this.lastSubmit;
  }

  async select(id: string): Promise<void> {
    this.selected = await this.api.getExperiment(id);
  }

  /** One 2-second poll tick: refresh selection while it is queued/running. */
  async tick(): Promise<boolean> {
    if (!this.selected) return false;
    if (this.selected.status === "completed" || this.selected.status === "failed") {
      return false;
    }
    await this.select(this.selected.id);
    await this.refreshList();
    return true;
  }

  async remove(id: string): Promise<void> {
    await this.api.deleteExperiment(id);
    if (this.selected?.id === id) this.selected = null;
    await this.refreshList();
  }
}
