/** View state and its pure transitions.
 *
 * Two invariants live here: a frozen Y axis is never altered by data updates
 * until explicitly released, and pending edits are only cleared by an update
 * that actually succeeded.
 */

import type { AdHocNoise, ChannelId, Horizon, Override, Penetration } from "./types.js";

export interface AxisFreeze {
  ymin: number;
  ymax: number;
}

export interface ViewState {
  start: string;
  end: string;
  penetration: Penetration;
  horizon: Horizon;
  channels: ChannelId[];
  frozenAxis: AxisFreeze | null;
  pendingOverrides: Override[];
  pendingNoise: AdHocNoise | null;
  allowObservedEdits: boolean;
}

/** Initial load keeps the channel list minimal to reduce clutter. */
export function initialState(start: string, end: string): ViewState {
  return {
    start,
    end,
    penetration: "p50",
    horizon: "min15",
    channels: ["temperature"],
    frozenAxis: null,
    pendingOverrides: [],
    pendingNoise: null,
    allowObservedEdits: false,
  };
}

export function withRange(state: ViewState, start: string, end: string): ViewState {
  return { ...state, start, end };
}

export function withPenetration(state: ViewState, penetration: Penetration): ViewState {
  return { ...state, penetration };
}

export function withHorizon(state: ViewState, horizon: Horizon): ViewState {
  return { ...state, horizon };
}

export function addChannel(state: ViewState, channel: ChannelId): ViewState {
  if (state.channels.includes(channel)) return state;
  return { ...state, channels: [...state.channels, channel] };
}

export function removeChannel(state: ViewState, channel: ChannelId): ViewState {
  return { ...state, channels: state.channels.filter((c) => c !== channel) };
}

export function freezeAxis(state: ViewState, ymin: number, ymax: number): ViewState {
  return { ...state, frozenAxis: { ymin, ymax } };
}

export function releaseAxis(state: ViewState): ViewState {
  return { ...state, frozenAxis: null };
}

/** Stage a drag edit; a second drag of the same sample replaces the first. */
export function stageOverride(state: ViewState, override: Override): ViewState {
  const rest = state.pendingOverrides.filter(
    (o) => !(o.channel === override.channel && o.timestamp === override.timestamp),
  );
  return { ...state, pendingOverrides: [...rest, override] };
}

export function stageNoise(state: ViewState, noise: AdHocNoise | null): ViewState {
  return { ...state, pendingNoise: noise };
}

/** Only a successful update may call this. */
export function clearPending(state: ViewState): ViewState {
  return { ...state, pendingOverrides: [], pendingNoise: null };
}

export function toggleObservedEdits(state: ViewState): ViewState {
  return { ...state, allowObservedEdits: !state.allowObservedEdits };
}
