"""Canonical 15-minute time-series representation.

A frame holds aligned channels (weather plus the active net-load series for
one solar-penetration level) with a per-sample quality tag. Frames are
immutable values: every mutating operation returns a new frame, so callers
can keep the pre-edit frame around for undo.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import datetime, timedelta, timezone
from enum import Enum, IntEnum

import numpy as np

from .errors import ChannelNotFound, EmptyChannel, OutOfRange, UninterpolatableChannel

CADENCE = timedelta(minutes=15)
STEPS_PER_DAY = 96


class SampleQuality(IntEnum):
    OBSERVED = 0
    MISSING = 1
    INTERPOLATED = 2
    USER_EDITED = 3


class ChannelName(str, Enum):
    TEMPERATURE = "temperature"          # °F
    HUMIDITY = "humidity"                # %RH
    APPARENT_POWER = "apparent_power"    # kVA
    SOLAR_IRRADIANCE = "solar_irradiance"  # W/m²
    NET_LOAD_ACTUAL = "net_load_actual"  # kW


WEATHER_CHANNELS = (
    ChannelName.TEMPERATURE,
    ChannelName.HUMIDITY,
    ChannelName.APPARENT_POWER,
    ChannelName.SOLAR_IRRADIANCE,
)


class Penetration(str, Enum):
    P0 = "p0"
    P20 = "p20"
    P30 = "p30"
    P50 = "p50"

    @property
    def fraction(self) -> float:
        return {"p0": 0.0, "p20": 0.2, "p30": 0.3, "p50": 0.5}[self.value]


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.asarray(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Channel:
    """One named series plus a quality tag per sample.

    Missing samples hold NaN; every other tag carries a real value.
    """

    name: ChannelName
    values: np.ndarray
    quality: np.ndarray

    def __post_init__(self):
        values = _frozen(np.asarray(self.values, dtype=np.float64))
        quality = _frozen(np.asarray(self.quality, dtype=np.uint8))
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "quality", quality)
        if len(values) != len(quality):
            raise ValueError(f"{self.name.value}: values/quality length mismatch")
        missing = quality == SampleQuality.MISSING
        if not np.all(np.isnan(values[missing])):
            raise ValueError(f"{self.name.value}: missing samples must not carry values")
        if np.isnan(values[~missing]).any():
            raise ValueError(f"{self.name.value}: non-missing samples must carry values")

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class GapInterval:
    """Maximal run of missing samples, inclusive on both ends."""

    start_index: int
    end_index: int
    channel: ChannelName

    def __post_init__(self):
        if self.start_index > self.end_index:
            raise ValueError("gap start after end")

    def __len__(self) -> int:
        return self.end_index - self.start_index + 1


@dataclass(frozen=True)
class TimeSeriesFrame:
    """Aligned multichannel slice on a strict 15-minute UTC grid."""

    start: datetime
    penetration: Penetration
    channels: dict[ChannelName, Channel] = field(default_factory=dict)

    def __post_init__(self):
        if self.start.tzinfo is None:
            object.__setattr__(self, "start", self.start.replace(tzinfo=timezone.utc))
        lengths = {len(ch) for ch in self.channels.values()}
        if len(lengths) > 1:
            raise ValueError("channels differ in length")
        for key, ch in self.channels.items():
            if ChannelName(key) is not ch.name:
                raise ValueError(f"channel {ch.name.value!r} stored under key {key!r}")

    @property
    def n_steps(self) -> int:
        return len(next(iter(self.channels.values()))) if self.channels else 0

    @property
    def end(self) -> datetime:
        """Exclusive end of the covered span."""
        return self.start + CADENCE * self.n_steps

    def timestamp(self, index: int) -> datetime:
        return self.start + CADENCE * index

    def index_of(self, ts: datetime) -> int:
        """Grid index of a timestamp; OutOfRange if off-grid or outside."""
        if ts.tzinfo is None:
            ts = ts.replace(tzinfo=timezone.utc)
        delta = ts - self.start
        steps, rem = divmod(delta, CADENCE)
        if rem or not (0 <= steps < self.n_steps):
            raise OutOfRange(f"timestamp {ts.isoformat()} outside frame grid")
        return int(steps)

    def channel(self, name: ChannelName | str) -> Channel:
        key = ChannelName(name)
        if key not in self.channels:
            raise ChannelNotFound(f"no channel {key.value!r} in frame")
        return self.channels[key]

    def with_channel(self, ch: Channel) -> "TimeSeriesFrame":
        channels = dict(self.channels)
        channels[ch.name] = ch
        return replace(self, channels=channels)

    def with_values(self, name: ChannelName | str, values: np.ndarray,
                    quality: np.ndarray) -> "TimeSeriesFrame":
        return self.with_channel(Channel(ChannelName(name), values, quality))


def detect_gaps(frame: TimeSeriesFrame, channel: ChannelName | str) -> list[GapInterval]:
    """Maximal runs of missing samples, ordered by start index."""
    ch = frame.channel(channel)
    missing = ch.quality == SampleQuality.MISSING
    if not missing.any():
        return []
    padded = np.concatenate([[False], missing, [False]]).astype(np.int8)
    edges = np.diff(padded)
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1) - 1
    return [GapInterval(int(s), int(e), ch.name) for s, e in zip(starts, ends)]


def interpolate_linear(frame: TimeSeriesFrame, channel: ChannelName | str) -> TimeSeriesFrame:
    """Fill missing samples on the line between nearest observed neighbours.

    One-sided gaps at the edges take the nearest observed value (constant
    extension). Filled samples are tagged INTERPOLATED; everything else is
    untouched, so applying this twice equals applying it once.
    """
    ch = frame.channel(channel)
    missing = ch.quality == SampleQuality.MISSING
    if not missing.any():
        return frame
    observed = np.flatnonzero(ch.quality == SampleQuality.OBSERVED)
    if len(observed) == 0:
        raise UninterpolatableChannel(f"{ch.name.value}: no observed samples to interpolate from")
    values = ch.values.copy()
    idx = np.flatnonzero(missing)
    values[idx] = np.interp(idx, observed, ch.values[observed])
    quality = ch.quality.copy()
    quality[idx] = SampleQuality.INTERPOLATED
    return frame.with_values(ch.name, values, quality)


def apply_override(frame: TimeSeriesFrame, channel: ChannelName | str,
                   index: int, value: float) -> TimeSeriesFrame:
    """Replace one sample with an analyst-supplied value, tagged USER_EDITED."""
    ch = frame.channel(channel)
    if not 0 <= index < len(ch):
        raise OutOfRange(f"index {index} outside channel of length {len(ch)}")
    values = ch.values.copy()
    quality = ch.quality.copy()
    values[index] = float(value)
    quality[index] = SampleQuality.USER_EDITED
    return frame.with_values(ch.name, values, quality)


def data_quality(frame: TimeSeriesFrame, channel: ChannelName | str) -> float:
    """Percent of samples that were missing (still missing or interpolated).

    User-edited samples count as present: an analyst-supplied value is
    trusted data.
    """
    ch = frame.channel(channel)
    if len(ch) == 0:
        raise EmptyChannel(f"{ch.name.value}: empty channel")
    bad = np.isin(ch.quality, (SampleQuality.MISSING, SampleQuality.INTERPOLATED))
    return 100.0 * float(bad.sum()) / len(ch)
