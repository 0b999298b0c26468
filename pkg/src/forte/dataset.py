"""Dataset container and the CSV interchange format.

One dataset holds a contiguous 15-minute grid of weather channels plus net
load at all four penetration levels; frames for a given date range and
penetration are sliced out of it. The CSV layout (header below) is the only
on-disk format: empty cell means missing, anything non-numeric is rejected
with its row number.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .errors import IngestError, OutOfRange
from .timeseries import (
    CADENCE,
    Channel,
    ChannelName,
    Penetration,
    SampleQuality,
    TimeSeriesFrame,
    WEATHER_CHANNELS,
)

CSV_HEADER = [
    "timestamp",
    "temperature_f",
    "humidity_pct",
    "apparent_power_kva",
    "solar_irradiance_wm2",
    "netload_kw_p0",
    "netload_kw_p20",
    "netload_kw_p30",
    "netload_kw_p50",
]

_WEATHER_COLUMNS = {
    ChannelName.TEMPERATURE: "temperature_f",
    ChannelName.HUMIDITY: "humidity_pct",
    ChannelName.APPARENT_POWER: "apparent_power_kva",
    ChannelName.SOLAR_IRRADIANCE: "solar_irradiance_wm2",
}

_NETLOAD_COLUMNS = {
    Penetration.P0: "netload_kw_p0",
    Penetration.P20: "netload_kw_p20",
    Penetration.P30: "netload_kw_p30",
    Penetration.P50: "netload_kw_p50",
}


@dataclass(frozen=True)
class Dataset:
    """Full-coverage series, queryable by date range and penetration."""

    start: datetime
    columns: dict[str, np.ndarray]            # column name -> float64 (NaN = missing)
    quality: dict[str, np.ndarray]            # column name -> uint8 quality tags

    def __post_init__(self):
        if self.start.tzinfo is None:
            object.__setattr__(self, "start", self.start.replace(tzinfo=timezone.utc))

    @property
    def n_steps(self) -> int:
        return len(next(iter(self.columns.values())))

    @property
    def end(self) -> datetime:
        """Exclusive end of coverage."""
        return self.start + CADENCE * self.n_steps

    def index_of(self, ts: datetime) -> int:
        if ts.tzinfo is None:
            ts = ts.replace(tzinfo=timezone.utc)
        steps, rem = divmod(ts - self.start, CADENCE)
        if rem or not (0 <= steps <= self.n_steps):
            raise OutOfRange(f"{ts.isoformat()} outside dataset coverage")
        return int(steps)

    def frame(self, start: datetime, end: datetime, penetration: Penetration,
              channels: tuple[ChannelName, ...] | None = None) -> TimeSeriesFrame:
        """Slice [start, end) into a frame for one penetration level."""
        i0 = self.index_of(start)
        i1 = self.index_of(end)
        if i1 <= i0:
            raise OutOfRange("empty or inverted range")
        wanted = channels if channels is not None else (*WEATHER_CHANNELS, ChannelName.NET_LOAD_ACTUAL)
        out: dict[ChannelName, Channel] = {}
        for name in wanted:
            name = ChannelName(name)
            col = _NETLOAD_COLUMNS[penetration] if name is ChannelName.NET_LOAD_ACTUAL \
                else _WEATHER_COLUMNS[name]
            out[name] = Channel(name, self.columns[col][i0:i1].copy(),
                                self.quality[col][i0:i1].copy())
        return TimeSeriesFrame(start=self.start + CADENCE * i0,
                               penetration=penetration, channels=out)


def _parse_timestamp(raw: str, row: int) -> datetime:
    try:
        ts = datetime.fromisoformat(raw.replace("Z", "+00:00"))
    except ValueError:
        raise IngestError(f"row {row}: bad timestamp {raw!r}", row=row)
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def read_csv(path: str | Path) -> Dataset:
    """Load a dataset, validating schema, cadence and cell contents."""
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise IngestError("empty file")
        if header != CSV_HEADER:
            raise IngestError(f"bad header: expected {','.join(CSV_HEADER)}", row=1)
        timestamps: list[datetime] = []
        cells: list[list[float]] = []
        for row_no, row in enumerate(reader, start=2):
            if len(row) != len(CSV_HEADER):
                raise IngestError(f"row {row_no}: expected {len(CSV_HEADER)} cells, got {len(row)}",
                                  row=row_no)
            timestamps.append(_parse_timestamp(row[0], row_no))
            parsed = []
            for col, cell in zip(CSV_HEADER[1:], row[1:]):
                if cell == "":
                    parsed.append(math.nan)
                    continue
                try:
                    parsed.append(float(cell))
                except ValueError:
                    raise IngestError(f"row {row_no}: non-numeric {col} value {cell!r}", row=row_no)
                if math.isnan(parsed[-1]):
                    raise IngestError(f"row {row_no}: non-numeric {col} value {cell!r}", row=row_no)
            cells.append(parsed)
    if not timestamps:
        raise IngestError("no data rows")
    for i in range(1, len(timestamps)):
        if timestamps[i] - timestamps[i - 1] != CADENCE:
            raise IngestError(f"row {i + 2}: cadence break (must be a strict 15-minute grid)",
                              row=i + 2)
    data = np.asarray(cells, dtype=np.float64)
    columns: dict[str, np.ndarray] = {}
    quality: dict[str, np.ndarray] = {}
    for j, col in enumerate(CSV_HEADER[1:]):
        values = data[:, j]
        q = np.where(np.isnan(values), SampleQuality.MISSING, SampleQuality.OBSERVED)
        columns[col] = values
        quality[col] = q.astype(np.uint8)
    humidity = columns["humidity_pct"]
    bad = np.flatnonzero((humidity < 0) | (humidity > 100))
    if bad.size:
        raise IngestError(f"row {bad[0] + 2}: humidity_pct outside [0, 100]", row=int(bad[0]) + 2)
    return Dataset(start=timestamps[0], columns=columns, quality=quality)


def write_csv(dataset: Dataset, path: str | Path) -> None:
    """Write the canonical CSV; floats use shortest round-trip repr."""
    path = Path(path)
    n = dataset.n_steps
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for i in range(n):
            ts = (dataset.start + CADENCE * i).strftime("%Y-%m-%dT%H:%M:%SZ")
            row = [ts]
            for col in CSV_HEADER[1:]:
                v = dataset.columns[col][i]
                row.append("" if math.isnan(v) else repr(float(v)))
            writer.writerow(row)
