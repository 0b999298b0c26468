"""Deterministic synthetic residential dataset generator.

Stands in for a proprietary single-site year: weather, demand with a
heating/cooling response hinged at the cooling setpoint, behind-the-meter PV,
and net load at the four penetration levels. Identical config and seed give a
bit-identical dataset; every stochastic term draws from a counter-based
stream keyed by (seed, channel), so nothing depends on generation order.

Channel values that noise experiments may scale (weather and apparent power)
are snapped to a 2^-11 grid: with bias factors on a dyadic grid their
floating-point products are exact, which keeps constant-bias forecasts
bit-identical to baseline.
"""

from __future__ import annotations

import calendar
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np
from scipy.signal import lfilter

from .dataset import Dataset
from .timeseries import STEPS_PER_DAY, SampleQuality

VALUE_GRID = 2.0 ** -11          # weather quantization step (~5e-4)
POWER_FACTOR = 0.95
PENETRATION_PV_SHARE = {"netload_kw_p0": 0.0, "netload_kw_p20": 0.4,
                        "netload_kw_p30": 0.6, "netload_kw_p50": 1.0}

_WEATHER_COLS = ("temperature_f", "humidity_pct", "apparent_power_kva",
                 "solar_irradiance_wm2")

# stable per-channel stream ids for the counter-based generator
_STREAMS = {"temperature": 1, "humidity": 2, "cloud": 3, "demand": 4, "apparent_power": 5}


@dataclass(frozen=True)
class SynthConfig:
    year: int = 2020
    seed: int = 0
    base_load_kw: float = 2.0
    cooling_setpoint_f: float = 65.0
    heating_gain_kw_per_f: float = 0.16
    cooling_gain_kw_per_f: float = 0.20
    pv_capacity_kw: float = 5.0
    gap_rate: float = 0.0
    noise_sd_kw: float = 0.35

    def __post_init__(self):
        if not 0.0 <= self.gap_rate < 0.5:
            raise ValueError("gap_rate must lie in [0, 0.5)")
        if self.heating_gain_kw_per_f < 0 or self.cooling_gain_kw_per_f < 0:
            raise ValueError("gains must be non-negative")
        if self.pv_capacity_kw < 0:
            raise ValueError("pv_capacity_kw must be non-negative")


def _rng(seed: int, stream: str) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=seed, spawn_key=(_STREAMS[stream],))
    return np.random.Generator(np.random.Philox(seq))


def _ar1(rng: np.random.Generator, n: int, phi: float, sd: float) -> np.ndarray:
    white = rng.standard_normal(n) * sd * np.sqrt(1.0 - phi * phi)
    return lfilter([1.0], [1.0, -phi], white)


def _quantize(values: np.ndarray) -> np.ndarray:
    return np.round(values / VALUE_GRID) * VALUE_GRID


def generate(config: SynthConfig) -> Dataset:
    """Generate one calendar year at 15-minute cadence."""
    days = 366 if calendar.isleap(config.year) else 365
    n = days * STEPS_PER_DAY
    step = np.arange(n)
    hour = (step % STEPS_PER_DAY) * 0.25
    day_frac = step / STEPS_PER_DAY

    # season in [-1, 1]: -1 mid-January, +1 mid-July
    season = -np.cos(2.0 * np.pi * (day_frac - 14.0) / 365.25)
    # diurnal swing is widest in the shoulder seasons and narrow at the
    # extremes, which concentrates temperature variance in April/October
    diurnal_amp = 4.0 + 9.0 * (1.0 - season * season)
    diurnal = diurnal_amp * np.cos(2.0 * np.pi * (hour - 15.0) / 24.0)
    temperature = 60.0 + 28.0 * season + diurnal \
        + _ar1(_rng(config.seed, "temperature"), n, 0.9, 1.5)
    temperature = _quantize(temperature)

    humidity = 80.0 - 0.5 * (temperature - 50.0) \
        + _ar1(_rng(config.seed, "humidity"), n, 0.85, 4.0)
    humidity = _quantize(np.clip(humidity, 15.0, 100.0))

    day_length = 12.0 + 3.2 * season
    sunrise = 12.0 - day_length / 2.0
    arch = np.sin(np.pi * np.clip((hour - sunrise) / day_length, 0.0, 1.0))
    clear_sky = (580.0 + 350.0 * season) * np.maximum(arch, 0.0)
    cloud_rng = _rng(config.seed, "cloud")
    per_day_cloud = 1.0 - 0.55 * cloud_rng.random(days) ** 2
    irradiance = _quantize(np.maximum(clear_sky * per_day_cloud[step // STEPS_PER_DAY], 0.0))

    occupancy = 0.45 * np.exp(-(((hour - 7.5) / 1.8) ** 2)) \
        + 0.8 * np.exp(-(((hour - 19.0) / 2.4) ** 2))
    dow = (datetime(config.year, 1, 1).weekday() + step // STEPS_PER_DAY) % 7
    occupancy = occupancy * np.where(dow >= 5, 1.15, 1.0)
    setpoint = config.cooling_setpoint_f
    thermal = config.heating_gain_kw_per_f * np.maximum(setpoint - temperature, 0.0) \
        + config.cooling_gain_kw_per_f * np.maximum(temperature - setpoint, 0.0)
    demand = config.base_load_kw + occupancy + thermal \
        + _ar1(_rng(config.seed, "demand"), n, 0.8, config.noise_sd_kw)
    demand = _quantize(demand)

    # metering noise keeps apparent power an imperfect demand proxy
    apparent_power = demand / POWER_FACTOR \
        + _ar1(_rng(config.seed, "apparent_power"), n, 0.5, config.noise_sd_kw)
    apparent_power = _quantize(apparent_power)

    pv = config.pv_capacity_kw * irradiance / 1000.0
    columns = {
        "temperature_f": temperature,
        "humidity_pct": humidity,
        "apparent_power_kva": apparent_power,
        "solar_irradiance_wm2": irradiance,
    }
    for col, share in PENETRATION_PV_SHARE.items():
        columns[col] = demand - share * pv
    quality = {col: np.full(n, SampleQuality.OBSERVED, dtype=np.uint8) for col in columns}
    dataset = Dataset(start=datetime(config.year, 1, 1, tzinfo=timezone.utc),
                      columns=columns, quality=quality)
    if config.gap_rate > 0.0:
        dataset = inject_gaps(dataset, config.gap_rate, config.seed)
    return dataset


def inject_gaps(dataset: Dataset, gap_rate: float, seed: int) -> Dataset:
    """Punch missing runs (1-16 samples) into the weather channels.

    Net load is never gapped. Placement is deterministic under the seed and
    stops once roughly gap_rate of each channel is missing.
    """
    if not 0.0 <= gap_rate < 0.5:
        raise ValueError("gap_rate must lie in [0, 0.5)")
    if gap_rate == 0.0:
        return dataset
    n = dataset.n_steps
    target = int(round(gap_rate * n))
    columns = {col: v.copy() for col, v in dataset.columns.items()}
    quality = {col: q.copy() for col, q in dataset.quality.items()}
    for k, col in enumerate(_WEATHER_COLS):
        seq = np.random.SeedSequence(entropy=seed, spawn_key=(100 + k,))
        rng = np.random.Generator(np.random.Philox(seq))
        missing = np.zeros(n, dtype=bool)
        while missing.sum() < target:
            start = int(rng.integers(0, n))
            length = int(rng.integers(1, 17))
            missing[start:start + length] = True
        columns[col][missing] = np.nan
        quality[col][missing] = SampleQuality.MISSING
    return Dataset(start=dataset.start, columns=columns, quality=quality)
