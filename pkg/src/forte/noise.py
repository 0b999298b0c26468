"""Multiplicative noise models for weather channels.

Noise is a percentage of each sample's own value (a 60°F reading with 10%
added noise lands in [60, 66]). Constant bias scales every sample by one
factor; uniform-random draws an independent factor per sample from a
counter-based stream keyed by the seed, so draw i always belongs to sample i.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidCombination, InvalidLevel
from .timeseries import ChannelName, SampleQuality, TimeSeriesFrame, WEATHER_CHANNELS

MAX_LEVEL_PCT = 30.0
AD_HOC_LEVELS = (5.0, 10.0)

# constant-bias factors are snapped to a dyadic grid so scaling a channel is
# exact in floating point (keeps constant-bias forecasts bit-identical to the
# baseline); the snap moves the factor by less than 5e-10
_BIAS_GRID = 2.0 ** 30


class NoiseMode(str, Enum):
    CONSTANT_BIAS = "constant_bias"
    UNIFORM_RANDOM = "uniform_random"


class NoiseDirection(str, Enum):
    ADD = "add"
    SUBTRACT = "subtract"
    BOTH = "both"


@dataclass(frozen=True)
class NoisePerturbation:
    variable: ChannelName
    mode: NoiseMode
    direction: NoiseDirection
    level: float                  # percent in [0, 30]
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "variable", ChannelName(self.variable))
        object.__setattr__(self, "mode", NoiseMode(self.mode))
        object.__setattr__(self, "direction", NoiseDirection(self.direction))
        if self.variable not in WEATHER_CHANNELS:
            raise InvalidCombination(f"{self.variable.value} is not a perturbable weather channel")
        if not 0.0 <= self.level <= MAX_LEVEL_PCT:
            raise InvalidLevel(f"noise level {self.level} outside [0, {MAX_LEVEL_PCT}]")
        if self.mode is NoiseMode.CONSTANT_BIAS and self.direction is NoiseDirection.BOTH:
            raise InvalidCombination("a constant bias cannot point both ways")


def bias_factor(level: float, direction: NoiseDirection) -> float:
    sign = 1.0 if direction is NoiseDirection.ADD else -1.0
    return round((1.0 + sign * level / 100.0) * _BIAS_GRID) / _BIAS_GRID


def perturb(values, p: NoisePerturbation) -> np.ndarray:
    """Return perturbed copies of the samples; level 0 is the identity."""
    x = np.asarray(values, dtype=np.float64)
    if p.level == 0.0:
        return x.copy()
    if p.mode is NoiseMode.CONSTANT_BIAS:
        return x * bias_factor(p.level, p.direction)
    rng = np.random.Generator(np.random.Philox(key=p.seed & (2 ** 64 - 1)))
    u = rng.random(x.size)
    span = p.level / 100.0
    if p.direction is NoiseDirection.ADD:
        factors = 1.0 + span * u
    elif p.direction is NoiseDirection.SUBTRACT:
        factors = 1.0 - span * u
    else:
        factors = 1.0 + span * (2.0 * u - 1.0)
    return x * factors


def perturb_frame(frame: TimeSeriesFrame, p: NoisePerturbation) -> TimeSeriesFrame:
    """Perturb one weather channel over the whole presented window."""
    ch = frame.channel(p.variable)
    return frame.with_values(ch.name, perturb(ch.values, p), ch.quality)


def ad_hoc_noise(frame: TimeSeriesFrame, variable: ChannelName | str,
                 level: float, seed: int) -> TimeSeriesFrame:
    """Interactive Add-Noise: uniform two-sided noise at 5% or 10% only."""
    if float(level) not in AD_HOC_LEVELS:
        raise InvalidLevel(f"interactive noise level must be one of {AD_HOC_LEVELS}")
    p = NoisePerturbation(variable=ChannelName(variable), mode=NoiseMode.UNIFORM_RANDOM,
                          direction=NoiseDirection.BOTH, level=float(level), seed=seed)
    return perturb_frame(frame, p)
