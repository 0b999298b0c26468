"""Forecast error metrics and baseline-deviation arithmetic.

MAPE excludes samples whose actual magnitude is below 0.01 kW (net load
crosses zero under high solar) and reports the exclusion count instead of
epsilon-flooring. Deviations are signed: noise can accidentally help.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BaselineMismatch, EmptyInput, ShapeMismatch

MAPE_EXCLUSION_KW = 0.01


@dataclass(frozen=True)
class MetricSet:
    mae: float                  # kW
    mape: float | None          # percent; None when every sample was excluded
    n_used: int
    n_excluded_mape: int


@dataclass(frozen=True)
class DeviationRecord:
    month: int                  # 1..12
    noise_level: float          # percent
    observation: int
    mae_dev: float              # kW, metric - baseline
    mape_dev: float | None      # percent


def _check(actual, predicted) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(actual, dtype=np.float64)
    p = np.asarray(predicted, dtype=np.float64)
    if a.shape != p.shape:
        raise ShapeMismatch(f"actual {a.shape} vs predicted {p.shape}")
    if a.size == 0:
        raise EmptyInput("empty metric input")
    return a, p


def mae(actual, predicted) -> float:
    """Mean absolute error in kW."""
    a, p = _check(actual, predicted)
    return float(np.mean(np.abs(a - p)))


def mape(actual, predicted) -> tuple[float | None, int, int]:
    """Mean absolute percentage error.

    Returns (value-or-None, n_used, n_excluded); samples with
    |actual| < 0.01 kW are excluded from the mean.
    """
    a, p = _check(actual, predicted)
    included = np.abs(a) >= MAPE_EXCLUSION_KW
    n_used = int(included.sum())
    n_excluded = a.size - n_used
    if n_used == 0:
        return None, 0, n_excluded
    value = 100.0 * float(np.mean(np.abs(a[included] - p[included]) / np.abs(a[included])))
    return value, n_used, n_excluded


def metric_set(actual, predicted) -> MetricSet:
    """Score a forecast against actuals over matching timestamps."""
    m = mae(actual, predicted)
    pct, n_used, n_excluded = mape(actual, predicted)
    return MetricSet(mae=m, mape=pct, n_used=n_used, n_excluded_mape=n_excluded)


def deviation(metric: MetricSet, baseline: MetricSet) -> tuple[float, float | None]:
    """Componentwise metric - baseline; both must cover the same samples."""
    if (metric.n_used + metric.n_excluded_mape) != (baseline.n_used + baseline.n_excluded_mape) \
            or metric.n_used != baseline.n_used:
        raise BaselineMismatch("metric and baseline cover different sample sets")
    mae_dev = metric.mae - baseline.mae
    if metric.mape is None or baseline.mape is None:
        return mae_dev, None
    return mae_dev, metric.mape - baseline.mape


def interval_coverage(actual, lower95, upper95) -> float:
    """Fraction of actuals falling inside [lower95, upper95]."""
    a, lo = _check(actual, lower95)
    _, hi = _check(actual, upper95)
    return float(np.mean((lo <= a) & (a <= hi)))
