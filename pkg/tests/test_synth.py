"""Synthetic generator: identities, invariants, determinism, gap injection."""

from __future__ import annotations

import calendar
from datetime import datetime, timezone

import numpy as np
import pytest

from forte.synth import SynthConfig, generate, inject_gaps
from forte.timeseries import STEPS_PER_DAY, SampleQuality

WEATHER = ("temperature_f", "humidity_pct", "apparent_power_kva", "solar_irradiance_wm2")


def month_slice(dataset, month):
    i0 = (datetime(2020, month, 1, tzinfo=timezone.utc) - dataset.start).days * STEPS_PER_DAY
    days = calendar.monthrange(2020, month)[1]
    return slice(i0, i0 + days * STEPS_PER_DAY)


@pytest.fixture(scope="module")
def dataset():
    return generate(SynthConfig(year=2020, seed=123))


class TestGenerate:
    def test_row_count_leap_year(self, dataset):
        assert dataset.n_steps == 366 * 96

    def test_p0_equals_demand_plus_zero_pv(self, dataset):
        # at zero penetration the PV share is zero by construction, so the
        # p0 channel acts as the demand reference everywhere
        pv = 5.0 * dataset.columns["solar_irradiance_wm2"] / 1000.0
        p50 = dataset.columns["netload_kw_p50"]
        p0 = dataset.columns["netload_kw_p0"]
        assert np.allclose(p0 - p50, pv, atol=1e-9)

    def test_midnight_net_load_identical_across_penetrations(self, dataset):
        midnight = np.arange(0, dataset.n_steps, STEPS_PER_DAY)
        assert np.all(dataset.columns["solar_irradiance_wm2"][midnight] == 0.0)
        for col in ("netload_kw_p20", "netload_kw_p30", "netload_kw_p50"):
            assert np.array_equal(dataset.columns["netload_kw_p0"][midnight],
                                  dataset.columns[col][midnight])

    def test_netload_strictly_decreasing_in_penetration_when_sunny(self, dataset):
        sunny = dataset.columns["solar_irradiance_wm2"] > 0
        p0 = dataset.columns["netload_kw_p0"][sunny]
        p20 = dataset.columns["netload_kw_p20"][sunny]
        p30 = dataset.columns["netload_kw_p30"][sunny]
        p50 = dataset.columns["netload_kw_p50"][sunny]
        assert np.all(p0 > p20) and np.all(p20 > p30) and np.all(p30 > p50)

    def test_humidity_bounds(self, dataset):
        h = dataset.columns["humidity_pct"]
        assert h.min() >= 15.0 and h.max() <= 100.0

    def test_irradiance_nonnegative(self, dataset):
        assert dataset.columns["solar_irradiance_wm2"].min() >= 0.0

    def test_january_colder_than_july(self, dataset):
        t = dataset.columns["temperature_f"]
        assert t[month_slice(dataset, 1)].mean() < t[month_slice(dataset, 7)].mean()

    def test_seed_determinism(self):
        a = generate(SynthConfig(year=2020, seed=42))
        b = generate(SynthConfig(year=2020, seed=42))
        for col in a.columns:
            assert np.array_equal(a.columns[col], b.columns[col])

    def test_seed_sensitivity(self):
        a = generate(SynthConfig(year=2020, seed=1))
        b = generate(SynthConfig(year=2020, seed=2))
        assert not np.array_equal(a.columns["temperature_f"], b.columns["temperature_f"])

    def test_non_leap_year(self):
        assert generate(SynthConfig(year=2021, seed=0)).n_steps == 365 * 96

    def test_gap_rate_validation(self):
        with pytest.raises(ValueError):
            SynthConfig(year=2020, seed=0, gap_rate=0.6)


class TestInjectGaps:
    def test_zero_rate_is_identity(self, dataset):
        out = inject_gaps(dataset, 0.0, seed=9)
        for col in dataset.columns:
            assert np.array_equal(out.columns[col], dataset.columns[col], equal_nan=True)

    @pytest.mark.parametrize("seed", [0, 7, 99])
    def test_missing_fraction_near_target(self, dataset, seed):
        out = inject_gaps(dataset, 0.05, seed=seed)
        for col in WEATHER:
            frac = np.isnan(out.columns[col]).mean()
            assert 0.03 <= frac <= 0.07

    def test_netload_never_gapped(self, dataset):
        out = inject_gaps(dataset, 0.2, seed=3)
        for col in ("netload_kw_p0", "netload_kw_p20", "netload_kw_p30", "netload_kw_p50"):
            assert not np.isnan(out.columns[col]).any()

    def test_same_seed_same_placement(self, dataset):
        a = inject_gaps(dataset, 0.05, seed=5)
        b = inject_gaps(dataset, 0.05, seed=5)
        for col in WEATHER:
            assert np.array_equal(np.isnan(a.columns[col]), np.isnan(b.columns[col]))

    def test_quality_tags_follow_values(self, dataset):
        out = inject_gaps(dataset, 0.05, seed=5)
        for col in WEATHER:
            missing = np.isnan(out.columns[col])
            assert np.array_equal(out.quality[col] == SampleQuality.MISSING, missing)
