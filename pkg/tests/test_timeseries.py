"""Core time-series behaviour: gaps, interpolation, overrides, quality."""

from __future__ import annotations

from datetime import datetime, timezone

import numpy as np
import pytest

from forte.errors import ChannelNotFound, EmptyChannel, OutOfRange, UninterpolatableChannel
from forte.timeseries import (
    Channel,
    ChannelName,
    GapInterval,
    Penetration,
    SampleQuality,
    TimeSeriesFrame,
    apply_override,
    data_quality,
    detect_gaps,
    interpolate_linear,
)

START = datetime(2020, 1, 1, tzinfo=timezone.utc)

O = SampleQuality.OBSERVED
M = SampleQuality.MISSING
I = SampleQuality.INTERPOLATED
U = SampleQuality.USER_EDITED


def make_frame(values, quality, name=ChannelName.TEMPERATURE):
    values = [np.nan if v is None else v for v in values]
    ch = Channel(name, np.array(values, dtype=float), np.array(quality, dtype=np.uint8))
    return TimeSeriesFrame(start=START, penetration=Penetration.P0, channels={name: ch})


class TestChannel:
    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            Channel(ChannelName.TEMPERATURE, np.array([1.0, 2.0]), np.array([O], dtype=np.uint8))

    def test_missing_must_be_nan(self):
        with pytest.raises(ValueError):
            Channel(ChannelName.TEMPERATURE, np.array([1.0]), np.array([M], dtype=np.uint8))

    def test_observed_must_have_value(self):
        with pytest.raises(ValueError):
            Channel(ChannelName.TEMPERATURE, np.array([np.nan]), np.array([O], dtype=np.uint8))

    def test_values_frozen(self):
        ch = Channel(ChannelName.TEMPERATURE, np.array([1.0]), np.array([O], dtype=np.uint8))
        with pytest.raises(ValueError):
            ch.values[0] = 2.0


class TestDetectGaps:
    def test_no_missing_gives_empty(self):
        frame = make_frame([1, 2, 3], [O, O, O])
        assert detect_gaps(frame, ChannelName.TEMPERATURE) == []

    def test_single_run(self):
        frame = make_frame([1, 2, None, None, 5], [O, O, M, M, O])
        assert detect_gaps(frame, ChannelName.TEMPERATURE) == [
            GapInterval(2, 3, ChannelName.TEMPERATURE)]

    def test_two_unit_runs(self):
        frame = make_frame([None, 2, None], [M, O, M])
        gaps = detect_gaps(frame, ChannelName.TEMPERATURE)
        assert gaps == [GapInterval(0, 0, ChannelName.TEMPERATURE),
                        GapInterval(2, 2, ChannelName.TEMPERATURE)]

    def test_unknown_channel(self):
        frame = make_frame([1], [O])
        with pytest.raises(ChannelNotFound):
            detect_gaps(frame, ChannelName.HUMIDITY)


class TestInterpolate:
    def test_midpoint(self):
        frame = make_frame([10, None, 20], [O, M, O])
        out = interpolate_linear(frame, ChannelName.TEMPERATURE)
        ch = out.channel(ChannelName.TEMPERATURE)
        assert list(ch.values) == [10, 15, 20]
        assert list(ch.quality) == [O, I, O]

    def test_leading_edge_extension(self):
        frame = make_frame([None, 8, 9], [M, O, O])
        out = interpolate_linear(frame, ChannelName.TEMPERATURE)
        assert list(out.channel(ChannelName.TEMPERATURE).values) == [8, 8, 9]
        assert out.channel(ChannelName.TEMPERATURE).quality[0] == I

    def test_equal_spacing_on_line(self):
        frame = make_frame([0, None, None, 30], [O, M, M, O])
        out = interpolate_linear(frame, ChannelName.TEMPERATURE)
        assert list(out.channel(ChannelName.TEMPERATURE).values) == [0, 10, 20, 30]

    def test_all_missing_raises(self):
        frame = make_frame([None, None], [M, M])
        with pytest.raises(UninterpolatableChannel):
            interpolate_linear(frame, ChannelName.TEMPERATURE)

    def test_original_frame_untouched(self):
        frame = make_frame([10, None, 20], [O, M, O])
        interpolate_linear(frame, ChannelName.TEMPERATURE)
        assert np.isnan(frame.channel(ChannelName.TEMPERATURE).values[1])

    def test_idempotent(self):
        frame = make_frame([10, None, None, 40, None], [O, M, M, O, M])
        once = interpolate_linear(frame, ChannelName.TEMPERATURE)
        twice = interpolate_linear(once, ChannelName.TEMPERATURE)
        assert np.array_equal(once.channel(ChannelName.TEMPERATURE).values,
                              twice.channel(ChannelName.TEMPERATURE).values)
        assert detect_gaps(once, ChannelName.TEMPERATURE) == []

    @pytest.mark.parametrize("seed", range(8))
    def test_reconstructs_lines_exactly(self, seed):
        # observed samples on a line a*t + b: interpolation recovers the line
        rng = np.random.default_rng(seed)
        n = 200
        a, b = rng.normal(size=2) * 10
        t = np.arange(n, dtype=float)
        truth = a * t + b
        quality = np.full(n, O, dtype=np.uint8)
        holes = rng.choice(np.arange(1, n - 1), size=60, replace=False)
        quality[holes] = M
        values = truth.copy()
        values[quality == M] = np.nan
        frame = make_frame(values, quality)
        out = interpolate_linear(frame, ChannelName.TEMPERATURE)
        got = out.channel(ChannelName.TEMPERATURE).values
        scale = np.maximum(np.abs(truth), 1.0)
        assert np.max(np.abs(got - truth) / scale) < 1e-9


class TestOverride:
    def test_replaces_value_and_tag(self):
        frame = make_frame([10, 15, 20], [O, I, O])
        out = apply_override(frame, ChannelName.TEMPERATURE, 1, 18.0)
        ch = out.channel(ChannelName.TEMPERATURE)
        assert list(ch.values) == [10, 18, 20]
        assert list(ch.quality) == [O, U, O]

    def test_observed_sample_allowed(self):
        frame = make_frame([10, 15, 20], [O, O, O])
        out = apply_override(frame, ChannelName.TEMPERATURE, 0, 11.0)
        assert out.channel(ChannelName.TEMPERATURE).quality[0] == U

    def test_out_of_range(self):
        frame = make_frame([10.0] * 96, [O] * 96)
        with pytest.raises(OutOfRange):
            apply_override(frame, ChannelName.TEMPERATURE, 99, 1.0)

    def test_value_semantics(self):
        frame = make_frame([10, 15, 20], [O, O, O])
        apply_override(frame, ChannelName.TEMPERATURE, 1, 99.0)
        assert frame.channel(ChannelName.TEMPERATURE).values[1] == 15


class TestDataQuality:
    def test_zero_missing(self):
        frame = make_frame([1.0] * 96, [O] * 96)
        assert data_quality(frame, ChannelName.TEMPERATURE) == 0.0

    def test_quarter_interpolated(self):
        quality = [I] * 24 + [O] * 72
        frame = make_frame([1.0] * 96, quality)
        assert data_quality(frame, ChannelName.TEMPERATURE) == 25.0

    def test_user_edits_count_as_present(self):
        quality = [I] * 20 + [U] * 4 + [O] * 72
        frame = make_frame([1.0] * 96, quality)
        assert data_quality(frame, ChannelName.TEMPERATURE) == pytest.approx(100 * 20 / 96)

    def test_empty_channel(self):
        frame = make_frame([], [])
        with pytest.raises(EmptyChannel):
            data_quality(frame, ChannelName.TEMPERATURE)

    def test_override_never_increases_quality_pct(self):
        frame = make_frame([10, None, 20, None, 40], [O, M, O, M, O])
        frame = interpolate_linear(frame, ChannelName.TEMPERATURE)
        before = data_quality(frame, ChannelName.TEMPERATURE)
        frame = apply_override(frame, ChannelName.TEMPERATURE, 1, 12.0)
        after = data_quality(frame, ChannelName.TEMPERATURE)
        assert after <= before
        assert 0.0 <= after <= 100.0


class TestFrame:
    def test_index_of_round_trip(self):
        frame = make_frame([1.0] * 10, [O] * 10)
        for i in (0, 3, 9):
            assert frame.index_of(frame.timestamp(i)) == i

    def test_index_off_grid(self):
        frame = make_frame([1.0] * 10, [O] * 10)
        with pytest.raises(OutOfRange):
            frame.index_of(START.replace(minute=7))

    def test_mislabelled_channel_rejected(self):
        # the name-keyed mapping is what guarantees one net-load channel per
        # frame; a channel stored under the wrong key must not slip through
        ch = Channel(ChannelName.NET_LOAD_ACTUAL, np.array([1.0]), np.array([O], dtype=np.uint8))
        with pytest.raises(ValueError):
            TimeSeriesFrame(start=START, penetration=Penetration.P0,
                            channels={ChannelName.TEMPERATURE: ch})
