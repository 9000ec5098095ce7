import numpy as np
import pandas as pd
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aethercast.errors import MissingColumn, ZeroVariance
from aethercast.preprocess import (PipelineState, apply_standardizer,
                                   apply_winsor, fit_pipeline,
                                   fit_standardizer, fit_winsor,
                                   prognosis_view, transform_train)
from aethercast.series import HourlyFrame, chrono_split, weekly_windows
from helpers import hourly_index, make_frame


def single_column_frame(values, name="pm2_5"):
    idx = hourly_index(len(values))
    return HourlyFrame(pd.DataFrame({name: np.asarray(values, dtype=float)},
                                    index=idx))


class TestWinsorBounds:
    def test_linear_interpolation_quantile_oracle(self):
        # 1..100 at (0.01, 0.99): q = 1 + p * 99 under linear interpolation
        f = single_column_frame(np.arange(1, 101))
        b = fit_winsor(f, 0.01, 0.99)
        assert b.lo["pm2_5"] == pytest.approx(1.99, abs=1e-12)
        assert b.hi["pm2_5"] == pytest.approx(99.01, abs=1e-12)

    def test_constant_column_degenerates_with_warning(self):
        f = single_column_frame([5.0, 5.0, 5.0])
        with pytest.warns(UserWarning):
            b = fit_winsor(f, 0.01, 0.99)
        assert b.lo["pm2_5"] == b.hi["pm2_5"] == 5.0

    def test_full_range_is_identity(self):
        f = make_frame(100)
        b = fit_winsor(f, 0.0, 1.0)
        for c in f.columns:
            assert b.lo[c] == f.column(c).min()
            assert b.hi[c] == f.column(c).max()
        out = apply_winsor(f, b)
        pd.testing.assert_frame_equal(out.data, f.data)

    def test_invalid_percentiles(self):
        with pytest.raises(ValueError):
            fit_winsor(make_frame(10), 0.9, 0.1)


class TestApplyWinsor:
    def test_clamps_above(self):
        f = single_column_frame([10.0, 150.0, 50.0])
        b = fit_winsor(single_column_frame([2.0, 50.0, 99.0]), 0.0, 1.0)
        out = apply_winsor(f, b)
        np.testing.assert_array_equal(out.target, [10.0, 99.0, 50.0])

    def test_within_bounds_unchanged(self):
        f = single_column_frame([10.0, 20.0, 30.0])
        b = fit_winsor(single_column_frame([0.0, 50.0, 100.0]), 0.0, 1.0)
        np.testing.assert_array_equal(apply_winsor(f, b).target, f.target)

    @given(seed=st.integers(0, 1000))
    @settings(max_examples=25, deadline=None)
    def test_idempotent(self, seed):
        f = make_frame(120, seed=seed)
        b = fit_winsor(f, 0.05, 0.95)
        once = apply_winsor(f, b)
        twice = apply_winsor(once, b)
        pd.testing.assert_frame_equal(once.data, twice.data)


class TestStandardizer:
    def test_two_point_population_stats(self):
        idx = hourly_index(2)
        f = HourlyFrame(pd.DataFrame({"pm2_5": [1.0, 1.5],
                                      "no": [0.0, 2.0]}, index=idx))
        s = fit_standardizer(f, ["no"])
        assert s.mean["no"] == 1.0
        assert s.std["no"] == 1.0  # population formula, not n-1

    def test_target_cannot_be_standardized(self):
        with pytest.raises(ValueError):
            fit_standardizer(make_frame(50), ["pm2_5"])

    def test_zero_variance_rejected(self):
        idx = hourly_index(5)
        f = HourlyFrame(pd.DataFrame({"pm2_5": np.arange(5.0),
                                      "no": np.full(5, 3.0)}, index=idx))
        with pytest.raises(ZeroVariance):
            fit_standardizer(f, ["no"])

    def test_missing_column(self):
        with pytest.raises(MissingColumn):
            fit_standardizer(make_frame(50), ["o3"])

    def test_train_transforms_to_unit_moments(self):
        f = make_frame(300)
        s = fit_standardizer(f, ["no", "no2"])
        out = apply_standardizer(f, s)
        for c in ("no", "no2"):
            v = out.column(c)
            assert abs(v.mean()) < 1e-12
            assert abs(v.std() - 1.0) < 1e-12

    def test_test_segment_keeps_train_statistics(self):
        f = make_frame(400)
        split = chrono_split(f, 0.5)
        s = fit_standardizer(split.train, ["no"])
        out = apply_standardizer(split.test, s)
        # no refit: the test segment does not recenter to zero in general
        assert abs(out.column("no").mean()) > 1e-6

    def test_identity_standardizer(self):
        from aethercast.preprocess import Standardizer
        f = make_frame(100)
        s = Standardizer(mean={"no": 0.0}, std={"no": 1.0})
        pd.testing.assert_frame_equal(apply_standardizer(f, s).data, f.data)


class TestPipeline:
    def test_fit_transform_round_trip(self):
        f = make_frame(600)
        state = fit_pipeline(f, ["no", "no2"])
        out = transform_train(f, state)
        for c in ("no", "no2"):
            assert abs(out.column(c).mean()) < 1e-10
        # the target stays in original units (winsorized only)
        assert out.column("pm2_5").mean() > 10.0

    def test_winsorize_target_switch(self):
        f = make_frame(600)
        with_t = fit_pipeline(f, ["no"], winsorize_target=True)
        without_t = fit_pipeline(f, ["no"], winsorize_target=False)
        assert "pm2_5" in with_t.winsor.lo
        assert "pm2_5" not in without_t.winsor.lo

    def test_json_round_trip(self):
        state = fit_pipeline(make_frame(300), ["no", "co"])
        clone = PipelineState.from_json(state.to_json())
        assert clone == state
        assert clone.to_json() == state.to_json()

    def test_statistics_ignore_test_segment(self):
        f = make_frame(800)
        split = chrono_split(f, 0.8)
        state = fit_pipeline(split.train, ["no"])
        tampered = split.test.with_data(split.test.data * 100.0)
        # refitting on the same training window is unaffected by test edits
        assert fit_pipeline(split.train, ["no"]) == state
        del tampered

    def test_prognosis_view_scales_with_train_statistics(self):
        f = make_frame(600)
        split = chrono_split(f, 0.6)
        state = fit_pipeline(split.train, ["no", "no2"])
        window = weekly_windows(split.test)[0]
        view = prognosis_view(window, state)
        assert view.future_exog.shape == (168, 2)
        s = state.standardizer
        expected = (window.rows.column("no") - s.mean["no"]) / s.std["no"]
        np.testing.assert_allclose(view.future_exog[:, 0], expected,
                                   rtol=0, atol=1e-12)

    def test_prognosis_view_without_exog(self):
        f = make_frame(600)
        split = chrono_split(f, 0.6)
        state = fit_pipeline(split.train, [])
        view = prognosis_view(weekly_windows(split.test)[0], state)
        assert view.future_exog.shape == (168, 0)
