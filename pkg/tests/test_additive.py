import numpy as np
import pytest

from aethercast.additive import (AdditiveConfig, AdditiveParams,
                                 build_design_matrix, fit_additive,
                                 forecast_additive)
from aethercast.errors import DimensionMismatch
from helpers import hourly_index


def fit_and_design(n, y, cfg, exog=None):
    idx = hourly_index(n)
    params = fit_additive(idx, y, exog, cfg)
    D, meta = build_design_matrix(idx, exog, cfg, params.changepoints,
                                  params.t0_hours, params.span_hours)
    return idx, params, D, meta


def stack_coefficients(params):
    return np.concatenate([[params.m, params.k], params.delta,
                           params.seasonal, params.gamma])


class TestDesignMatrix:
    def test_minimal_column_count(self):
        cfg = AdditiveConfig(n_changepoints=0, daily_order=1, weekly_order=0,
                             yearly_order=0)
        idx = hourly_index(48)
        D, meta = build_design_matrix(idx, None, cfg, np.empty(0),
                                      idx.asi8[0] / 3.6e12, 47.0)
        assert D.shape == (48, 4)  # 1, t, sin, cos
        assert meta == {"n_trend": 2, "n_delta": 0, "n_seasonal": 2,
                        "n_exog": 0}

    def test_hinge_is_zero_at_changepoint(self):
        cfg = AdditiveConfig(n_changepoints=0, daily_order=1, weekly_order=0,
                             yearly_order=0)
        idx = hourly_index(11)
        cp = np.array([0.5])
        D, _ = build_design_matrix(idx, None, cfg, cp,
                                   idx.asi8[0] / 3.6e12, 10.0)
        hinge = D[:, 2]
        assert hinge[5] == 0.0          # t = 0.5 exactly
        assert np.all(hinge[:6] == 0.0)
        assert np.all(hinge[6:] > 0.0)

    def test_daily_columns_are_periodic(self):
        cfg = AdditiveConfig(n_changepoints=0, daily_order=2, weekly_order=0,
                             yearly_order=0)
        idx = hourly_index(49)
        D, _ = build_design_matrix(idx, None, cfg, np.empty(0),
                                   idx.asi8[0] / 3.6e12, 48.0)
        # absolute-hour phases are ~5e5, so allow for sin/cos argument
        # rounding at that magnitude
        np.testing.assert_allclose(D[0, 2:6], D[24, 2:6], atol=1e-9)
        np.testing.assert_allclose(D[24, 2:6], D[48, 2:6], atol=1e-9)


class TestFit:
    def test_exact_daily_sinusoid_with_zero_penalties(self):
        cfg = AdditiveConfig(n_changepoints=0, daily_order=1, weekly_order=0,
                             yearly_order=0, trend_penalty=0.0,
                             seasonal_penalty=0.0, regressor_penalty=0.0)
        n = 24 * 21
        t = np.arange(n)
        y = 3.0 + 2.0 * np.sin(2 * np.pi * t / 24)
        _, params, _, _ = fit_and_design(n, y, cfg)
        assert params.m == pytest.approx(3.0, abs=1e-8)
        assert params.seasonal[0] == pytest.approx(2.0, abs=1e-8)
        assert abs(params.k) < 1e-8

    def test_pure_ramp_gives_zero_deltas(self):
        cfg = AdditiveConfig(n_changepoints=5, daily_order=1, weekly_order=1,
                             yearly_order=0, trend_penalty=0.1,
                             seasonal_penalty=0.1, regressor_penalty=0.1)
        n = 24 * 28
        y = 4.0 + 0.01 * np.arange(n)
        _, params, _, _ = fit_and_design(n, y, cfg)
        assert np.max(np.abs(params.delta)) < 1e-6
        # slope recovered on the scaled axis: k = 0.01 * (n-1)
        assert params.k == pytest.approx(0.01 * (n - 1), rel=1e-6)

    def test_zero_penalty_fit_matches_qr_oracle(self):
        cfg = AdditiveConfig(n_changepoints=3, daily_order=2, weekly_order=1,
                             yearly_order=0, trend_penalty=0.0,
                             seasonal_penalty=0.0, regressor_penalty=0.0)
        rng = np.random.default_rng(0)
        n = 24 * 30
        t = np.arange(n)
        y = (20 + 0.02 * t + 5 * np.sin(2 * np.pi * t / 24)
             + rng.normal(0, 1, n))
        exog = rng.normal(size=(n, 2))
        _, params, D, _ = fit_and_design(n, y, cfg, exog=exog)
        w_oracle, *_ = np.linalg.lstsq(D, y, rcond=None)
        np.testing.assert_allclose(stack_coefficients(params), w_oracle,
                                   atol=1e-8)

    def test_short_span_rejected(self):
        with pytest.raises(ValueError):
            fit_additive(hourly_index(100), np.arange(100.0))

    def test_deterministic(self):
        rng = np.random.default_rng(1)
        n = 24 * 30
        y = 30 + rng.normal(0, 3, n)
        idx = hourly_index(n)
        a = fit_additive(idx, y)
        b = fit_additive(idx, y)
        np.testing.assert_array_equal(a.delta, b.delta)
        np.testing.assert_array_equal(a.seasonal, b.seasonal)


class TestForecast:
    def constant_params(self, m=7.0):
        cfg = AdditiveConfig(n_changepoints=2, daily_order=1, weekly_order=1,
                             yearly_order=1)
        n_seas = 2 * (1 + 1 + 1)
        idx = hourly_index(1)
        return AdditiveParams(config=cfg, k=0.0, m=m,
                              delta=np.zeros(2), seasonal=np.zeros(n_seas),
                              gamma=np.empty(0),
                              changepoints=np.array([0.3, 0.6]),
                              t0_hours=idx.asi8[0] / 3.6e12,
                              span_hours=1000.0)

    def test_constant_offset_forecast(self):
        params = self.constant_params(m=7.0)
        out = forecast_additive(params, hourly_index(24, "2024-02-01"))
        np.testing.assert_allclose(out.total, np.full(24, 7.0), atol=1e-12)

    def test_sinusoid_extrapolates_one_week_ahead(self):
        cfg = AdditiveConfig(n_changepoints=0, daily_order=1, weekly_order=0,
                             yearly_order=0, trend_penalty=0.0,
                             seasonal_penalty=0.0, regressor_penalty=0.0)
        n = 24 * 28
        t = np.arange(n + 168)
        y = 10.0 + 4.0 * np.sin(2 * np.pi * t / 24)
        idx = hourly_index(n + 168)
        params = fit_additive(idx[:n], y[:n], None, cfg)
        out = forecast_additive(params, idx[n:])
        np.testing.assert_allclose(out.total, y[n:], atol=1e-6)

    def test_decomposition_identity(self):
        rng = np.random.default_rng(3)
        cfg = AdditiveConfig(n_changepoints=4, daily_order=2, weekly_order=1,
                             yearly_order=1)
        n_seas = 2 * (2 + 1 + 1)
        idx = hourly_index(1)
        params = AdditiveParams(
            config=cfg, k=rng.normal(), m=rng.normal(),
            delta=rng.normal(size=4), seasonal=rng.normal(size=n_seas),
            gamma=rng.normal(size=2),
            changepoints=np.array([0.2, 0.4, 0.6, 0.8]),
            t0_hours=idx.asi8[0] / 3.6e12, span_hours=2000.0)
        future = hourly_index(168, "2024-03-01")
        exog = rng.normal(size=(168, 2))
        out = forecast_additive(params, future, exog)
        np.testing.assert_allclose(out.total,
                                   out.trend + out.seasonal + out.regressors,
                                   atol=1e-10)

    def test_missing_future_exog_rejected(self):
        params = self.constant_params()
        params = AdditiveParams(
            config=params.config, k=params.k, m=params.m, delta=params.delta,
            seasonal=params.seasonal, gamma=np.array([1.0]),
            changepoints=params.changepoints, t0_hours=params.t0_hours,
            span_hours=params.span_hours)
        with pytest.raises(DimensionMismatch):
            forecast_additive(params, hourly_index(24))

    def test_exog_column_count_checked(self):
        params = self.constant_params()
        params = AdditiveParams(
            config=params.config, k=params.k, m=params.m, delta=params.delta,
            seasonal=params.seasonal, gamma=np.array([1.0, 2.0]),
            changepoints=params.changepoints, t0_hours=params.t0_hours,
            span_hours=params.span_hours)
        with pytest.raises(DimensionMismatch):
            forecast_additive(params, hourly_index(24), np.ones((24, 1)))
