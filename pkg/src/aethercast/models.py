"""Uniform forecaster adapters over the three engines.

Each adapter fits on a preprocessed training frame (winsorized, exogenous
columns standardized, target in original units) and produces a 168-hour
forecast from a perfect-prognosis view of the target week.
"""
from __future__ import annotations

import numpy as np

from . import additive, arnet
from .preprocess import PerfectPrognosisView
from .sarimax import SarimaxOrder, fit_sarimax, forecast_sarimax
from .series import HourlyFrame

MODEL_NAMES = ("sarimax", "additive", "arnet")


class Forecaster:
    name = "base"

    def fit(self, train: HourlyFrame, exog_columns: list[str]) -> None:
        raise NotImplementedError

    def forecast(self, view: PerfectPrognosisView) -> np.ndarray:
        raise NotImplementedError

    def forecast_many(self, views: list[PerfectPrognosisView]) -> list[np.ndarray]:
        """Forecast several consecutive weeks without refitting.

        Used by the frozen regime; implementations must not condition on
        observations revealed after the training window.
        """
        return [self.forecast(v) for v in views]

    def warm_start_from(self, prev: "Forecaster") -> None:
        """Hook for walk-forward refits; default is a cold start."""

    def params_json(self) -> str:
        raise NotImplementedError


class SarimaxForecaster(Forecaster):
    name = "sarimax"

    def __init__(self, order: SarimaxOrder = SarimaxOrder(),
                 include_intercept: bool = True):
        self.order = order
        self.include_intercept = include_intercept
        self.params = None
        self._start = None
        self._y = None
        self._exog = None

    def warm_start_from(self, prev: "SarimaxForecaster") -> None:
        if prev is not None and prev.params is not None:
            self._start = prev.params

    def fit(self, train: HourlyFrame, exog_columns: list[str]) -> None:
        self._y = train.target
        self._exog = (np.column_stack([train.column(c) for c in exog_columns])
                      if exog_columns else None)
        self.params = fit_sarimax(self._y, self._exog, order=self.order,
                                  include_intercept=self.include_intercept,
                                  start=self._start,
                                  exog_columns=tuple(exog_columns))

    def forecast(self, view: PerfectPrognosisView) -> np.ndarray:
        fut = view.future_exog if view.future_exog.shape[1] else None
        return forecast_sarimax(self.params, self._y, self._exog, fut,
                                h=len(view.window.rows))

    def forecast_many(self, views: list[PerfectPrognosisView]) -> list[np.ndarray]:
        # One long forecast from the training end keeps the predictions
        # independent of observations revealed during the test period.
        h = sum(len(v.window.rows) for v in views)
        if views[0].future_exog.shape[1]:
            fut = np.vstack([v.future_exog for v in views])
        else:
            fut = None
        full = forecast_sarimax(self.params, self._y, self._exog, fut, h=h)
        out, i = [], 0
        for v in views:
            n = len(v.window.rows)
            out.append(full[i:i + n])
            i += n
        return out

    def params_json(self) -> str:
        return self.params.to_json()


class AdditiveForecaster(Forecaster):
    name = "additive"

    def __init__(self, cfg: additive.AdditiveConfig | None = None):
        self.cfg = cfg or additive.AdditiveConfig()
        self.params = None

    def fit(self, train: HourlyFrame, exog_columns: list[str]) -> None:
        exog = (np.column_stack([train.column(c) for c in exog_columns])
                if exog_columns else None)
        self.params = additive.fit_additive(train.timestamps, train.target,
                                            exog, cfg=self.cfg,
                                            exog_columns=tuple(exog_columns))

    def forecast(self, view: PerfectPrognosisView) -> np.ndarray:
        fut = view.future_exog if view.future_exog.shape[1] else None
        comp = additive.forecast_additive(self.params,
                                          view.window.rows.timestamps, fut)
        return comp.total

    def forecast_components(self, view: PerfectPrognosisView):
        fut = view.future_exog if view.future_exog.shape[1] else None
        return additive.forecast_additive(self.params,
                                          view.window.rows.timestamps, fut)


class ArNetForecaster(Forecaster):
    name = "arnet"

    def __init__(self, cfg: arnet.ArNetConfig | None = None):
        self.cfg = cfg or arnet.ArNetConfig()
        self.params = None
        self._last_lags = None

    def fit(self, train: HourlyFrame, exog_columns: list[str]) -> None:
        y = train.target
        exog = (np.column_stack([train.column(c) for c in exog_columns])
                if exog_columns else None)
        X, Y = arnet.make_windows(train.timestamps, y, exog, self.cfg)
        self.params = arnet.fit_arnet(X, Y, self.cfg,
                                      n_exog=len(exog_columns),
                                      exog_columns=tuple(exog_columns))
        self._last_lags = y[-self.cfg.n_lags:]

    def forecast(self, view: PerfectPrognosisView) -> np.ndarray:
        fut = view.future_exog if view.future_exog.shape[1] else None
        return arnet.forecast_arnet(self.params, self._last_lags,
                                    view.window.rows.timestamps, fut)

    def forecast_many(self, views: list[PerfectPrognosisView]) -> list[np.ndarray]:
        # Chain predicted weeks as lag inputs so no revealed test
        # observation leaks into the frozen base forecasts.
        lags = self._last_lags
        out = []
        for v in views:
            fut = v.future_exog if v.future_exog.shape[1] else None
            pred = arnet.forecast_arnet(self.params, lags,
                                        v.window.rows.timestamps, fut)
            out.append(pred)
            lags = np.concatenate([lags, pred])[-self.cfg.n_lags:]
        return out


def make_forecaster(name: str, *, sarimax_order: SarimaxOrder | None = None,
                    additive_cfg: additive.AdditiveConfig | None = None,
                    arnet_cfg: arnet.ArNetConfig | None = None) -> Forecaster:
    if name == "sarimax":
        return SarimaxForecaster(order=sarimax_order or SarimaxOrder())
    if name == "additive":
        return AdditiveForecaster(cfg=additive_cfg)
    if name == "arnet":
        return ArNetForecaster(cfg=arnet_cfg)
    raise ValueError(f"unknown model {name!r}; expected one of {MODEL_NAMES}")
