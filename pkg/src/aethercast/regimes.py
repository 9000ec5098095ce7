"""Deployment regimes: weekly walk-forward refitting, and a frozen base
model with online residual (bias) correction.

Residuals are always computed against the base (uncorrected) prediction,
and the bias for week w uses only weeks observed before w's start. Model
failures mid-run yield a partial result rather than losing completed weeks.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np
import pandas as pd

from .errors import IncompleteWeek
from .models import Forecaster
from .preprocess import PipelineState, fit_pipeline, prognosis_view, transform_train
from .series import ChronoSplit, HourlyFrame, WEEK_HOURS, WeekWindow

REGIME_NAMES = ("walkforward", "frozen", "frozen-corrected")


@dataclass(frozen=True)
class PrepSpec:
    """Preprocessing settings refitted on every training window."""

    exog_columns: tuple[str, ...]
    p_lo: float = 0.01
    p_hi: float = 0.99
    winsorize_target: bool = True


@dataclass(frozen=True)
class BiasState:
    """Scalar residual-correction offset carried across weeks."""

    w: int
    b: float
    alpha: float


@dataclass
class ForecastRecord:
    week: WeekWindow
    base_pred: np.ndarray
    corrected_pred: np.ndarray
    actual: np.ndarray
    residuals: np.ndarray          # actual - base_pred
    model_tag: str
    regime_tag: str
    bias: float = 0.0
    fit_seconds: float = 0.0


@dataclass
class RegimeResult:
    records: list[ForecastRecord]
    partial: bool = False
    failed_week: int | None = None
    error: str | None = None


def _prep_and_fit(model: Forecaster, window_frame: HourlyFrame,
                  prep: PrepSpec) -> tuple[PipelineState, float]:
    state = fit_pipeline(window_frame, list(prep.exog_columns),
                         p_lo=prep.p_lo, p_hi=prep.p_hi,
                         winsorize_target=prep.winsorize_target)
    t0 = time.perf_counter()
    model.fit(transform_train(window_frame, state), list(prep.exog_columns))
    return state, time.perf_counter() - t0


def _record(window: WeekWindow, base: np.ndarray, corrected: np.ndarray,
            model_tag: str, regime_tag: str, bias: float,
            fit_seconds: float) -> ForecastRecord:
    actual = window.rows.target
    return ForecastRecord(week=window, base_pred=np.asarray(base),
                          corrected_pred=np.asarray(corrected),
                          actual=actual, residuals=actual - np.asarray(base),
                          model_tag=model_tag, regime_tag=regime_tag,
                          bias=bias, fit_seconds=fit_seconds)


def run_walk_forward(make_model, split: ChronoSplit,
                     windows: list[WeekWindow], prep: PrepSpec) -> RegimeResult:
    """Refit preprocessing and model per week on the expanding window."""
    records: list[ForecastRecord] = []
    prev_model: Forecaster | None = None
    full = pd.concat([split.train.data, split.test.data])
    n_train = len(split.train)
    for window in windows:
        n_revealed = n_train + WEEK_HOURS * (window.index - 1)
        expanding = split.train.with_data(full.iloc[:n_revealed])
        model: Forecaster = make_model()
        if prev_model is not None:
            model.warm_start_from(prev_model)
        try:
            state, fit_s = _prep_and_fit(model, expanding, prep)
            view = prognosis_view(window, state)
            pred = model.forecast(view)
        except Exception as exc:
            return RegimeResult(records=records, partial=True,
                                failed_week=window.index,
                                error=f"week {window.index}: {exc}")
        records.append(_record(window, pred, pred, model.name, "walkforward",
                               0.0, fit_s))
        prev_model = model
    return RegimeResult(records=records)


def run_frozen(make_model, split: ChronoSplit, windows: list[WeekWindow],
               prep: PrepSpec) -> RegimeResult:
    """One fit on the initial training set; per-week base forecasts only."""
    model: Forecaster = make_model()
    try:
        state, fit_s = _prep_and_fit(model, split.train, prep)
        views = [prognosis_view(w, state) for w in windows]
        preds = model.forecast_many(views)
    except Exception as exc:
        return RegimeResult(records=[], partial=True,
                            failed_week=windows[0].index if windows else None,
                            error=str(exc))
    records = [_record(w, p, p, model.name, "frozen", 0.0,
                       fit_s if w.index == 1 else 0.0)
               for w, p in zip(windows, preds)]
    return RegimeResult(records=records)


def mean_week_residual(record: ForecastRecord) -> float:
    """Mean of the week's residuals against the base prediction."""
    if len(record.residuals) != WEEK_HOURS:
        raise IncompleteWeek(
            f"week {record.week.index} has {len(record.residuals)} hours")
    return float(np.mean(record.residuals))


def ewma_update(prev: BiasState, mean_resid_prev_week: float) -> BiasState:
    """b_w = alpha * mean residual of the previous week + (1-alpha) * b_{w-1}."""
    return BiasState(w=prev.w + 1,
                     b=prev.alpha * mean_resid_prev_week
                       + (1.0 - prev.alpha) * prev.b,
                     alpha=prev.alpha)


def apply_correction(base_pred: np.ndarray, bias: BiasState) -> np.ndarray:
    return np.asarray(base_pred, dtype=float) + bias.b


@dataclass
class KalmanBias:
    """Optional scalar random-walk-plus-noise alternative to the EWMA update."""

    state_var: float = 1.0        # random-walk innovation variance
    obs_var: float = 10.0         # weekly-mean-residual observation variance
    b: float = 0.0
    p: float = 0.0

    def update(self, mean_resid: float) -> float:
        self.p += self.state_var
        gain = self.p / (self.p + self.obs_var)
        self.b += gain * (mean_resid - self.b)
        self.p *= 1.0 - gain
        return self.b


def run_frozen_corrected(make_model, split: ChronoSplit,
                         windows: list[WeekWindow], prep: PrepSpec,
                         alpha: float = 0.3,
                         kalman_bias: KalmanBias | None = None) -> RegimeResult:
    """Frozen base forecasts plus week-sequential residual correction."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0,1), got {alpha}")
    result = run_frozen(make_model, split, windows, prep)
    bias = BiasState(w=1, b=0.0, alpha=alpha)
    corrected_records = []
    for record in result.records:
        corrected = apply_correction(record.base_pred, bias)
        corrected_records.append(replace(
            record, corrected_pred=corrected, bias=bias.b,
            regime_tag="frozen-corrected"))
        resid_mean = mean_week_residual(record)
        if kalman_bias is not None:
            bias = BiasState(w=bias.w + 1, b=kalman_bias.update(resid_mean),
                             alpha=alpha)
        else:
            bias = ewma_update(bias, resid_mean)
    return RegimeResult(records=corrected_records, partial=result.partial,
                        failed_week=result.failed_week, error=result.error)
