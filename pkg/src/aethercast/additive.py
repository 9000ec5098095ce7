"""Decomposable additive forecaster: piecewise-linear trend with changepoints,
Fourier seasonalities (daily / weekly / yearly), and linear exogenous
regressors, fitted by ridge-regularized least squares.

The trend time axis is scaled to [0,1] over the training span; seasonal
columns use absolute hours since the epoch so calendar phase is preserved.
The prediction decomposes exactly into trend + seasonal + regressor parts.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy.linalg import cho_factor, cho_solve

from .errors import DimensionMismatch, SingularSystem

DAILY_HOURS = 24.0
WEEKLY_HOURS = 168.0
YEARLY_HOURS = 8766.0  # 365.25 days, avoids leap-year drift


@dataclass(frozen=True)
class AdditiveConfig:
    n_changepoints: int = 25
    changepoint_range: float = 0.8
    daily_order: int = 4
    weekly_order: int = 3
    yearly_order: int = 10
    trend_penalty: float = 0.5
    seasonal_penalty: float = 0.1
    regressor_penalty: float = 0.1

    def __post_init__(self):
        if min(self.trend_penalty, self.seasonal_penalty,
               self.regressor_penalty) < 0:
            raise ValueError("penalties must be nonnegative")
        if not 0 < self.changepoint_range <= 1:
            raise ValueError("changepoint_range must lie in (0,1]")

    def cycles(self) -> list[tuple[float, int]]:
        return [(DAILY_HOURS, self.daily_order),
                (WEEKLY_HOURS, self.weekly_order),
                (YEARLY_HOURS, self.yearly_order)]


@dataclass(frozen=True)
class AdditiveParams:
    config: AdditiveConfig
    k: float                     # base slope
    m: float                     # offset
    delta: np.ndarray            # changepoint slope adjustments
    seasonal: np.ndarray         # a_j/b_j pairs, all cycles concatenated
    gamma: np.ndarray            # regressor coefficients
    changepoints: np.ndarray     # on the scaled time axis
    t0_hours: float              # training span start, hours since epoch
    span_hours: float            # training span length in hours
    exog_columns: tuple[str, ...] = ()


@dataclass(frozen=True)
class ForecastComponents:
    total: np.ndarray
    trend: np.ndarray
    seasonal: np.ndarray
    regressors: np.ndarray


def _hours_since_epoch(timestamps: pd.DatetimeIndex) -> np.ndarray:
    return timestamps.asi8 / 3.6e12


def _seasonal_block(t_hours: np.ndarray, cycles) -> np.ndarray:
    cols = []
    for period, order in cycles:
        for j in range(1, order + 1):
            arg = 2.0 * np.pi * j * t_hours / period
            cols.append(np.sin(arg))
            cols.append(np.cos(arg))
    return np.column_stack(cols) if cols else np.empty((len(t_hours), 0))


def build_design_matrix(timestamps: pd.DatetimeIndex,
                        exog: np.ndarray | None,
                        cfg: AdditiveConfig,
                        changepoints: np.ndarray,
                        t0_hours: float,
                        span_hours: float):
    """Columns: [1, t, hinge per changepoint, Fourier pairs, regressors]."""
    t_hours = _hours_since_epoch(timestamps)
    t = (t_hours - t0_hours) / span_hours
    cols = [np.ones_like(t), t]
    for cp in changepoints:
        cols.append(np.maximum(t - cp, 0.0))
    trend_block = np.column_stack(cols)
    seasonal = _seasonal_block(t_hours, cfg.cycles())
    if exog is None:
        exog = np.empty((len(t), 0))
    D = np.hstack([trend_block, seasonal, exog])
    meta = {
        "n_trend": 2,
        "n_delta": len(changepoints),
        "n_seasonal": seasonal.shape[1],
        "n_exog": exog.shape[1],
    }
    return D, meta


def _penalty_diagonal(cfg: AdditiveConfig, meta: dict) -> np.ndarray:
    return np.concatenate([
        np.zeros(meta["n_trend"]),
        np.full(meta["n_delta"], cfg.trend_penalty),
        np.full(meta["n_seasonal"], cfg.seasonal_penalty),
        np.full(meta["n_exog"], cfg.regressor_penalty),
    ])


def fit_additive(timestamps: pd.DatetimeIndex, y: np.ndarray,
                 exog: np.ndarray | None = None,
                 cfg: AdditiveConfig = AdditiveConfig(),
                 exog_columns: tuple[str, ...] = ()) -> AdditiveParams:
    """Per-block ridge solve via normal equations (SPD factorization)."""
    t_hours = _hours_since_epoch(timestamps)
    t0, t1 = t_hours[0], t_hours[-1]
    span = t1 - t0
    if span < 2 * WEEKLY_HOURS:
        raise ValueError("training span must cover at least 2 weeks")
    n_cp = cfg.n_changepoints
    changepoints = (cfg.changepoint_range
                    * np.arange(1, n_cp + 1) / (n_cp + 1))
    D, meta = build_design_matrix(timestamps, exog, cfg, changepoints, t0, span)
    lam = _penalty_diagonal(cfg, meta)
    # Penalties act on the standardized design; coefficients are folded back
    # to the raw design space afterwards so forecasting stays unchanged.
    mu = D.mean(axis=0)
    sd = D.std(axis=0)
    mu[0], sd[0] = 0.0, 1.0
    sd[sd == 0.0] = 1.0
    Ds = (D - mu) / sd
    G = Ds.T @ Ds + np.diag(lam)
    rhs = Ds.T @ np.asarray(y, dtype=float)
    try:
        ws = cho_solve(cho_factor(G), rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    except Exception as exc:
        if "positive definite" in str(exc) or "singular" in str(exc).lower():
            raise SingularSystem(str(exc)) from exc
        raise
    w = ws / sd
    w[0] = ws[0] - np.sum(w[1:] * mu[1:])
    i = 0
    m_off, k_slope = w[0], w[1]
    i = 2
    delta = w[i:i + meta["n_delta"]]
    i += meta["n_delta"]
    seasonal = w[i:i + meta["n_seasonal"]]
    i += meta["n_seasonal"]
    gamma = w[i:]
    return AdditiveParams(config=cfg, k=float(k_slope), m=float(m_off),
                          delta=delta, seasonal=seasonal, gamma=gamma,
                          changepoints=changepoints, t0_hours=float(t0),
                          span_hours=float(span),
                          exog_columns=tuple(exog_columns))


def forecast_additive(params: AdditiveParams,
                      future_timestamps: pd.DatetimeIndex,
                      future_exog: np.ndarray | None = None
                      ) -> ForecastComponents:
    """Evaluate trend + seasonal + regressor parts; trend extrapolates the
    final piecewise segment linearly."""
    cfg = params.config
    t_hours = _hours_since_epoch(future_timestamps)
    t = (t_hours - params.t0_hours) / params.span_hours
    trend = params.m + params.k * t
    for cp, d in zip(params.changepoints, params.delta):
        trend = trend + d * np.maximum(t - cp, 0.0)
    seasonal_cols = _seasonal_block(t_hours, cfg.cycles())
    seasonal = seasonal_cols @ params.seasonal if seasonal_cols.size else \
        np.zeros(len(t))
    if len(params.gamma):
        if future_exog is None:
            raise DimensionMismatch("fitted regressors require future exog")
        future_exog = np.asarray(future_exog, dtype=float)
        if future_exog.ndim == 1:
            future_exog = future_exog[:, None]
        if future_exog.shape[1] != len(params.gamma):
            raise DimensionMismatch(
                f"exog has {future_exog.shape[1]} columns, model expects "
                f"{len(params.gamma)}")
        regressors = future_exog @ params.gamma
    else:
        regressors = np.zeros(len(t))
    return ForecastComponents(total=trend + seasonal + regressors,
                              trend=trend, seasonal=seasonal,
                              regressors=regressors)
