"""Direct multi-step autoregressive forecaster: a single linear map from
[168 lagged targets | per-horizon Fourier calendar features | per-horizon
future regressors] to all 168 outputs, trained by seeded mini-batch
gradient descent on mean squared error.

Lag values and targets are scaled by the training target mean/std
internally; the interface stays in original units.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import pandas as pd

from .errors import DimensionMismatch, NonFiniteLoss, TooShort

DAILY_HOURS = 24.0
WEEKLY_HOURS = 168.0
YEARLY_HOURS = 8766.0


@dataclass(frozen=True)
class ArNetConfig:
    n_lags: int = 168
    n_forecasts: int = 168
    epochs: int = 30
    batch_size: int = 128
    learning_rate: float = 0.001
    seed: int = 0
    daily_order: int = 3
    weekly_order: int = 2
    yearly_order: int = 1
    adam: bool = False  # optional adaptive-moment optimizer

    def __post_init__(self):
        for name in ("n_lags", "n_forecasts", "epochs", "batch_size"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")

    @property
    def fourier_dim(self) -> int:
        return 2 * (self.daily_order + self.weekly_order + self.yearly_order)


@dataclass(frozen=True)
class ArNetParams:
    config: ArNetConfig
    weights: np.ndarray       # (n_forecasts, n_inputs)
    bias: np.ndarray          # (n_forecasts,)
    target_mean: float
    target_std: float
    n_exog: int
    exog_columns: tuple[str, ...] = ()
    epoch_losses: tuple[float, ...] = ()


def _calendar_features(t_hours: np.ndarray, cfg: ArNetConfig) -> np.ndarray:
    cols = []
    for period, order in ((DAILY_HOURS, cfg.daily_order),
                          (WEEKLY_HOURS, cfg.weekly_order),
                          (YEARLY_HOURS, cfg.yearly_order)):
        for j in range(1, order + 1):
            arg = 2.0 * np.pi * j * t_hours / period
            cols.append(np.sin(arg))
            cols.append(np.cos(arg))
    return np.column_stack(cols) if cols else np.empty((len(t_hours), 0))


def make_windows(timestamps: pd.DatetimeIndex, y: np.ndarray,
                 exog: np.ndarray | None, cfg: ArNetConfig
                 ) -> tuple[np.ndarray, np.ndarray]:
    """Stride-1 sliding windows: sample count |y| - n_lags - n_forecasts + 1.

    Lag blocks are verbatim target values; scaling happens inside fit.
    """
    y = np.asarray(y, dtype=float)
    n = len(y)
    L, H = cfg.n_lags, cfg.n_forecasts
    n_samples = n - L - H + 1
    if n_samples < 1:
        raise TooShort(f"need at least {L + H} rows, got {n}")
    t_hours = timestamps.asi8 / 3.6e12
    cal = _calendar_features(t_hours, cfg)
    if exog is None:
        exog = np.empty((n, 0))
    exog = np.asarray(exog, dtype=float)
    k = exog.shape[1]

    X = np.empty((n_samples, L + H * cfg.fourier_dim + H * k))
    Y = np.empty((n_samples, H))
    for i in range(n_samples):
        o = i + L  # forecast origin: first predicted hour
        X[i, :L] = y[o - L:o]
        X[i, L:L + H * cfg.fourier_dim] = cal[o:o + H].ravel()
        if k:
            X[i, L + H * cfg.fourier_dim:] = exog[o:o + H].ravel()
        Y[i] = y[o:o + H]
    return X, Y


def loss_and_grad(W: np.ndarray, b: np.ndarray, X: np.ndarray,
                  Y: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    """MSE over all batch elements and horizons, with analytic gradients."""
    pred = X @ W.T + b
    err = pred - Y
    n_terms = err.size
    loss = float(np.sum(err ** 2) / n_terms)
    gW = 2.0 / n_terms * err.T @ X
    gb = 2.0 / n_terms * err.sum(axis=0)
    return loss, gW, gb


def _scale_inputs(X: np.ndarray, cfg: ArNetConfig, mean: float,
                  std: float) -> np.ndarray:
    Xs = X.copy()
    Xs[:, :cfg.n_lags] = (Xs[:, :cfg.n_lags] - mean) / std
    return Xs


def fit_arnet(X: np.ndarray, Y: np.ndarray, cfg: ArNetConfig,
              n_exog: int = 0,
              exog_columns: tuple[str, ...] = ()) -> ArNetParams:
    """Seeded mini-batch gradient descent; deterministic for a fixed seed."""
    if len(X) < 1:
        raise TooShort("need at least one training sample")
    mean = float(Y.mean())
    std = float(Y.std())
    if std == 0.0:
        std = 1.0
    Xs = _scale_inputs(X, cfg, mean, std)
    Ys = (Y - mean) / std

    rng = np.random.default_rng(cfg.seed)
    n, dim = Xs.shape
    W = np.zeros((cfg.n_forecasts, dim))
    b = np.zeros(cfg.n_forecasts)
    mW = vW = mb = vb = None
    if cfg.adam:
        mW, vW = np.zeros_like(W), np.zeros_like(W)
        mb, vb = np.zeros_like(b), np.zeros_like(b)
    step = 0
    epoch_losses = []
    for _ in range(cfg.epochs):
        idx = rng.permutation(n)
        batch_losses = []
        for start in range(0, n, cfg.batch_size):
            rows = idx[start:start + cfg.batch_size]
            loss, gW, gb = loss_and_grad(W, b, Xs[rows], Ys[rows])
            if not np.isfinite(loss):
                raise NonFiniteLoss(f"training diverged at step {step}")
            if cfg.adam:
                step += 1
                b1, b2, eps = 0.9, 0.999, 1e-8
                mW = b1 * mW + (1 - b1) * gW
                vW = b2 * vW + (1 - b2) * gW ** 2
                mb = b1 * mb + (1 - b1) * gb
                vb = b2 * vb + (1 - b2) * gb ** 2
                corr1 = 1 - b1 ** step
                corr2 = 1 - b2 ** step
                W -= cfg.learning_rate * (mW / corr1) / (np.sqrt(vW / corr2) + eps)
                b -= cfg.learning_rate * (mb / corr1) / (np.sqrt(vb / corr2) + eps)
            else:
                W -= cfg.learning_rate * gW
                b -= cfg.learning_rate * gb
            batch_losses.append(loss)
        epoch_losses.append(float(np.mean(batch_losses)))
    return ArNetParams(config=cfg, weights=W, bias=b, target_mean=mean,
                       target_std=std, n_exog=n_exog,
                       exog_columns=tuple(exog_columns),
                       epoch_losses=tuple(epoch_losses))


def forecast_arnet(params: ArNetParams, last_lags: np.ndarray,
                   future_timestamps: pd.DatetimeIndex,
                   future_exog: np.ndarray | None = None) -> np.ndarray:
    """Single linear map application; no recursive feedback."""
    cfg = params.config
    last_lags = np.asarray(last_lags, dtype=float)
    if len(last_lags) != cfg.n_lags:
        raise DimensionMismatch(f"need {cfg.n_lags} trailing target values")
    if len(future_timestamps) != cfg.n_forecasts:
        raise DimensionMismatch(f"need {cfg.n_forecasts} future timestamps")
    t_hours = future_timestamps.asi8 / 3.6e12
    cal = _calendar_features(t_hours, cfg).ravel()
    if params.n_exog:
        if future_exog is None:
            raise DimensionMismatch("fitted regressors require future exog")
        future_exog = np.asarray(future_exog, dtype=float)
        if future_exog.shape != (cfg.n_forecasts, params.n_exog):
            raise DimensionMismatch(
                f"future exog shape {future_exog.shape} != "
                f"({cfg.n_forecasts}, {params.n_exog})")
        exog_flat = future_exog.ravel()
    else:
        exog_flat = np.empty(0)
    lags_scaled = (last_lags - params.target_mean) / params.target_std
    x = np.concatenate([lags_scaled, cal, exog_flat])
    if x.shape[0] != params.weights.shape[1]:
        raise DimensionMismatch(
            f"input dim {x.shape[0]} != trained dim {params.weights.shape[1]}")
    out = params.weights @ x + params.bias
    return params.target_mean + params.target_std * out
