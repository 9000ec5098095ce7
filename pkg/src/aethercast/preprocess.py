"""Leakage-safe winsorization and standardization.

All statistics are fitted on a training window only and applied unchanged
to any other segment. The forecast target stays in its original units:
the standardizer never covers it, and winsorization of the target is a
config switch (on for fitting windows by default, never for scoring).
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import MissingColumn, ZeroVariance
from .series import HourlyFrame, WeekWindow


@dataclass(frozen=True)
class WinsorBounds:
    """Per-column clip bounds at the (p_lo, p_hi) training quantiles."""

    p_lo: float
    p_hi: float
    lo: dict[str, float]
    hi: dict[str, float]


@dataclass(frozen=True)
class Standardizer:
    """Per-regressor mean/std from the training window; target excluded."""

    mean: dict[str, float]
    std: dict[str, float]

    @property
    def columns(self) -> list[str]:
        return list(self.mean)


@dataclass(frozen=True)
class PerfectPrognosisView:
    """Held-out future regressors for one week, train-scaled, never refitted."""

    window: WeekWindow
    future_exog: np.ndarray  # (168, n_regressors)
    exog_columns: list[str]


def fit_winsor(train: HourlyFrame, p_lo: float = 0.01,
               p_hi: float = 0.99,
               columns: list[str] | None = None) -> WinsorBounds:
    """Linear-interpolation quantile bounds per column, train rows only."""
    if not 0.0 <= p_lo < p_hi <= 1.0:
        raise ValueError(f"need 0 <= p_lo < p_hi <= 1, got ({p_lo}, {p_hi})")
    if len(train) < 2:
        raise ValueError("winsor bounds need at least 2 training rows")
    cols = columns if columns is not None else train.columns
    lo, hi = {}, {}
    for c in cols:
        v = train.column(c)
        lo[c] = float(np.quantile(v, p_lo))
        hi[c] = float(np.quantile(v, p_hi))
        if lo[c] == hi[c]:
            warnings.warn(f"degenerate winsor bounds for column {c!r} "
                          f"(constant within percentile range)")
    return WinsorBounds(p_lo=p_lo, p_hi=p_hi, lo=lo, hi=hi)


def apply_winsor(frame: HourlyFrame, bounds: WinsorBounds) -> HourlyFrame:
    df = frame.data.copy()
    for c, lo in bounds.lo.items():
        if c in df.columns:
            df[c] = df[c].clip(lower=lo, upper=bounds.hi[c])
    return frame.with_data(df)


def fit_standardizer(train: HourlyFrame, regressors: list[str]) -> Standardizer:
    """Population mean/std per regressor from the training window only."""
    if train.target_name in regressors:
        raise ValueError(f"target column {train.target_name!r} must stay in "
                         "original units and cannot be standardized")
    mean, std = {}, {}
    for c in regressors:
        if c not in train.columns:
            raise MissingColumn(c)
        v = train.column(c)
        m = float(np.mean(v))
        s = float(np.std(v))  # population formula
        if s == 0.0:
            raise ZeroVariance(c)
        mean[c], std[c] = m, s
    return Standardizer(mean=mean, std=std)


def apply_standardizer(frame: HourlyFrame, s: Standardizer) -> HourlyFrame:
    df = frame.data.copy()
    for c in s.columns:
        if c not in df.columns:
            raise MissingColumn(c)
        df[c] = (df[c] - s.mean[c]) / s.std[c]
    return frame.with_data(df)


@dataclass(frozen=True)
class PipelineState:
    """Fitted preprocessing bound to one training window, JSON-serializable."""

    winsor: WinsorBounds
    standardizer: Standardizer
    exog_columns: list[str]
    train_start: str
    train_end: str

    def to_json(self) -> str:
        doc = {
            "winsor": {"p_lo": self.winsor.p_lo, "p_hi": self.winsor.p_hi,
                       "lo": self.winsor.lo, "hi": self.winsor.hi},
            "standardizer": {"mean": self.standardizer.mean,
                             "std": self.standardizer.std},
            "exog_columns": self.exog_columns,
            "train_start": self.train_start,
            "train_end": self.train_end,
        }
        return json.dumps(doc, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "PipelineState":
        doc = json.loads(text)
        return cls(
            winsor=WinsorBounds(p_lo=doc["winsor"]["p_lo"],
                                p_hi=doc["winsor"]["p_hi"],
                                lo=doc["winsor"]["lo"],
                                hi=doc["winsor"]["hi"]),
            standardizer=Standardizer(mean=doc["standardizer"]["mean"],
                                      std=doc["standardizer"]["std"]),
            exog_columns=doc["exog_columns"],
            train_start=doc["train_start"],
            train_end=doc["train_end"],
        )


def fit_pipeline(train: HourlyFrame, exog_columns: list[str],
                 p_lo: float = 0.01, p_hi: float = 0.99,
                 winsorize_target: bool = True) -> PipelineState:
    """Fit winsor bounds and regressor standardizer on one training window."""
    cols = list(train.columns)
    if not winsorize_target:
        cols = [c for c in cols if c != train.target_name]
    bounds = fit_winsor(train, p_lo, p_hi, columns=cols)
    clipped = apply_winsor(train, bounds)
    scaler = fit_standardizer(clipped, exog_columns)
    return PipelineState(winsor=bounds, standardizer=scaler,
                         exog_columns=list(exog_columns),
                         train_start=train.start.isoformat(),
                         train_end=train.end.isoformat())


def transform_train(train: HourlyFrame, state: PipelineState) -> HourlyFrame:
    """Winsorize then standardize the training window with its own state."""
    return apply_standardizer(apply_winsor(train, state.winsor),
                              state.standardizer)


def prognosis_view(window: WeekWindow, state: PipelineState) -> PerfectPrognosisView:
    """Standardize the window's observed regressors with the train-fitted scaler.

    The target column and the actuals used for scoring stay raw.
    """
    scaled = apply_standardizer(window.rows, state.standardizer)
    mat = np.column_stack([scaled.column(c) for c in state.exog_columns]) \
        if state.exog_columns else np.empty((len(window.rows), 0))
    return PerfectPrognosisView(window=window, future_exog=mat,
                                exog_columns=list(state.exog_columns))
