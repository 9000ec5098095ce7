"""Hourly time-series container, grid enforcement, splitting, and weekly windows.

Timestamps are stored as tz-aware UTC instants on an exact hourly grid.
All downstream stages assume the invariants enforced here: strictly
increasing gapless hourly index, no duplicates, equal-length columns.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import pandas as pd

from .errors import DuplicateTimestamp, EmptySegment, GridGap

HOUR = pd.Timedelta(hours=1)
WEEK_HOURS = 168

DEFAULT_TARGET = "pm2_5"


@dataclass(frozen=True)
class HourlyFrame:
    """Timestamp-indexed multivariate hourly table (target + regressors).

    ``data`` holds a UTC DatetimeIndex on an exact hourly grid. The frame is
    immutable: every transformation returns a new instance.
    """

    data: pd.DataFrame
    target_name: str = DEFAULT_TARGET

    def __len__(self) -> int:
        return len(self.data)

    @property
    def timestamps(self) -> pd.DatetimeIndex:
        return self.data.index

    @property
    def columns(self) -> list[str]:
        return list(self.data.columns)

    @property
    def start(self) -> pd.Timestamp:
        return self.data.index[0]

    @property
    def end(self) -> pd.Timestamp:
        return self.data.index[-1]

    def column(self, name: str) -> np.ndarray:
        return self.data[name].to_numpy(dtype=float)

    @property
    def target(self) -> np.ndarray:
        return self.column(self.target_name)

    def slice(self, start: int, stop: int) -> "HourlyFrame":
        """Positional row slice; invariants are preserved by contiguity."""
        return replace(self, data=self.data.iloc[start:stop])

    def with_data(self, data: pd.DataFrame) -> "HourlyFrame":
        return replace(self, data=data)


@dataclass(frozen=True)
class ChronoSplit:
    train: HourlyFrame
    test: HourlyFrame
    ratio: float


@dataclass(frozen=True)
class WeekWindow:
    """One 168-hour evaluation window of the test segment (1-based index)."""

    index: int
    start: pd.Timestamp
    rows: HourlyFrame
    horizon_hours: int = WEEK_HOURS


def _to_utc_index(values) -> pd.DatetimeIndex:
    idx = pd.DatetimeIndex(pd.to_datetime(values, utc=True))
    return idx


def enforce_hourly_grid(frame: pd.DataFrame | HourlyFrame,
                        target_name: str = DEFAULT_TARGET) -> HourlyFrame:
    """Sort rows by timestamp and verify the gapless hourly grid.

    A gap is a hard error, not an imputation trigger; duplicates are
    rejected even when the payload rows agree.
    """
    if isinstance(frame, HourlyFrame):
        df = frame.data
        target_name = frame.target_name
    else:
        df = frame
    if len(df) < 2:
        raise EmptySegment("need at least 2 rows to form an hourly grid")

    idx = _to_utc_index(df.index)
    df = df.set_axis(idx).sort_index()
    idx = df.index

    dup = idx.duplicated()
    if dup.any():
        raise DuplicateTimestamp(idx[dup][0])
    deltas = np.diff(idx.asi8)
    bad = np.nonzero(deltas != 3_600_000_000_000)[0]
    if bad.size:
        i = bad[0]
        raise GridGap(idx[i], idx[i + 1])
    if (idx.asi8 % 3_600_000_000_000 != 0).any():
        off = idx[idx.asi8 % 3_600_000_000_000 != 0][0]
        raise GridGap(off, off)
    if df.isna().any().any():
        raise EmptySegment("frame contains missing cells after alignment")
    return HourlyFrame(data=df.astype(float), target_name=target_name)


def chrono_split(frame: HourlyFrame, ratio: float) -> ChronoSplit:
    """Chronological train/test partition: first floor(ratio*N) rows train."""
    if not 0.0 < ratio < 1.0:
        raise EmptySegment(f"split ratio must lie in (0,1), got {ratio}")
    n = len(frame)
    n_train = int(np.floor(ratio * n))
    if n_train == 0 or n_train == n:
        raise EmptySegment(f"ratio {ratio} leaves an empty segment for N={n}")
    return ChronoSplit(train=frame.slice(0, n_train),
                       test=frame.slice(n_train, n),
                       ratio=ratio)


def weekly_windows(test: HourlyFrame) -> list[WeekWindow]:
    """Consecutive non-overlapping 168 h windows; trailing partial week dropped."""
    n_weeks = len(test) // WEEK_HOURS
    windows = []
    for w in range(n_weeks):
        rows = test.slice(w * WEEK_HOURS, (w + 1) * WEEK_HOURS)
        windows.append(WeekWindow(index=w + 1, start=rows.start, rows=rows))
    return windows
